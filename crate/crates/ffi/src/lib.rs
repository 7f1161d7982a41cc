//! C ABI over `opball`.
//!
//! Matrices cross the boundary as opaque [`OpballMatrix`] handles built from
//! row-major buffers (complex data interleaved `re, im`). Every fallible call
//! returns an [`OpballStatus`]; the message of the most recent failure on the
//! calling thread is available from [`opball_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use opball::ball::{self, BallPoint};
use opball::cli::{self, Overrides};
use opball::{Error, Field};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpballStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singular = 3,
    NotFinite = 4,
    Numerical = 5,
    Panic = 6,
}

/// Opaque matrix handle.
pub struct OpballMatrix {
    data: DMatrix<Complex64>,
    complex: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> OpballStatus {
    match e {
        Error::Validation { .. } | Error::NotAGraph { .. } | Error::NotNegative { .. } => OpballStatus::InvalidArgument,
        Error::Singular { .. } => OpballStatus::Singular,
        Error::NotFinite { .. } => OpballStatus::NotFinite,
        _ => OpballStatus::Numerical,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), (OpballStatus, String)>) -> OpballStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OpballStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OpballStatus::Panic
        }
    }
}

fn fail(e: Error) -> (OpballStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (OpballStatus, String) {
    (OpballStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(m: *const OpballMatrix, what: &str) -> Result<&'a OpballMatrix, (OpballStatus, String)> {
    m.as_ref().ok_or_else(|| null(what))
}

fn boxed(data: DMatrix<Complex64>, complex: bool) -> *mut OpballMatrix {
    Box::into_raw(Box::new(OpballMatrix { data, complex }))
}

unsafe fn build(
    rows: usize,
    cols: usize,
    data: *const f64,
    complex: bool,
    out: *mut *mut OpballMatrix,
) -> OpballStatus {
    guarded(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if rows == 0 || cols == 0 {
            return Err((OpballStatus::InvalidArgument, "dimensions must be positive".into()));
        }
        let stride = if complex { 2 } else { 1 };
        let buf = std::slice::from_raw_parts(data, rows * cols * stride);
        if buf.iter().any(|x| !x.is_finite()) {
            return Err((OpballStatus::InvalidArgument, "entries must be finite".into()));
        }
        let m = DMatrix::from_fn(rows, cols, |i, j| {
            let p = (i * cols + j) * stride;
            Complex64::new(buf[p], if complex { buf[p + 1] } else { 0.0 })
        });
        *out = boxed(m, complex);
        Ok(())
    })
}

/// Create a real matrix from `rows * cols` row-major doubles.
///
/// # Safety
/// `data` must point to `rows * cols` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_new_real(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut OpballMatrix,
) -> OpballStatus {
    build(rows, cols, data, false, out)
}

/// Create a complex matrix from `2 * rows * cols` interleaved row-major doubles.
///
/// # Safety
/// `data` must point to `2 * rows * cols` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_new_complex(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut OpballMatrix,
) -> OpballStatus {
    build(rows, cols, data, true, out)
}

/// # Safety
/// `m` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_free(m: *mut OpballMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_rows(m: *const OpballMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.data.nrows())
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_cols(m: *const OpballMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.data.ncols())
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_is_complex(m: *const OpballMatrix) -> bool {
    m.as_ref().is_some_and(|m| m.complex)
}

/// Copy entries out row-major; complex handles are written interleaved.
/// `len` is the capacity of `out` in doubles.
///
/// # Safety
/// `out` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn opball_matrix_copy(m: *const OpballMatrix, out: *mut f64, len: usize) -> OpballStatus {
    guarded(|| {
        let m = handle(m, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let stride = if m.complex { 2 } else { 1 };
        let (r, c) = m.data.shape();
        if len < r * c * stride {
            return Err((
                OpballStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {}", r * c * stride),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(out, r * c * stride);
        for i in 0..r {
            for j in 0..c {
                let z = m.data[(i, j)];
                let p = (i * c + j) * stride;
                buf[p] = z.re;
                if m.complex {
                    buf[p + 1] = z.im;
                }
            }
        }
        Ok(())
    })
}

fn point<T: Field>(m: &OpballMatrix) -> Result<BallPoint<T>, Error> {
    BallPoint::new(m.data.map(|z| T::from_parts(z.re, z.im)))
}

fn widen<T: Field>(m: &DMatrix<T>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v.re_part(), v.im_part()))
}

fn binary<R>(
    a: &OpballMatrix,
    b: &OpballMatrix,
    real: impl FnOnce(BallPoint<f64>, BallPoint<f64>) -> Result<R, Error>,
    complex: impl FnOnce(BallPoint<Complex64>, BallPoint<Complex64>) -> Result<R, Error>,
) -> Result<R, (OpballStatus, String)> {
    if a.data.shape() != b.data.shape() {
        return Err((OpballStatus::InvalidArgument, "operands have different shapes".into()));
    }
    if a.complex || b.complex {
        complex(point(a).map_err(fail)?, point(b).map_err(fail)?).map_err(fail)
    } else {
        real(point(a).map_err(fail)?, point(b).map_err(fail)?).map_err(fail)
    }
}

/// Invariant distance between two ball points.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn opball_rho(a: *const OpballMatrix, b: *const OpballMatrix, out: *mut f64) -> OpballStatus {
    guarded(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = binary(a, b, |a, b| ball::rho(&a, &b), |a, b| ball::rho(&a, &b))?;
        Ok(())
    })
}

/// Geodesic midpoint; the result is a new handle owned by the caller.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn opball_midpoint(
    a: *const OpballMatrix,
    b: *const OpballMatrix,
    out: *mut *mut OpballMatrix,
) -> OpballStatus {
    guarded(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        let complex = a.complex || b.complex;
        let m = binary(
            a,
            b,
            |a, b| Ok(widen(ball::midpoint(&a, &b)?.matrix())),
            |a, b| Ok(widen(ball::midpoint(&a, &b)?.matrix())),
        )?;
        *out = boxed(m, complex);
        Ok(())
    })
}

/// Möbius map `M_a(x)`; the result is a new handle owned by the caller.
///
/// # Safety
/// `a`, `x` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn opball_mobius_apply(
    a: *const OpballMatrix,
    x: *const OpballMatrix,
    out: *mut *mut OpballMatrix,
) -> OpballStatus {
    guarded(|| {
        let (a, x) = (handle(a, "a")?, handle(x, "x")?);
        if out.is_null() {
            return Err(null("out"));
        }
        let complex = a.complex || x.complex;
        let m = binary(
            a,
            x,
            |a, x| Ok(widen(ball::mobius_apply(&a, &x)?.matrix())),
            |a, x| Ok(widen(ball::mobius_apply(&a, &x)?.matrix())),
        )?;
        *out = boxed(m, complex);
        Ok(())
    })
}

/// Run a JSON problem document and return the JSON report.
///
/// `*output` receives a string to release with [`opball_string_free`];
/// `*exit_code` receives the command-line exit code for the report
/// (0 ok, 2 validation error, 3 otherwise). The return value only reports
/// failures of the call itself.
///
/// # Safety
/// `input` must be a NUL-terminated string; `output` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn opball_run_json(
    input: *const c_char,
    output: *mut *mut c_char,
    exit_code: *mut c_int,
) -> OpballStatus {
    guarded(|| {
        if input.is_null() {
            return Err(null("input"));
        }
        if output.is_null() || exit_code.is_null() {
            return Err(null("output"));
        }
        let bytes = CStr::from_ptr(input).to_bytes();
        let report = cli::process(bytes, &Overrides::default());
        let text = serde_json::to_string(&report.to_json()).expect("report serializes");
        *output = CString::new(text).expect("JSON has no NUL").into_raw();
        *exit_code = report.exit_code();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by [`opball_run_json`].
#[no_mangle]
pub unsafe extern "C" fn opball_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn opball_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
