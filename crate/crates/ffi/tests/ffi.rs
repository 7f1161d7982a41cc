use std::ffi::{CStr, CString};
use std::ptr;

use opball_ffi::*;

fn real(rows: usize, cols: usize, data: &[f64]) -> *mut OpballMatrix {
    let mut out = ptr::null_mut();
    let s = unsafe { opball_matrix_new_real(rows, cols, data.as_ptr(), &mut out) };
    assert_eq!(s, OpballStatus::Ok);
    out
}

fn last_error() -> String {
    let p = opball_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn rho_and_midpoint_scalar() {
    let a = real(1, 1, &[0.5]);
    let b = real(1, 1, &[-0.5]);
    let mut d = 0.0;
    assert_eq!(unsafe { opball_rho(a, b, &mut d) }, OpballStatus::Ok);
    assert!((d - 3f64.ln()).abs() <= 1e-12);

    let mut mid = ptr::null_mut();
    assert_eq!(unsafe { opball_midpoint(a, b, &mut mid) }, OpballStatus::Ok);
    let mut v = [1.0];
    assert_eq!(unsafe { opball_matrix_copy(mid, v.as_mut_ptr(), 1) }, OpballStatus::Ok);
    assert!(v[0].abs() <= 1e-12);
    unsafe {
        opball_matrix_free(mid);
        opball_matrix_free(a);
        opball_matrix_free(b);
    }
}

#[test]
fn mobius_inverse_round_trip_complex() {
    let a_data = [0.2, 0.1, -0.3, 0.0, 0.1, 0.2, 0.0, -0.1];
    let neg: Vec<f64> = a_data.iter().map(|x| -x).collect();
    let x_data = [0.1, 0.0, 0.2, -0.2, -0.1, 0.3, 0.05, 0.0];
    let mk = |d: &[f64]| {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { opball_matrix_new_complex(2, 2, d.as_ptr(), &mut out) },
            OpballStatus::Ok
        );
        out
    };
    let (a, na, x) = (mk(&a_data), mk(&neg), mk(&x_data));
    let mut y = ptr::null_mut();
    let mut back = ptr::null_mut();
    unsafe {
        assert_eq!(opball_mobius_apply(a, x, &mut y), OpballStatus::Ok);
        assert_eq!(opball_mobius_apply(na, y, &mut back), OpballStatus::Ok);
        assert!(opball_matrix_is_complex(back));
        assert_eq!((opball_matrix_rows(back), opball_matrix_cols(back)), (2, 2));
    }
    let mut v = [0.0; 8];
    assert_eq!(unsafe { opball_matrix_copy(back, v.as_mut_ptr(), 8) }, OpballStatus::Ok);
    for (p, q) in v.iter().zip(x_data.iter()) {
        assert!((p - q).abs() <= 1e-12);
    }
    for m in [a, na, x, y, back] {
        unsafe { opball_matrix_free(m) };
    }
}

#[test]
fn errors_are_reported() {
    let a = real(1, 1, &[1.5]);
    let b = real(1, 1, &[0.0]);
    let mut d = 0.0;
    assert_eq!(unsafe { opball_rho(a, b, &mut d) }, OpballStatus::InvalidArgument);
    assert!(last_error().contains("ball guard"));
    assert_eq!(unsafe { opball_rho(ptr::null(), b, &mut d) }, OpballStatus::NullPointer);

    let c = real(2, 1, &[0.0, 0.0]);
    assert_eq!(unsafe { opball_rho(b, c, &mut d) }, OpballStatus::InvalidArgument);

    let mut small = [0.0; 1];
    assert_eq!(
        unsafe { opball_matrix_copy(c, small.as_mut_ptr(), 1) },
        OpballStatus::InvalidArgument
    );
    for m in [a, b, c] {
        unsafe { opball_matrix_free(m) };
    }
    unsafe { opball_matrix_free(ptr::null_mut()) };
}

#[test]
fn json_entry_point() {
    let run = |doc: &str| {
        let input = CString::new(doc).unwrap();
        let mut out = ptr::null_mut();
        let mut code = -1;
        assert_eq!(
            unsafe { opball_run_json(input.as_ptr(), &mut out, &mut code) },
            OpballStatus::Ok
        );
        let text = unsafe { CStr::from_ptr(out) }.to_string_lossy().into_owned();
        unsafe { opball_string_free(out) };
        (code, serde_json::from_str::<serde_json::Value>(&text).unwrap())
    };
    let (code, report) = run(r#"{"field":"real","n":1,"k":1,"mode":"metric","payload":{"A":[[0.5]],"B":[[-0.5]]}}"#);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "ok");
    assert!((report["result"]["rho"].as_f64().unwrap() - 3f64.ln()).abs() <= 1e-12);

    let (code, report) = run(r#"{"field":"real","n":1,"k":1,"mode":"metric","payload":{"A":[[2.0]],"B":[[0.0]]}}"#);
    assert_eq!(code, 2);
    assert_eq!(report["status"], "validation-error");
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/opball.h")).unwrap();
    for sym in [
        "opball_matrix_new_real",
        "opball_matrix_new_complex",
        "opball_matrix_free",
        "opball_matrix_copy",
        "opball_rho",
        "opball_midpoint",
        "opball_mobius_apply",
        "opball_run_json",
        "opball_string_free",
        "opball_last_error_message",
        "typedef struct OpballMatrix OpballMatrix",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
