//! Dense matrix kernel: norms, inverses, polar factors and spectral functions
//! of Hermitian positive semidefinite matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobi;
use crate::tolerance::Tolerances;

/// Factors of `A = isometry · positive`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors<T: Field> {
    /// `rows × cols`, orthonormal columns.
    pub isometry: DMatrix<T>,
    /// `cols × cols`, Hermitian positive semidefinite, equal to `(A*A)^{1/2}`.
    pub positive: DMatrix<T>,
}

/// Scalar function applied through the spectral calculus of a psd matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdFn {
    Sqrt,
    InvSqrt,
    Tanh,
    Atanh,
    /// `s ↦ tanh(atanh(s) / 2)`, the radial halving map of the ball.
    HalfAtanhThenTanh,
    /// `s ↦ s^p` for `p ≥ 0`.
    Power(f64),
}

impl PsdFn {
    pub fn name(self) -> &'static str {
        match self {
            PsdFn::Sqrt => "sqrt",
            PsdFn::InvSqrt => "inv_sqrt",
            PsdFn::Tanh => "tanh",
            PsdFn::Atanh => "atanh",
            PsdFn::HalfAtanhThenTanh => "half_atanh_then_tanh",
            PsdFn::Power(_) => "power",
        }
    }

    /// Evaluate on a single nonnegative eigenvalue.
    pub fn eval(self, x: f64) -> f64 {
        match self {
            PsdFn::Sqrt => x.sqrt(),
            PsdFn::InvSqrt => 1.0 / x.sqrt(),
            PsdFn::Tanh => x.tanh(),
            PsdFn::Atanh => x.atanh(),
            // tanh(atanh(s)/2) = s / (1 + sqrt(1 - s^2)), stable near s = 1
            PsdFn::HalfAtanhThenTanh => x / (1.0 + ((1.0 - x) * (1.0 + x)).sqrt()),
            PsdFn::Power(p) => x.powf(p),
        }
    }
}

fn check_finite<T: Field>(m: &DMatrix<T>) -> Result<()> {
    for (idx, v) in m.iter().enumerate() {
        if !(v.re_part().is_finite() && v.im_part().is_finite()) {
            // nalgebra storage is column-major
            let (r, c) = (idx % m.nrows(), idx / m.nrows());
            return Err(Error::validation(format!("non-finite entry at ({r}, {c})")));
        }
    }
    Ok(())
}

fn check_nonempty<T: Field>(m: &DMatrix<T>) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::validation("matrix must be nonempty"));
    }
    Ok(())
}

fn check_square<T: Field>(m: &DMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::validation(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Thin SVD `m = U diag(σ) V*` with `σ` sorted descending, `U` of shape
/// `rows × cols` and square `V`.
fn sorted_svd<T: Field>(m: &DMatrix<T>) -> (DMatrix<T>, DVector<f64>, DMatrix<T>) {
    let (u, sigma, v) = jacobi::svd(m);
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let u = DMatrix::from_columns(&order.iter().map(|&i| u.column(i)).collect::<Vec<_>>());
    let v = DMatrix::from_columns(&order.iter().map(|&i| v.column(i)).collect::<Vec<_>>());
    let sigma = DVector::from_iterator(order.len(), order.iter().map(|&i| sigma[i]));
    (u, sigma, v)
}

/// Singular values in descending order.
pub fn singular_values<T: Field>(m: &DMatrix<T>) -> Result<DVector<f64>> {
    check_nonempty(m)?;
    check_finite(m)?;
    let s = if m.nrows() < m.ncols() {
        sorted_svd(&m.adjoint()).1
    } else {
        sorted_svd(m).1
    };
    Ok(s)
}

/// Largest singular value.
pub fn spectral_norm<T: Field>(m: &DMatrix<T>) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Largest absolute entry.
pub fn max_abs<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.modulus()).fold(0.0, f64::max)
}

/// Inverse of a square matrix, refusing matrices whose smallest singular value
/// is below `Tolerances::singular · ‖M‖`.
pub fn matrix_inverse<T: Field>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    check_square(m)?;
    let s = singular_values(m)?;
    let (smax, smin) = (s[0], s[s.len() - 1]);
    if smax == 0.0 || smin < Tolerances::DEFAULT.singular * smax {
        return Err(Error::Singular { sigma_min: smin });
    }
    m.clone().lu().try_inverse().ok_or(Error::Singular { sigma_min: smin })
}

/// Solve `X · rhs_factor = lhs` for `X`, i.e. `X = lhs · rhs_factor^{-1}`.
pub fn right_divide<T: Field>(lhs: &DMatrix<T>, rhs_factor: &DMatrix<T>) -> Result<DMatrix<T>> {
    Ok(lhs * matrix_inverse(rhs_factor)?)
}

/// Polar decomposition `A = U·T` with `T = (A*A)^{1/2}` for `rows ≥ cols`.
///
/// Both factors come from one SVD `A = W Σ V*`: `U = W V*`, `T = V Σ V*`.
/// Left singular vectors belonging to zero singular values are replaced by a
/// Gram–Schmidt completion over the standard basis taken in ascending index
/// order, so rank-deficient inputs yield a deterministic isometry.
pub fn polar<T: Field>(a: &DMatrix<T>) -> Result<PolarFactors<T>> {
    check_nonempty(a)?;
    check_finite(a)?;
    let (n, k) = a.shape();
    if n < k {
        return Err(Error::validation(format!("polar needs rows >= cols, got {n}x{k}")));
    }
    let (mut w, sigma, v) = sorted_svd(a);
    let smax = sigma.max();
    let cutoff = f64::EPSILON * n as f64 * smax;

    let null: Vec<usize> = (0..k).filter(|&j| smax == 0.0 || sigma[j] <= cutoff).collect();
    if !null.is_empty() {
        let mut kept: Vec<DVector<T>> = (0..k)
            .filter(|j| !null.contains(j))
            .map(|j| w.column(j).into_owned())
            .collect();
        let mut next_basis = 0;
        for &j in &null {
            let col = loop {
                let mut e = DVector::<T>::zeros(n);
                e[next_basis] = T::one();
                next_basis += 1;
                for _ in 0..2 {
                    for q in &kept {
                        let proj = q.dotc(&e);
                        e -= q * proj;
                    }
                }
                let norm = e.norm();
                if norm > 0.5 {
                    break e.unscale(norm);
                }
            };
            w.set_column(j, &col);
            kept.push(col);
        }
    }

    let v_t = v.adjoint();
    let isometry = &w * &v_t;
    let sigma_t = DMatrix::from_diagonal(&sigma.map(T::from_real));
    let positive = hermitian_part(&(&v * sigma_t * &v_t));
    Ok(PolarFactors { isometry, positive })
}

/// `(P + P*) / 2`.
pub fn hermitian_part<T: Field>(p: &DMatrix<T>) -> DMatrix<T> {
    (p + p.adjoint()).unscale(2.0)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
/// The input is symmetrized first; asymmetry above `Tolerances::hermitian · ‖P‖`
/// is rejected.
pub fn hermitian_eigen<T: Field>(p: &DMatrix<T>) -> Result<(DVector<f64>, DMatrix<T>)> {
    check_nonempty(p)?;
    check_square(p)?;
    check_finite(p)?;
    let (eigenvalues, eigenvectors) = jacobi::hermitian_eigen(p);
    let scale = eigenvalues.amax();
    let skew = (p - p.adjoint()).unscale(2.0).norm();
    if skew > Tolerances::DEFAULT.hermitian * scale.max(f64::MIN_POSITIVE) && skew > 0.0 {
        return Err(Error::validation(format!(
            "matrix is not Hermitian (skew part {skew:e} vs norm {scale:e})"
        )));
    }
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eigenvalues[i]));
    let columns: Vec<_> = order.iter().map(|&i| eigenvectors.column(i)).collect();
    Ok((values, DMatrix::from_columns(&columns)))
}

/// Apply a scalar function to a Hermitian psd matrix through its spectral
/// decomposition: `f(P) = Σ f(λᵢ) Eᵢ`.
pub fn psd_func<T: Field>(p: &DMatrix<T>, f: PsdFn) -> Result<DMatrix<T>> {
    let (values, vectors) = hermitian_eigen(p)?;
    let scale = values.amax();
    let tol = Tolerances::DEFAULT;
    let mut mapped = Vec::with_capacity(values.len());
    for &lambda in values.iter() {
        let lambda = if lambda < 0.0 {
            if lambda < -tol.psd_clamp * scale {
                return Err(Error::NotPsd { eigenvalue: lambda });
            }
            0.0
        } else {
            lambda
        };
        match f {
            PsdFn::Atanh | PsdFn::HalfAtanhThenTanh if lambda >= 1.0 => {
                return Err(Error::Domain {
                    function: f.name(),
                    eigenvalue: lambda,
                });
            }
            PsdFn::InvSqrt if lambda <= tol.singular * scale || lambda == 0.0 => {
                return Err(Error::Singular { sigma_min: lambda });
            }
            PsdFn::Power(e) if !(e >= 0.0) => {
                return Err(Error::validation(format!("power {e} must be nonnegative")));
            }
            _ => {}
        }
        mapped.push(T::from_real(f.eval(lambda)));
    }
    let diag = DMatrix::from_diagonal(&DVector::from_vec(mapped));
    Ok(hermitian_part(&(&vectors * diag * vectors.adjoint())))
}

/// Number of singular values above `rel · σ_max`.
pub fn numerical_rank<T: Field>(m: &DMatrix<T>, rel: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let smax = s[0];
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel * smax).count())
}

/// Orthonormal basis of the kernel of `m`, using a relative singular-value
/// cutoff.
pub fn nullspace<T: Field>(m: &DMatrix<T>, rel: f64) -> Result<DMatrix<T>> {
    check_nonempty(m)?;
    check_finite(m)?;
    let (_, sigma, v) = sorted_svd(m);
    let smax = sigma.max();
    let cols: Vec<_> = (0..sigma.len())
        .filter(|&i| smax == 0.0 || sigma[i] <= rel * smax)
        .map(|i| v.column(i))
        .collect();
    if cols.is_empty() {
        return Ok(DMatrix::zeros(m.ncols(), 0));
    }
    Ok(DMatrix::from_columns(&cols))
}
