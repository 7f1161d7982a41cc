//! Jacobi rotation methods for Hermitian eigenproblems and the SVD.
//!
//! Both converge to full working accuracy on the small dense matrices this
//! crate handles, including clustered spectra.

use nalgebra::{DMatrix, DVector};

use crate::field::Field;

const MAX_SWEEPS: usize = 80;

/// Rotation zeroing the off-diagonal entry of the Hermitian 2×2 block
/// `[[a, g], [conj(g), d]]`. Returns `(c, s, phase)` where
/// `J = [[c, s], [-s·conj(phase), c·conj(phase)]]` and `phase = g / |g|`.
fn rotation<T: Field>(a: f64, d: f64, g: T) -> (f64, f64, T) {
    let gm = g.modulus();
    let phase = g.unscale(gm);
    let tau = (d - a) / (2.0 * gm);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Right-multiply columns `p`, `q` of `m` by `J`.
fn rotate_columns<T: Field>(m: &mut DMatrix<T>, p: usize, q: usize, c: f64, s: f64, phase: T) {
    let cphase = phase.conjugate();
    for i in 0..m.nrows() {
        let (xp, xq) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = xp.scale(c) - (xq * cphase).scale(s);
        m[(i, q)] = xp.scale(s) + (xq * cphase).scale(c);
    }
}

/// Left-multiply rows `p`, `q` of `m` by `J*`.
fn rotate_rows<T: Field>(m: &mut DMatrix<T>, p: usize, q: usize, c: f64, s: f64, phase: T) {
    for j in 0..m.ncols() {
        let (xp, xq) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = xp.scale(c) - (xq * phase).scale(s);
        m[(q, j)] = xp.scale(s) + (xq * phase).scale(c);
    }
}

/// Eigenvalues (unsorted) and unitary eigenvectors of a Hermitian matrix.
/// Only the Hermitian part of `h` is used.
pub(crate) fn hermitian_eigen<T: Field>(h: &DMatrix<T>) -> (DVector<f64>, DMatrix<T>) {
    let n = h.nrows();
    let mut a = (h + h.adjoint()).unscale(2.0);
    let mut v = DMatrix::<T>::identity(n, n);
    let scale = a.norm();
    if scale == 0.0 {
        return (DVector::zeros(n), v);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].modulus_squared())
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let app = a[(p, p)].re_part();
                let aqq = a[(q, q)].re_part();
                if g.modulus() <= 1e-300 || g.modulus() <= 1e-18 * (app.abs() * aqq.abs()).sqrt() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let (c, s, phase) = rotation(app, aqq, g);
                rotate_columns(&mut a, p, q, c, s, phase);
                rotate_rows(&mut a, p, q, c, s, phase);
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                a[(p, p)] = T::from_real(a[(p, p)].re_part());
                a[(q, q)] = T::from_real(a[(q, q)].re_part());
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
    }
    (DVector::from_fn(n, |i, _| a[(i, i)].re_part()), v)
}

/// One-sided Jacobi SVD of an `m × p` matrix: `A = U diag(σ) V*` with `U`
/// of shape `m × p` (columns belonging to zero singular values are zero),
/// `σ` of length `p` (unsorted) and unitary `V` of shape `p × p`.
pub(crate) fn svd<T: Field>(m: &DMatrix<T>) -> (DMatrix<T>, DVector<f64>, DMatrix<T>) {
    let p = m.ncols();
    let mut a = m.clone();
    let mut v = DMatrix::<T>::identity(p, p);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let alpha = a.column(i).norm_squared();
                let beta = a.column(j).norm_squared();
                let gamma = a.column(i).dotc(&a.column(j));
                let gm = gamma.modulus();
                if gm == 0.0 || gm <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = rotation(alpha, beta, gamma);
                rotate_columns(&mut a, i, j, c, s, phase);
                rotate_columns(&mut v, i, j, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = DVector::from_fn(p, |j, _| a.column(j).norm());
    for j in 0..p {
        if sigma[j] > 0.0 {
            let mut col = a.column_mut(j);
            col.unscale_mut(sigma[j]);
        }
    }
    (a, sigma, v)
}
