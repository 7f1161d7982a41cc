//! The operator ball as a metric space: Möbius maps, the invariant distance,
//! midpoints and diameters.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{complexify_matrix, Field, FieldTag};
use crate::matfun::{self, PsdFn};
use crate::tolerance::Tolerances;

/// An `n × k` matrix of spectral norm strictly below `1 - Tolerances::ball_guard`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint<T: Field> {
    matrix: DMatrix<T>,
    norm: f64,
}

impl<T: Field> BallPoint<T> {
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        let norm = matfun::spectral_norm(&matrix)?;
        let limit = 1.0 - Tolerances::DEFAULT.ball_guard;
        if !(norm < limit) {
            return Err(Error::validation(format!(
                "spectral norm {norm} is not below the ball guard {limit}"
            )));
        }
        Ok(BallPoint { matrix, norm })
    }

    pub fn zero(n: usize, k: usize) -> Self {
        BallPoint {
            matrix: DMatrix::zeros(n, k),
            norm: 0.0,
        }
    }

    /// A 1×1 point.
    pub fn scalar(value: T) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, value))
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.matrix
    }

    /// `(n, k)`.
    pub fn dims(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    /// Spectral norm, computed once at construction.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn field(&self) -> FieldTag {
        T::TAG
    }

    pub fn neg(&self) -> Self {
        BallPoint {
            matrix: -&self.matrix,
            norm: self.norm,
        }
    }
}

/// `1 - ‖X‖`, the distance of a ball point to the unit sphere in operator norm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BoundaryMargin(f64);

impl BoundaryMargin {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn same_dims<T: Field>(a: &BallPoint<T>, b: &BallPoint<T>) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::validation(format!(
            "dimension mismatch: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// `M_A(X) = (1 - AA*)^{-1/2} (A + X) (1 + A*X)^{-1} (1 - A*A)^{1/2}` without
/// the ball guard on the output.
pub(crate) fn mobius_matrix<T: Field>(a: &DMatrix<T>, x: &DMatrix<T>) -> Result<DMatrix<T>> {
    let (n, k) = a.shape();
    let a_adj = a.adjoint();
    let left = matfun::psd_func(&(DMatrix::identity(n, n) - a * &a_adj), PsdFn::InvSqrt)?;
    let right = matfun::psd_func(&(DMatrix::identity(k, k) - &a_adj * a), PsdFn::Sqrt)?;
    let denom = DMatrix::identity(k, k) + &a_adj * x;
    let inner = matfun::right_divide(&(a + x), &denom).map_err(|e| match e {
        Error::Singular { sigma_min } => Error::Numerical(format!("1 + A*X is singular (sigma_min {sigma_min:e})")),
        other => other,
    })?;
    Ok(left * inner * right)
}

fn guarded<T: Field>(m: DMatrix<T>, what: &str) -> Result<BallPoint<T>> {
    BallPoint::new(m).map_err(|e| match e {
        Error::Validation { message, .. } => Error::Numerical(format!("{what}: {message}")),
        other => other,
    })
}

/// The Möbius transformation `M_A` applied to `X`.
pub fn mobius_apply<T: Field>(a: &BallPoint<T>, x: &BallPoint<T>) -> Result<BallPoint<T>> {
    same_dims(a, x)?;
    guarded(mobius_matrix(&a.matrix, &x.matrix)?, "Möbius image left the ball")
}

/// The invariant distance `ρ(A, B) = atanh ‖M_{-A}(B)‖`.
pub fn rho<T: Field>(a: &BallPoint<T>, b: &BallPoint<T>) -> Result<f64> {
    same_dims(a, b)?;
    let moved = mobius_matrix(&(-&a.matrix), &b.matrix)?;
    let s = matfun::spectral_norm(&moved)?;
    if s >= 1.0 {
        return Err(Error::Numerical(format!("‖M_-A(B)‖ = {s} reached the unit sphere")));
    }
    Ok(s.atanh())
}

/// The metric midpoint of `A` and `B`: translate `A` to the origin, halve the
/// radial part of the image of `B`, translate back.
pub fn midpoint<T: Field>(a: &BallPoint<T>, b: &BallPoint<T>) -> Result<BallPoint<T>> {
    same_dims(a, b)?;
    let moved = mobius_matrix(&(-&a.matrix), &b.matrix)?;
    let (n, k) = moved.shape();
    let halved = if n >= k {
        let pf = matfun::polar(&moved)?;
        pf.isometry * matfun::psd_func(&pf.positive, PsdFn::HalfAtanhThenTanh)?
    } else {
        // wide case: moved = S·V* with S = (moved moved*)^{1/2}
        let pf = matfun::polar(&moved.adjoint())?;
        matfun::psd_func(&pf.positive, PsdFn::HalfAtanhThenTanh)? * pf.isometry.adjoint()
    };
    let c = guarded(halved, "halved point left the ball")?;
    mobius_apply(a, &c)
}

/// Reduce `2^m` points to one by repeatedly replacing adjacent pairs with
/// their midpoint.
pub fn barycenter_pow2<T: Field>(points: &[BallPoint<T>]) -> Result<BallPoint<T>> {
    if points.is_empty() || !points.len().is_power_of_two() {
        return Err(Error::validation(format!(
            "barycenter needs a power-of-two number of points, got {}",
            points.len()
        )));
    }
    for p in &points[1..] {
        same_dims(&points[0], p)?;
    }
    let mut level: Vec<BallPoint<T>> = points.to_vec();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| midpoint(&pair[0], &pair[1]))
            .collect::<Result<_>>()?;
    }
    Ok(level.pop().expect("nonempty"))
}

/// Largest pairwise distance.
pub fn diam<T: Field>(points: &[BallPoint<T>]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::validation("diameter of an empty set"));
    }
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(rho(p, q)?);
        }
    }
    Ok(best)
}

/// Whether `p` (a member of `points`) attains the diameter up to `tol`.
pub fn is_diametral<T: Field>(p: &BallPoint<T>, points: &[BallPoint<T>], tol: f64) -> Result<bool> {
    let member = points
        .iter()
        .any(|q| q.dims() == p.dims() && matfun::max_abs(&(&q.matrix - &p.matrix)) <= Tolerances::DEFAULT.subspace);
    if !member {
        return Err(Error::validation("point is not a member of the set"));
    }
    let d = diam(points)?;
    let mut reach = 0.0f64;
    for q in points {
        reach = reach.max(rho(p, q)?);
    }
    Ok(reach >= d - tol)
}

pub fn boundary_margin<T: Field>(x: &BallPoint<T>) -> BoundaryMargin {
    BoundaryMargin(1.0 - x.norm)
}

/// The same point over the complex field. Complexification is isometric, so
/// distances computed in either field agree.
pub fn complexify<T: Field>(a: &BallPoint<T>) -> Result<BallPoint<Complex64>> {
    if T::TAG == FieldTag::Complex {
        return Err(Error::validation("point is already complex"));
    }
    let real = a.matrix.map(|v| v.re_part());
    Ok(BallPoint {
        matrix: complexify_matrix(&real),
        norm: a.norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_ball_point, witness_panel, Seed};
    use approx::assert_abs_diff_eq;

    fn s(v: f64) -> BallPoint<f64> {
        BallPoint::scalar(v).unwrap()
    }

    #[test]
    fn construction_guard() {
        assert!(BallPoint::scalar(0.999).is_ok());
        assert!(BallPoint::scalar(1.0).is_err());
        assert!(BallPoint::scalar(1.0 - 1e-13).is_err());
        assert!(BallPoint::new(DMatrix::from_element(2, 1, 0.8)).is_err()); // norm 0.8·√2
    }

    #[test]
    fn mobius_examples() {
        let x = random_ball_point::<f64>(3, 2, 0.8, Seed(1));
        let zero = BallPoint::zero(3, 2);
        assert_abs_diff_eq!(mobius_apply(&zero, &x).unwrap().matrix, x.matrix, epsilon = 1e-14);
        let a = random_ball_point::<f64>(3, 2, 0.8, Seed(2));
        assert_abs_diff_eq!(mobius_apply(&a, &zero).unwrap().matrix, a.matrix, epsilon = 1e-13);
        assert_abs_diff_eq!(
            mobius_apply(&s(0.5), &s(0.5)).unwrap().matrix[(0, 0)],
            0.8,
            epsilon = 1e-15
        );
        assert!(mobius_apply(&a, &BallPoint::zero(2, 3)).is_err());
    }

    #[test]
    fn mobius_inverse_is_negation() {
        for seed in 0..20 {
            let a = random_ball_point::<f64>(4, 2, 0.9, Seed(seed));
            let x = random_ball_point::<f64>(4, 2, 0.9, Seed(100 + seed));
            let back = mobius_apply(&a.neg(), &mobius_apply(&a, &x).unwrap()).unwrap();
            assert!(matfun::max_abs(&(back.matrix - &x.matrix)) <= 1e-9);
        }
    }

    #[test]
    fn rho_examples() {
        let a = random_ball_point::<f64>(3, 2, 0.9, Seed(3));
        assert_eq!(rho(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(rho(&s(0.0), &s(0.5)).unwrap(), 0.5f64.atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(rho(&s(0.0), &s(0.5)).unwrap(), 0.549_306_144_334_054_8, epsilon = 1e-15);
        assert_abs_diff_eq!(rho(&s(0.5), &s(-0.5)).unwrap(), 3f64.ln(), epsilon = 1e-12);
        let zero = BallPoint::zero(3, 2);
        assert_abs_diff_eq!(rho(&zero, &a).unwrap(), a.norm().atanh(), epsilon = 1e-12);
    }

    #[test]
    fn midpoint_examples() {
        let a = random_ball_point::<f64>(3, 2, 0.9, Seed(4));
        assert!(matfun::max_abs(&(midpoint(&a, &a).unwrap().matrix - &a.matrix)) <= 1e-12);
        assert_abs_diff_eq!(
            midpoint(&s(0.0), &s(0.6)).unwrap().matrix[(0, 0)],
            1.0 / 3.0,
            epsilon = 1e-10
        );
        assert!(midpoint(&a, &a.neg()).unwrap().norm() <= 1e-9);
    }

    #[test]
    fn midpoint_contract_wide_and_tall() {
        for &(n, k) in &[(4usize, 2usize), (2, 3), (1, 1), (5, 1)] {
            let a = random_ball_point::<f64>(n, k, 0.9, Seed(n as u64 * 7 + k as u64));
            let b = random_ball_point::<f64>(n, k, 0.9, Seed(n as u64 * 11 + k as u64));
            let m = midpoint(&a, &b).unwrap();
            let d = rho(&a, &b).unwrap();
            assert_abs_diff_eq!(rho(&a, &m).unwrap(), d / 2.0, epsilon = 1e-8);
            assert_abs_diff_eq!(rho(&b, &m).unwrap(), d / 2.0, epsilon = 1e-8);
            for w in witness_panel::<f64>(n, k, Seed(5)) {
                let lhs = rho(&m, &w).unwrap();
                let rhs = 0.5 * (rho(&a, &w).unwrap() + rho(&b, &w).unwrap());
                assert!(lhs <= rhs + 1e-8, "{lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn barycenter_examples() {
        let a = random_ball_point::<f64>(2, 2, 0.7, Seed(6));
        let b = random_ball_point::<f64>(2, 2, 0.7, Seed(7));
        assert_eq!(barycenter_pow2(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(
            barycenter_pow2(&[a.clone(), b.clone()]).unwrap(),
            midpoint(&a, &b).unwrap()
        );
        let pts = [s(0.0), s(0.0), s(0.6), s(0.6)];
        assert_abs_diff_eq!(barycenter_pow2(&pts).unwrap().matrix[(0, 0)], 1.0 / 3.0, epsilon = 1e-9);
        assert!(barycenter_pow2(&pts[..3]).is_err());
        assert!(barycenter_pow2::<f64>(&[]).is_err());
    }

    #[test]
    fn diameter_examples() {
        let a = s(0.5);
        assert_eq!(diam(std::slice::from_ref(&a)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            diam(&[s(0.0), a.clone()]).unwrap(),
            rho(&s(0.0), &a).unwrap(),
            epsilon = 0.0
        );
        let set = [s(0.0), s(0.5), s(-0.5)];
        assert_abs_diff_eq!(diam(&set).unwrap(), 3f64.ln(), epsilon = 1e-12);
        assert!(diam::<f64>(&[]).is_err());
    }

    #[test]
    fn diametral_examples() {
        let a = s(0.3);
        assert!(is_diametral(&a, std::slice::from_ref(&a), 1e-12).unwrap());
        let set = [s(0.0), s(0.5), s(-0.5)];
        assert!(is_diametral(&s(0.5), &set, 1e-9).unwrap());
        assert!(!is_diametral(&s(0.0), &set, 1e-9).unwrap());
        assert!(is_diametral(&s(0.1), &set, 1e-9).is_err());
    }

    #[test]
    fn boundary_margin_examples() {
        assert_eq!(boundary_margin(&BallPoint::<f64>::zero(2, 1)).value(), 1.0);
        assert_abs_diff_eq!(boundary_margin(&s(0.5)).value(), 0.5, epsilon = 1e-15);
        let t = 2f64.tanh();
        assert_abs_diff_eq!(
            boundary_margin(&s(t)).value(),
            1.0 - 0.964_027_580_075_817,
            epsilon = 1e-14
        );
    }

    #[test]
    fn complexify_is_isometric() {
        let c = complexify(&s(0.5)).unwrap();
        assert_eq!(c.matrix[(0, 0)], Complex64::new(0.5, 0.0));
        assert_abs_diff_eq!(
            rho(&BallPoint::zero(1, 1), &c).unwrap(),
            rho(&s(0.0), &s(0.5)).unwrap(),
            epsilon = 1e-15
        );
        let a = random_ball_point::<f64>(4, 2, 0.9, Seed(8));
        let b = random_ball_point::<f64>(4, 2, 0.9, Seed(9));
        let (ca, cb) = (complexify(&a).unwrap(), complexify(&b).unwrap());
        assert_eq!(ca.norm(), a.norm());
        assert_abs_diff_eq!(matfun::spectral_norm(ca.matrix()).unwrap(), a.norm(), epsilon = 1e-15);
        assert!((rho(&a, &b).unwrap() - rho(&ca, &cb).unwrap()).abs() <= 1e-10);
        assert!(complexify(&ca).is_err());
    }

    #[test]
    fn complex_metric_behaves() {
        let a = random_ball_point::<Complex64>(3, 2, 0.9, Seed(10));
        let b = random_ball_point::<Complex64>(3, 2, 0.9, Seed(11));
        assert!((rho(&a, &b).unwrap() - rho(&b, &a).unwrap()).abs() <= 1e-9);
        let m = midpoint(&a, &b).unwrap();
        assert!((rho(&a, &m).unwrap() - 0.5 * rho(&a, &b).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn norm_convergence_implies_rho_convergence() {
        let a = random_ball_point::<f64>(3, 2, 0.9, Seed(12));
        let dir = random_ball_point::<f64>(3, 2, 0.9, Seed(13));
        let mut last = f64::INFINITY;
        for j in 1..=12 {
            let eps = 0.5f64.powi(j) * 0.05;
            let an = BallPoint::new(a.matrix() + dir.matrix() * eps).unwrap();
            let d = rho(&an, &a).unwrap();
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-4);
    }
}
