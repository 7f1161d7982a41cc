//! The indefinite inner-product space `H ⊕ K` with form
//! `[x, y] = (P_H x, y) - (P_K x, y)`, J-unitary operators, and the
//! correspondence between ball points and maximal negative subspaces.

use nalgebra::{DMatrix, DVector};

use crate::ball::BallPoint;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matfun::{self, PsdFn};
use crate::tolerance::Tolerances;

/// Dimensions of the positive summand `H` (`n`) and negative summand `K` (`k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n: usize,
    pub k: usize,
}

impl Signature {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::validation(format!(
                "signature dimensions must be positive, got ({n}, {k})"
            )));
        }
        Ok(Signature { n, k })
    }

    pub fn dim(self) -> usize {
        self.n + self.k
    }

    /// `J = diag(I_n, -I_k)`.
    pub fn j_matrix<T: Field>(self) -> DMatrix<T> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| match (i == j, i < self.n) {
            (true, true) => T::one(),
            (true, false) => -T::one(),
            _ => T::zero(),
        })
    }
}

/// `[x, y]`: inner product of the first `n` coordinates minus that of the last `k`.
pub fn indefinite_form<T: Field>(x: &DVector<T>, y: &DVector<T>, sig: Signature) -> Result<T> {
    if x.len() != sig.dim() || y.len() != sig.dim() {
        return Err(Error::validation(format!(
            "vectors must have length {}, got {} and {}",
            sig.dim(),
            x.len(),
            y.len()
        )));
    }
    let head = y.rows(0, sig.n).dotc(&x.rows(0, sig.n));
    let tail = y.rows(sig.n, sig.k).dotc(&x.rows(sig.n, sig.k));
    Ok(head - tail)
}

/// Block check of `U*JU = J`.
pub fn is_junitary<T: Field>(
    u11: &DMatrix<T>,
    u12: &DMatrix<T>,
    u21: &DMatrix<T>,
    u22: &DMatrix<T>,
    sig: Signature,
    tol: f64,
) -> Result<bool> {
    check_block_shapes(u11, u12, u21, u22, sig)?;
    Ok(junitary_defect(u11, u12, u21, u22, sig) <= tol)
}

fn check_block_shapes<T: Field>(
    u11: &DMatrix<T>,
    u12: &DMatrix<T>,
    u21: &DMatrix<T>,
    u22: &DMatrix<T>,
    sig: Signature,
) -> Result<()> {
    let (n, k) = (sig.n, sig.k);
    let expected = [(n, n), (n, k), (k, n), (k, k)];
    for (name, (block, want)) in ["u11", "u12", "u21", "u22"]
        .iter()
        .zip([u11, u12, u21, u22].into_iter().zip(expected))
    {
        if block.shape() != want {
            return Err(Error::validation(format!(
                "block {name} has shape {:?}, expected {:?}",
                block.shape(),
                want
            )));
        }
    }
    Ok(())
}

fn junitary_defect<T: Field>(
    u11: &DMatrix<T>,
    u12: &DMatrix<T>,
    u21: &DMatrix<T>,
    u22: &DMatrix<T>,
    sig: Signature,
) -> f64 {
    let top = u11.adjoint() * u11 - u21.adjoint() * u21 - DMatrix::identity(sig.n, sig.n);
    let bottom = u12.adjoint() * u12 - u22.adjoint() * u22 + DMatrix::identity(sig.k, sig.k);
    let cross = u11.adjoint() * u12 - u21.adjoint() * u22;
    matfun::max_abs(&top)
        .max(matfun::max_abs(&bottom))
        .max(matfun::max_abs(&cross))
}

/// An operator on `H ⊕ K` preserving the indefinite form, stored as its 2×2
/// block matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JUnitary<T: Field> {
    u11: DMatrix<T>,
    u12: DMatrix<T>,
    u21: DMatrix<T>,
    u22: DMatrix<T>,
    sig: Signature,
}

impl<T: Field> JUnitary<T> {
    /// Validates shapes, J-unitarity at `Tolerances::junitary`, and
    /// invertibility of `u22`.
    pub fn from_blocks(
        u11: DMatrix<T>,
        u12: DMatrix<T>,
        u21: DMatrix<T>,
        u22: DMatrix<T>,
        sig: Signature,
    ) -> Result<Self> {
        Self::from_blocks_tol(u11, u12, u21, u22, sig, Tolerances::DEFAULT.junitary)
    }

    pub fn from_blocks_tol(
        u11: DMatrix<T>,
        u12: DMatrix<T>,
        u21: DMatrix<T>,
        u22: DMatrix<T>,
        sig: Signature,
        tol: f64,
    ) -> Result<Self> {
        check_block_shapes(&u11, &u12, &u21, &u22, sig)?;
        for b in [&u11, &u12, &u21, &u22] {
            if b.iter().any(|v| !(v.re_part().is_finite() && v.im_part().is_finite())) {
                return Err(Error::validation("non-finite entry in operator"));
            }
        }
        let defect = junitary_defect(&u11, &u12, &u21, &u22, sig);
        if !(defect <= tol) {
            return Err(Error::validation(format!(
                "operator is not J-unitary (defect {defect:e})"
            )));
        }
        matfun::matrix_inverse(&u22).map_err(|_| Error::validation("block u22 is singular"))?;
        Ok(JUnitary {
            u11,
            u12,
            u21,
            u22,
            sig,
        })
    }

    /// Split an `(n+k) × (n+k)` matrix into blocks and validate.
    pub fn from_matrix(m: &DMatrix<T>, sig: Signature) -> Result<Self> {
        Self::from_matrix_tol(m, sig, Tolerances::DEFAULT.junitary)
    }

    pub fn from_matrix_tol(m: &DMatrix<T>, sig: Signature, tol: f64) -> Result<Self> {
        if m.shape() != (sig.dim(), sig.dim()) {
            return Err(Error::validation(format!(
                "operator has shape {:?}, expected {:?}",
                m.shape(),
                (sig.dim(), sig.dim())
            )));
        }
        let (n, k) = (sig.n, sig.k);
        Self::from_blocks_tol(
            m.view((0, 0), (n, n)).into_owned(),
            m.view((0, n), (n, k)).into_owned(),
            m.view((n, 0), (k, n)).into_owned(),
            m.view((n, n), (k, k)).into_owned(),
            sig,
            tol,
        )
    }

    pub(crate) fn from_matrix_unchecked(m: &DMatrix<T>, sig: Signature) -> Self {
        let (n, k) = (sig.n, sig.k);
        JUnitary {
            u11: m.view((0, 0), (n, n)).into_owned(),
            u12: m.view((0, n), (n, k)).into_owned(),
            u21: m.view((n, 0), (k, n)).into_owned(),
            u22: m.view((n, n), (k, k)).into_owned(),
            sig,
        }
    }

    pub fn identity(sig: Signature) -> Self {
        Self::from_matrix_unchecked(&DMatrix::identity(sig.dim(), sig.dim()), sig)
    }

    /// `diag(V1, V2)` with `V1` unitary on `H` and `V2` unitary on `K`.
    pub fn block_diagonal(v1: DMatrix<T>, v2: DMatrix<T>) -> Result<Self> {
        let sig = Signature::new(v1.nrows(), v2.nrows())?;
        let (n, k) = (sig.n, sig.k);
        Self::from_blocks(v1, DMatrix::zeros(n, k), DMatrix::zeros(k, n), v2, sig)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn u11(&self) -> &DMatrix<T> {
        &self.u11
    }

    pub fn u12(&self) -> &DMatrix<T> {
        &self.u12
    }

    pub fn u21(&self) -> &DMatrix<T> {
        &self.u21
    }

    pub fn u22(&self) -> &DMatrix<T> {
        &self.u22
    }

    pub fn to_matrix(&self) -> DMatrix<T> {
        let (n, k) = (self.sig.n, self.sig.k);
        let mut m = DMatrix::zeros(n + k, n + k);
        m.view_mut((0, 0), (n, n)).copy_from(&self.u11);
        m.view_mut((0, n), (n, k)).copy_from(&self.u12);
        m.view_mut((n, 0), (k, n)).copy_from(&self.u21);
        m.view_mut((n, n), (k, k)).copy_from(&self.u22);
        m
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &JUnitary<T>) -> Result<JUnitary<T>> {
        if self.sig != other.sig {
            return Err(Error::validation("signature mismatch in product"));
        }
        Ok(Self::from_matrix_unchecked(
            &(self.to_matrix() * other.to_matrix()),
            self.sig,
        ))
    }

    /// `U^{-1} = J U* J`.
    pub fn inverse(&self) -> JUnitary<T> {
        JUnitary {
            u11: self.u11.adjoint(),
            u12: -self.u21.adjoint(),
            u21: -self.u12.adjoint(),
            u22: self.u22.adjoint(),
            sig: self.sig,
        }
    }

    /// Defect of `U*JU = J` as the largest absolute block entry.
    pub fn defect(&self) -> f64 {
        junitary_defect(&self.u11, &self.u12, &self.u21, &self.u22, self.sig)
    }

    /// Spectral norm of the full operator.
    pub fn norm(&self) -> Result<f64> {
        matfun::spectral_norm(&self.to_matrix())
    }

    pub fn is_block_diagonal(&self, tol: f64) -> bool {
        matfun::max_abs(&self.u12) <= tol && matfun::max_abs(&self.u21) <= tol
    }
}

/// Columns spanning a subspace of `H ⊕ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T: Field> {
    basis: DMatrix<T>,
    sig: Signature,
}

impl<T: Field> SubspaceBasis<T> {
    /// Rejects bases with the wrong row count or dependent columns.
    pub fn new(basis: DMatrix<T>, sig: Signature) -> Result<Self> {
        if basis.nrows() != sig.dim() || basis.ncols() == 0 {
            return Err(Error::validation(format!(
                "basis has shape {:?}, expected {} rows and at least one column",
                basis.shape(),
                sig.dim()
            )));
        }
        let rank = matfun::numerical_rank(&basis, Tolerances::DEFAULT.rank)?;
        if rank != basis.ncols() {
            return Err(Error::validation(format!(
                "basis columns are dependent (rank {rank} of {})",
                basis.ncols()
            )));
        }
        Ok(SubspaceBasis { basis, sig })
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// Gram matrix of the indefinite form on the basis: `B* J B`.
    pub fn form_gram(&self) -> DMatrix<T> {
        self.basis.adjoint() * self.sig.j_matrix::<T>() * &self.basis
    }

    /// Image of the subspace under an operator.
    pub fn transform(&self, u: &JUnitary<T>) -> Result<SubspaceBasis<T>> {
        if u.signature() != self.sig {
            return Err(Error::validation("signature mismatch"));
        }
        SubspaceBasis::new(u.to_matrix() * &self.basis, self.sig)
    }

    /// Equality of spans, decided by the rank of the side-by-side concatenation.
    pub fn spans_same(&self, other: &SubspaceBasis<T>) -> Result<bool> {
        if self.sig != other.sig || self.dim() != other.dim() {
            return Ok(false);
        }
        let mut both = DMatrix::zeros(self.sig.dim(), 2 * self.dim());
        both.view_mut((0, 0), self.basis.shape()).copy_from(&self.basis);
        both.view_mut((0, self.dim()), other.basis.shape())
            .copy_from(&other.basis);
        // columns normalized so the rank cutoff is scale free
        for mut c in both.column_iter_mut() {
            let norm = c.norm();
            c.unscale_mut(norm);
        }
        Ok(matfun::numerical_rank(&both, Tolerances::DEFAULT.subspace)? == self.dim())
    }
}

/// `S(X) = {Xx ⊕ x : x ∈ K}`, returned as the basis `[X; I_k]`.
pub fn graph_subspace<T: Field>(x: &BallPoint<T>) -> SubspaceBasis<T> {
    let (n, k) = x.dims();
    let mut basis = DMatrix::zeros(n + k, k);
    basis.view_mut((0, 0), (n, k)).copy_from(x.matrix());
    basis.view_mut((n, 0), (k, k)).fill_with_identity();
    SubspaceBasis {
        basis,
        sig: Signature { n, k },
    }
}

/// Recover `X` from a maximal negative subspace: `X = top · bottom^{-1}`.
pub fn ballpoint_from_negative_subspace<T: Field>(b: &SubspaceBasis<T>) -> Result<BallPoint<T>> {
    let Signature { n, k } = b.sig;
    if b.dim() != k {
        return Err(Error::validation(format!(
            "a maximal negative subspace has dimension {k}, got {}",
            b.dim()
        )));
    }
    let top = b.basis.view((0, 0), (n, k)).into_owned();
    let bottom = b.basis.view((n, 0), (k, k)).into_owned();
    let x = matfun::right_divide(&top, &bottom).map_err(|e| match e {
        Error::Singular { sigma_min } => Error::NotAGraph { sigma_min },
        other => other,
    })?;
    let norm = matfun::spectral_norm(&x)?;
    BallPoint::new(x).map_err(|_| Error::NotNegative { norm })
}

/// The fractional-linear action `w_U(X) = (U11 X + U12)(U21 X + U22)^{-1}`.
pub fn symplectic_apply<T: Field>(u: &JUnitary<T>, x: &BallPoint<T>) -> Result<BallPoint<T>> {
    if x.dims() != (u.sig.n, u.sig.k) {
        return Err(Error::validation(format!(
            "point has shape {:?}, operator acts on {:?}",
            x.dims(),
            (u.sig.n, u.sig.k)
        )));
    }
    let num = &u.u11 * x.matrix() + &u.u12;
    let den = &u.u21 * x.matrix() + &u.u22;
    let y = matfun::right_divide(&num, &den).map_err(|e| match e {
        Error::Singular { sigma_min } => Error::Numerical(format!("U21 X + U22 is singular (sigma_min {sigma_min:e})")),
        other => other,
    })?;
    BallPoint::new(y).map_err(|e| match e {
        Error::Validation { message, .. } => Error::Numerical(format!("w_U(X) left the ball: {message}")),
        other => other,
    })
}

/// The J-unitary operator realizing the Möbius map `M_A`:
/// `U11 = (1-AA*)^{-1/2}`, `U12 = (1-AA*)^{-1/2} A`, `U21 = (1-A*A)^{-1/2} A*`,
/// `U22 = (1-A*A)^{-1/2}`.
pub fn mobius_junitary<T: Field>(a: &BallPoint<T>) -> Result<JUnitary<T>> {
    let (n, k) = a.dims();
    let m = a.matrix();
    let m_adj = m.adjoint();
    let left = matfun::psd_func(&(DMatrix::identity(n, n) - m * &m_adj), PsdFn::InvSqrt)?;
    let right = matfun::psd_func(&(DMatrix::identity(k, k) - &m_adj * m), PsdFn::InvSqrt)?;
    Ok(JUnitary {
        u12: &left * m,
        u21: &right * m_adj,
        u11: left,
        u22: right,
        sig: Signature { n, k },
    })
}

/// A positive subspace and a negative subspace that together span `H ⊕ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair<T: Field> {
    positive_part: SubspaceBasis<T>,
    negative_part: SubspaceBasis<T>,
}

impl<T: Field> DualPair<T> {
    pub fn new(positive_part: SubspaceBasis<T>, negative_part: SubspaceBasis<T>) -> Result<Self> {
        let sig = positive_part.sig;
        if negative_part.sig != sig {
            return Err(Error::validation("signature mismatch in dual pair"));
        }
        let pos = matfun::hermitian_eigen(&positive_part.form_gram())?.0;
        if !(pos[0] > 0.0) {
            return Err(Error::validation(format!(
                "positive part is not positive (eigenvalue {})",
                pos[0]
            )));
        }
        let neg = matfun::hermitian_eigen(&negative_part.form_gram())?.0;
        if !(neg[neg.len() - 1] < 0.0) {
            return Err(Error::validation(format!(
                "negative part is not negative (eigenvalue {})",
                neg[neg.len() - 1]
            )));
        }
        let mut joint = DMatrix::zeros(sig.dim(), positive_part.dim() + negative_part.dim());
        joint
            .view_mut((0, 0), positive_part.basis.shape())
            .copy_from(&positive_part.basis);
        joint
            .view_mut((0, positive_part.dim()), negative_part.basis.shape())
            .copy_from(&negative_part.basis);
        if matfun::numerical_rank(&joint, Tolerances::DEFAULT.rank)? != sig.dim() {
            return Err(Error::validation("dual pair does not span the whole space"));
        }
        Ok(DualPair {
            positive_part,
            negative_part,
        })
    }

    pub fn positive_part(&self) -> &SubspaceBasis<T> {
        &self.positive_part
    }

    pub fn negative_part(&self) -> &SubspaceBasis<T> {
        &self.negative_part
    }
}

/// `(M, S(X))` with `M` the form-orthogonal complement of `S(X)`.
pub fn dual_pair<T: Field>(x: &BallPoint<T>) -> Result<DualPair<T>> {
    let negative = graph_subspace(x);
    let jn = negative.sig.j_matrix::<T>() * &negative.basis;
    let complement = matfun::nullspace(&jn.adjoint(), Tolerances::DEFAULT.rank)?;
    let positive = SubspaceBasis::new(complement, negative.sig)?;
    DualPair::new(positive, negative)
}

/// Norm bound `√((C²-1)/(C²+1))` on the orbit of `0` under a group of
/// J-unitaries whose operator norms are at most `C`.
pub fn orbit_norm_bound(c: f64) -> Result<f64> {
    if !(c >= 1.0) || !c.is_finite() {
        return Err(Error::validation(format!(
            "norm bound C = {c} must be finite and at least 1"
        )));
    }
    let c2 = c * c;
    Ok(((c2 - 1.0) / (c2 + 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{mobius_apply, rho};
    use crate::fixtures::{random_ball_point, random_junitary, Seed};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn sig(n: usize, k: usize) -> Signature {
        Signature::new(n, k).unwrap()
    }

    fn hyperbolic(t: f64) -> JUnitary<f64> {
        let m = DMatrix::from_row_slice(2, 2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
        JUnitary::from_matrix(&m, sig(1, 1)).unwrap()
    }

    #[test]
    fn form_examples() {
        let s = sig(2, 1);
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert_eq!(indefinite_form(&e1, &e1, s).unwrap(), 1.0);
        assert_eq!(indefinite_form(&e3, &e3, s).unwrap(), -1.0);
        let v = DVector::from_vec(vec![0.5, 1.0]);
        assert_abs_diff_eq!(indefinite_form(&v, &v, sig(1, 1)).unwrap(), -0.75, epsilon = 1e-15);
        assert!(indefinite_form(&v, &e1, s).is_err());
    }

    #[test]
    fn junitary_examples() {
        let s = sig(1, 1);
        let one = || DMatrix::from_element(1, 1, 1.0);
        let zero = || DMatrix::from_element(1, 1, 0.0);
        assert!(is_junitary(&one(), &zero(), &zero(), &one(), s, 1e-12).unwrap());
        let t: f64 = 0.7;
        let (c, sh) = (
            DMatrix::from_element(1, 1, t.cosh()),
            DMatrix::from_element(1, 1, t.sinh()),
        );
        assert!(is_junitary(&c, &sh, &sh, &c, s, 1e-12).unwrap());
        let two = DMatrix::from_element(1, 1, 2.0);
        assert!(!is_junitary(&two, &zero(), &zero(), &one(), s, 1e-8).unwrap());
        assert!(is_junitary(&one(), &zero(), &zero(), &one(), sig(2, 1), 1e-8).is_err());
    }

    #[test]
    fn graph_examples() {
        let g = graph_subspace(&BallPoint::<f64>::zero(2, 1));
        assert_eq!(g.basis().as_slice(), &[0.0, 0.0, 1.0]);
        let g = graph_subspace(&BallPoint::scalar(0.5).unwrap());
        assert_eq!(g.basis().as_slice(), &[0.5, 1.0]);
        assert_abs_diff_eq!(g.form_gram()[(0, 0)], -0.75, epsilon = 1e-15);
        let x = random_ball_point::<f64>(5, 3, 0.95, Seed(1));
        let eig = matfun::hermitian_eigen(&graph_subspace(&x).form_gram()).unwrap().0;
        assert!(eig.iter().all(|&l| l < 0.0));
    }

    #[test]
    fn graph_round_trip_and_right_factor() {
        let x = random_ball_point::<f64>(4, 2, 0.9, Seed(2));
        let g = graph_subspace(&x);
        let back = ballpoint_from_negative_subspace(&g).unwrap();
        assert!(matfun::max_abs(&(back.matrix() - x.matrix())) <= 1e-10);
        let r = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, -2.0, 1.0]);
        let mixed = SubspaceBasis::new(g.basis() * r, g.signature()).unwrap();
        let back = ballpoint_from_negative_subspace(&mixed).unwrap();
        assert!(matfun::max_abs(&(back.matrix() - x.matrix())) <= 1e-10);
    }

    #[test]
    fn graph_errors() {
        let h_only = SubspaceBasis::new(DMatrix::from_row_slice(3, 1, &[1.0, 0.0, 0.0]), sig(2, 1)).unwrap();
        assert!(matches!(
            ballpoint_from_negative_subspace(&h_only),
            Err(Error::NotAGraph { .. })
        ));
        let positive = SubspaceBasis::new(DMatrix::from_row_slice(2, 1, &[2.0, 1.0]), sig(1, 1)).unwrap();
        assert!(matches!(
            ballpoint_from_negative_subspace(&positive),
            Err(Error::NotNegative { .. })
        ));
        let two = SubspaceBasis::new(DMatrix::<f64>::identity(3, 2), sig(2, 1)).unwrap();
        assert!(matches!(
            ballpoint_from_negative_subspace(&two),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn symplectic_examples() {
        let x = random_ball_point::<f64>(3, 2, 0.9, Seed(3));
        let id = JUnitary::identity(sig(3, 2));
        assert_eq!(symplectic_apply(&id, &x).unwrap().matrix(), x.matrix());
        let y = symplectic_apply(&hyperbolic(0.7), &BallPoint::zero(1, 1)).unwrap();
        assert_abs_diff_eq!(y.matrix()[(0, 0)], 0.7f64.tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(y.matrix()[(0, 0)], 0.604_367_777_117_163_4, epsilon = 1e-15);
    }

    #[test]
    fn symplectic_composition_and_transport() {
        let s = sig(4, 2);
        for seed in 0..10 {
            let u = random_junitary::<f64>(s, Seed(seed));
            let v = random_junitary::<f64>(s, Seed(50 + seed));
            let x = random_ball_point::<f64>(4, 2, 0.9, Seed(90 + seed));
            let lhs = symplectic_apply(&u, &symplectic_apply(&v, &x).unwrap()).unwrap();
            let rhs = symplectic_apply(&u.compose(&v).unwrap(), &x).unwrap();
            assert!(matfun::max_abs(&(lhs.matrix() - rhs.matrix())) <= 1e-8);
            let image = graph_subspace(&x).transform(&u).unwrap();
            assert!(image
                .spans_same(&graph_subspace(&symplectic_apply(&u, &x).unwrap()))
                .unwrap());
            assert!(!image.spans_same(&graph_subspace(&x)).unwrap());
        }
    }

    #[test]
    fn mobius_junitary_examples() {
        let id = mobius_junitary(&BallPoint::<f64>::zero(2, 1)).unwrap();
        assert_eq!(id.to_matrix(), DMatrix::identity(3, 3));
        let u = mobius_junitary(&BallPoint::scalar(0.5).unwrap()).unwrap();
        let c = 1.0 / 0.75f64.sqrt();
        assert_abs_diff_eq!(u.u11()[(0, 0)], c, epsilon = 1e-15);
        assert_abs_diff_eq!(u.u22()[(0, 0)], 1.154_700_538_379_251_7, epsilon = 1e-15);
        assert_abs_diff_eq!(u.u12()[(0, 0)], 0.577_350_269_189_625_8, epsilon = 1e-15);
        assert_abs_diff_eq!(u.u21()[(0, 0)], 0.5 * c, epsilon = 1e-15);

        let a = random_ball_point::<f64>(3, 2, 0.9, Seed(4));
        let u = mobius_junitary(&a).unwrap();
        assert!(u.defect() <= 1e-9);
        let at_zero = symplectic_apply(&u, &BallPoint::zero(3, 2)).unwrap();
        assert!(matfun::max_abs(&(at_zero.matrix() - a.matrix())) <= 1e-12);
        for seed in 0..10 {
            let x = random_ball_point::<f64>(3, 2, 0.9, Seed(20 + seed));
            let lhs = symplectic_apply(&u, &x).unwrap();
            let rhs = mobius_apply(&a, &x).unwrap();
            assert!(matfun::max_abs(&(lhs.matrix() - rhs.matrix())) <= 1e-8);
        }
    }

    #[test]
    fn inverse_and_product_stay_junitary() {
        let s = sig(3, 2);
        let u = random_junitary::<Complex64>(s, Seed(5));
        let v = random_junitary::<Complex64>(s, Seed(6));
        assert!(u.inverse().defect() <= 1e-8);
        assert!(u.compose(&v).unwrap().defect() <= 1e-8);
        let should_be_id = u.compose(&u.inverse()).unwrap().to_matrix();
        assert!(matfun::max_abs(&(should_be_id - DMatrix::identity(5, 5))) <= 1e-9);
    }

    #[test]
    fn symplectic_maps_are_isometries() {
        let s = sig(3, 2);
        for seed in 0..10 {
            let u = random_junitary::<f64>(s, Seed(seed));
            let a = random_ball_point::<f64>(3, 2, 0.8, Seed(30 + seed));
            let b = random_ball_point::<f64>(3, 2, 0.8, Seed(60 + seed));
            let before = rho(&a, &b).unwrap();
            let after = rho(&symplectic_apply(&u, &a).unwrap(), &symplectic_apply(&u, &b).unwrap()).unwrap();
            assert!((before - after).abs() <= 1e-8);
        }
    }

    #[test]
    fn block_diagonal_maps_preserve_norm() {
        let v1 = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let v2 = DMatrix::from_element(1, 1, -1.0);
        let u = JUnitary::block_diagonal(v1, v2).unwrap();
        let x = random_ball_point::<f64>(2, 1, 0.9, Seed(7));
        assert_abs_diff_eq!(symplectic_apply(&u, &x).unwrap().norm(), x.norm(), epsilon = 1e-9);
    }

    #[test]
    fn dual_pair_examples() {
        let dp = dual_pair(&BallPoint::<f64>::zero(2, 1)).unwrap();
        assert_eq!(dp.negative_part().basis().as_slice(), &[0.0, 0.0, 1.0]);
        let pos = dp.positive_part().basis();
        assert_abs_diff_eq!(pos.row(2).amax(), 0.0, epsilon = 1e-15);

        let a = 0.4;
        let dp = dual_pair(&BallPoint::scalar(a).unwrap()).unwrap();
        let m = dp.positive_part().basis().column(0).into_owned();
        let m = &m / m[0]; // normalize to (1, a)
        assert_abs_diff_eq!(m[1], a, epsilon = 1e-14);
        let n = DVector::from_vec(vec![a, 1.0]);
        assert_abs_diff_eq!(indefinite_form(&m, &n, sig(1, 1)).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            indefinite_form(&m, &m, sig(1, 1)).unwrap(),
            1.0 - a * a,
            epsilon = 1e-14
        );

        let x = random_ball_point::<Complex64>(4, 2, 0.9, Seed(8));
        let dp = dual_pair(&x).unwrap();
        assert_eq!(dp.positive_part().dim(), 4);
    }

    #[test]
    fn orbit_bound_examples() {
        assert_eq!(orbit_norm_bound(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(orbit_norm_bound(3f64.sqrt()).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(orbit_norm_bound(0.5).is_err());
        for seed in 0..20 {
            let u = random_junitary::<f64>(sig(3, 2), Seed(seed));
            let c = u.norm().unwrap();
            let x = symplectic_apply(&u, &BallPoint::zero(3, 2)).unwrap();
            assert!(x.norm() <= orbit_norm_bound(c).unwrap() + 1e-9);
        }
    }
}
