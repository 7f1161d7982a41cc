//! Seeded generators of ball points, J-unitary operators and finite groups
//! with planted fixed points.
//!
//! Randomness comes from SplitMix64 so that a seed reproduces the same
//! fixture on every platform.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::ball::BallPoint;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::indefinite::{mobius_junitary, JUnitary, Signature};
use crate::matfun;
use crate::solver::{group_closure, GroupSpec};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> SplitMix64 {
        SplitMix64::seed_from_u64(self.0)
    }

    /// A decorrelated child seed.
    pub fn derive(self, stream: u64) -> Seed {
        let mut rng = SplitMix64::seed_from_u64(self.0 ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Seed(rng.gen())
    }
}

fn gaussian_matrix<T: Field, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<T> {
    // fill row by row so the draw order matches the row-major reading of the matrix
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = T::gaussian(rng);
        }
    }
    m
}

/// Gaussian matrix rescaled to spectral norm `max_norm · u`, `u` uniform in `(0.1, 1]`.
///
/// Panics if `max_norm` is not in `(0, 1)`.
pub fn random_ball_point<T: Field>(n: usize, k: usize, max_norm: f64, seed: Seed) -> BallPoint<T> {
    assert!(max_norm > 0.0 && max_norm < 1.0, "max_norm must lie in (0, 1)");
    let mut rng = seed.rng();
    let g: DMatrix<T> = gaussian_matrix(n, k, &mut rng);
    let u = 1.0 - 0.9 * rng.gen::<f64>();
    let norm = matfun::spectral_norm(&g).expect("finite gaussian matrix");
    let target = (max_norm * u).min(1.0 - 2.0 * Tolerances::DEFAULT.ball_guard);
    BallPoint::new(g * T::from_real(target / norm)).expect("rescaled point lies in the ball")
}

/// Haar-distributed unitary (orthogonal for real fields) from the QR
/// factorization of a Gaussian matrix with the phases of `R`'s diagonal removed.
pub fn random_unitary<T: Field, R: Rng>(n: usize, rng: &mut R) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let modulus = d.modulus();
        if modulus > 0.0 {
            let phase = d.unscale(modulus);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// `diag(V1, V2) · U_A` with Haar unitaries `V1`, `V2` and the Möbius operator
/// of a random ball point `A` of norm at most 0.9.
pub fn random_junitary<T: Field>(sig: Signature, seed: Seed) -> JUnitary<T> {
    let a = random_ball_point::<T>(sig.n, sig.k, 0.9, seed.derive(1));
    random_junitary_through(sig, seed, &a)
}

/// Same construction with the transitive factor fixed to `M_A`.
pub fn random_junitary_through<T: Field>(sig: Signature, seed: Seed, a: &BallPoint<T>) -> JUnitary<T> {
    let mut rng = seed.rng();
    let v1 = random_unitary::<T, _>(sig.n, &mut rng);
    let v2 = random_unitary::<T, _>(sig.k, &mut rng);
    let diag = JUnitary::block_diagonal(v1, v2).expect("unitary blocks");
    let mobius = mobius_junitary(a).expect("ball point");
    diag.compose(&mobius).expect("same signature")
}

/// 32 seeded witnesses of norm at most 0.9 for midpoint inequalities.
pub fn witness_panel<T: Field>(n: usize, k: usize, seed: Seed) -> Vec<BallPoint<T>> {
    (0..32)
        .map(|i| random_ball_point(n, k, 0.9, seed.derive(1000 + i)))
        .collect()
}

/// Finite groups acting orthogonally on `H` (and trivially on `K`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseGroup {
    /// Cyclic group of the given order (2 to 12).
    Cyclic(usize),
    /// Dihedral group of the given order (4 to 16, even).
    Dihedral(usize),
    /// The 24-element group of signed permutations `σ ↦ sign(σ)·P(σ)` of four coordinates.
    Symmetric4,
}

impl BaseGroup {
    pub fn order(self) -> usize {
        match self {
            BaseGroup::Cyclic(m) | BaseGroup::Dihedral(m) => m,
            BaseGroup::Symmetric4 => 24,
        }
    }

    pub fn name(self) -> String {
        match self {
            BaseGroup::Cyclic(m) => format!("cyclic-{m}"),
            BaseGroup::Dihedral(m) => format!("dihedral-{m}"),
            BaseGroup::Symmetric4 => "symmetric-4".into(),
        }
    }

    /// Generators as real block-diagonal J-unitaries on `sig`.
    pub fn generators(self, sig: Signature) -> Result<Vec<JUnitary<f64>>> {
        let h_gens = match self {
            BaseGroup::Cyclic(m) => {
                if !(2..=12).contains(&m) {
                    return Err(Error::validation(format!("cyclic order {m} outside 2..=12")));
                }
                vec![cyclic_generator(sig.n, m)]
            }
            BaseGroup::Dihedral(order) => {
                if !(4..=16).contains(&order) || order % 2 != 0 {
                    return Err(Error::validation(format!(
                        "dihedral order {order} must be even in 4..=16"
                    )));
                }
                dihedral_generators(sig.n, order / 2)
            }
            BaseGroup::Symmetric4 => {
                let swap = [1, 0, 2, 3];
                let cycle = [1, 2, 3, 0];
                vec![
                    signed_permutation_rep(sig.n, &swap),
                    signed_permutation_rep(sig.n, &cycle),
                ]
            }
        };
        h_gens
            .into_iter()
            .map(|v1| JUnitary::block_diagonal(v1, DMatrix::identity(sig.k, sig.k)))
            .collect()
    }

    /// All group elements on `sig`; fails when `n` is too small for a faithful action.
    pub fn elements(self, sig: Signature) -> Result<Vec<JUnitary<f64>>> {
        let spec = GroupSpec::new(sig, self.generators(sig)?)?;
        let elements = group_closure(&spec)?;
        if elements.len() != self.order() {
            return Err(Error::validation(format!(
                "{} does not act faithfully on dimension {} ({} elements generated)",
                self.name(),
                sig.n,
                elements.len()
            )));
        }
        Ok(elements)
    }
}

fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

fn place(m: &mut DMatrix<f64>, at: usize, block: [[f64; 2]; 2]) {
    for i in 0..2 {
        for j in 0..2 {
            m[(at + i, at + j)] = block[i][j];
        }
    }
}

/// Rotation frequencies `1, 2, …, m/2` cycled over the 2×2 blocks.
fn frequencies(m: usize, blocks: usize) -> Vec<usize> {
    let top = (m / 2).max(1);
    (0..blocks).map(|b| 1 + b % top).collect()
}

fn cyclic_generator(n: usize, m: usize) -> DMatrix<f64> {
    let mut g = DMatrix::identity(n, n);
    for (b, j) in frequencies(m, n / 2).into_iter().enumerate() {
        place(
            &mut g,
            2 * b,
            rotation(2.0 * std::f64::consts::PI * j as f64 / m as f64),
        );
    }
    if n % 2 == 1 && m.is_multiple_of(2) {
        g[(n - 1, n - 1)] = -1.0;
    }
    g
}

fn dihedral_generators(n: usize, m: usize) -> Vec<DMatrix<f64>> {
    let mut r = DMatrix::identity(n, n);
    let mut s = DMatrix::identity(n, n);
    for (b, j) in frequencies(m, n / 2).into_iter().enumerate() {
        place(
            &mut r,
            2 * b,
            rotation(2.0 * std::f64::consts::PI * j as f64 / m as f64),
        );
        place(&mut s, 2 * b, [[1.0, 0.0], [0.0, -1.0]]);
    }
    if n % 2 == 1 {
        s[(n - 1, n - 1)] = -1.0;
    }
    vec![r, s]
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Blocks of `sign·P` on four coordinates, then `sign·(standard rep)` on three,
/// then the sign character on any remaining coordinates.
fn signed_permutation_rep(n: usize, p: &[usize; 4]) -> DMatrix<f64> {
    let sign = permutation_sign(p);
    let mut perm = DMatrix::<f64>::zeros(4, 4);
    for (i, &pi) in p.iter().enumerate() {
        perm[(pi, i)] = sign;
    }
    // orthonormal basis of the sum-zero hyperplane of R^4
    let basis = DMatrix::from_row_slice(
        4,
        3,
        &[
            1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            1.0 / 12f64.sqrt(),
            -1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            1.0 / 12f64.sqrt(),
            0.0,
            -2.0 / 6f64.sqrt(),
            1.0 / 12f64.sqrt(),
            0.0,
            0.0,
            -3.0 / 12f64.sqrt(),
        ],
    );
    let standard = basis.transpose() * &perm * &basis;
    let mut g = DMatrix::identity(n, n);
    let mut at = 0;
    while n - at >= 4 {
        g.view_mut((at, at), (4, 4)).copy_from(&perm);
        at += 4;
    }
    if n - at == 3 {
        g.view_mut((at, at), (3, 3)).copy_from(&standard);
        at += 3;
    }
    while at < n {
        g[(at, at)] = sign;
        at += 1;
    }
    g
}

/// Dimension of the space of `X` with `V1 X V2* = X` for every block-diagonal
/// element; zero means `0` is the only common fixed point.
pub fn fixed_space_dim<T: Field>(elements: &[JUnitary<T>]) -> Result<usize> {
    let sig = elements
        .first()
        .ok_or_else(|| Error::validation("empty element list"))?
        .signature();
    let (n, k) = (sig.n, sig.k);
    let dim = n * k;
    let mut stacked = DMatrix::<T>::zeros(dim * elements.len(), dim);
    for (e, u) in elements.iter().enumerate() {
        if !u.is_block_diagonal(1e-9) {
            return Err(Error::validation("element is not block-diagonal"));
        }
        for col in 0..dim {
            let mut basis = DMatrix::<T>::zeros(n, k);
            basis[(col % n, col / n)] = T::one();
            let image = u.u11() * &basis * u.u22().adjoint() - &basis;
            for (r, v) in image.iter().enumerate() {
                stacked[(e * dim + r, col)] = *v;
            }
        }
    }
    Ok(dim - matfun::numerical_rank(&stacked, 1e-9)?)
}

/// A group `{W R(g) W^{-1}}` whose common fixed point `A = w_W(0)` is known.
#[derive(Debug, Clone)]
pub struct PlantedGroup<T: Field> {
    pub spec: GroupSpec<T>,
    pub planted_point: BallPoint<T>,
    /// `W = mobius_junitary(A)` as a full matrix.
    pub planted_similarity: DMatrix<T>,
}

/// Conjugate a finite block-diagonal group by the Möbius operator of `a`.
/// The returned generators are all conjugated elements.
pub fn conjugated_orthogonal_group<T: Field>(base: &[JUnitary<T>], a: &BallPoint<T>) -> Result<PlantedGroup<T>> {
    let first = base.first().ok_or_else(|| Error::validation("empty base group"))?;
    let sig = first.signature();
    if a.dims() != (sig.n, sig.k) {
        return Err(Error::validation("planted point does not match the signature"));
    }
    let tol = Tolerances::DEFAULT.dedup;
    let mats: Vec<DMatrix<T>> = base.iter().map(JUnitary::to_matrix).collect();
    let find = |m: &DMatrix<T>| mats.iter().any(|x| matfun::max_abs(&(x - m)) < tol);
    for (i, u) in base.iter().enumerate() {
        if u.signature() != sig {
            return Err(Error::validation_at(format!("/base/{i}"), "signature mismatch"));
        }
        if !u.is_block_diagonal(1e-12) {
            return Err(Error::validation_at(
                format!("/base/{i}"),
                "base element is not block-diagonal",
            ));
        }
    }
    if !find(&DMatrix::identity(sig.dim(), sig.dim())) {
        return Err(Error::validation("base is not a group: identity missing"));
    }
    for x in &mats {
        for y in &mats {
            if !find(&(x * y)) {
                return Err(Error::validation("base is not a group: not closed under products"));
            }
        }
    }
    let w = mobius_junitary(a)?;
    let w_inv = w.inverse();
    let generators = base
        .iter()
        .map(|r| w.compose(r).and_then(|wr| wr.compose(&w_inv)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlantedGroup {
        spec: GroupSpec::new(sig, generators)?,
        planted_point: a.clone(),
        planted_similarity: w.to_matrix(),
    })
}

/// The real hyperbolic rotation `[[cosh t, sinh t], [sinh t, cosh t]]` on
/// signature (1, 1), which generates an unbounded group for `t ≠ 0`.
pub fn hyperbolic_generator(t: f64) -> JUnitary<f64> {
    let m = DMatrix::from_row_slice(2, 2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
    JUnitary::from_matrix(&m, Signature { n: 1, k: 1 }).expect("hyperbolic rotation is J-unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::symplectic_apply;
    use crate::solver::displacement;
    use num_complex::Complex64;

    #[test]
    fn ball_points_are_deterministic_and_bounded() {
        let a = random_ball_point::<f64>(4, 2, 0.9, Seed(42));
        let b = random_ball_point::<f64>(4, 2, 0.9, Seed(42));
        assert_eq!(a, b);
        assert_ne!(a, random_ball_point::<f64>(4, 2, 0.9, Seed(43)));
        assert!(a.norm() <= 0.9);
        for s in 0..1000 {
            let p = random_ball_point::<f64>(8, 2, 0.99, Seed(s));
            assert!(BallPoint::new(p.matrix().clone()).is_ok());
            assert!(p.norm() <= 0.99 && p.norm() > 0.099 * 0.99);
        }
    }

    #[test]
    fn junitaries_are_valid() {
        let sig = Signature::new(3, 2).unwrap();
        assert_eq!(
            random_junitary::<f64>(sig, Seed(1)),
            random_junitary::<f64>(sig, Seed(1))
        );
        for s in 0..200 {
            assert!(random_junitary::<f64>(sig, Seed(s)).defect() <= 1e-9);
        }
        for s in 0..20 {
            assert!(random_junitary::<Complex64>(sig, Seed(s)).defect() <= 1e-9);
        }
        let u = random_junitary_through::<f64>(sig, Seed(5), &BallPoint::zero(3, 2));
        assert!(u.is_block_diagonal(1e-15));
        assert_eq!(symplectic_apply(&u, &BallPoint::zero(3, 2)).unwrap().norm(), 0.0);
    }

    #[test]
    fn base_groups_have_nominal_order() {
        let sig = Signature::new(4, 1).unwrap();
        for m in 2..=12 {
            assert_eq!(BaseGroup::Cyclic(m).elements(sig).unwrap().len(), m);
        }
        for order in (4..=16).step_by(2) {
            assert_eq!(BaseGroup::Dihedral(order).elements(sig).unwrap().len(), order);
        }
        assert_eq!(BaseGroup::Symmetric4.elements(sig).unwrap().len(), 24);
        assert!(BaseGroup::Symmetric4.elements(Signature::new(2, 1).unwrap()).is_err());
        assert!(BaseGroup::Cyclic(13).generators(sig).is_err());
        assert!(BaseGroup::Dihedral(7).generators(sig).is_err());
    }

    #[test]
    fn shipped_bases_fix_only_zero() {
        for &(n, k) in &[(2usize, 1usize), (3, 2), (4, 1), (5, 3), (7, 2)] {
            let sig = Signature::new(n, k).unwrap();
            for g in [BaseGroup::Dihedral(8), BaseGroup::Cyclic(6), BaseGroup::Symmetric4] {
                if let Ok(el) = g.elements(sig) {
                    assert_eq!(fixed_space_dim(&el).unwrap(), 0, "{} on {n}x{k}", g.name());
                }
            }
        }
        // odd cyclic order on odd n keeps a trivial coordinate
        let el = BaseGroup::Cyclic(5).elements(Signature::new(3, 1).unwrap()).unwrap();
        assert_eq!(fixed_space_dim(&el).unwrap(), 1);
    }

    #[test]
    fn planted_examples() {
        let sig = Signature::new(1, 1).unwrap();
        let a = BallPoint::scalar(0.4).unwrap();
        let trivial = conjugated_orthogonal_group(&[JUnitary::identity(sig)], &a).unwrap();
        assert_eq!(trivial.spec.generators().len(), 1);

        let r = JUnitary::block_diagonal(DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, -1.0)).unwrap();
        let pg = conjugated_orthogonal_group(&[JUnitary::identity(sig), r.clone()], &a).unwrap();
        for g in pg.spec.generators() {
            let y = symplectic_apply(g, &a).unwrap();
            assert!((y.matrix()[(0, 0)] - 0.4).abs() <= 1e-9);
        }
        assert!(conjugated_orthogonal_group(&[r], &a).is_err());

        let sig = Signature::new(4, 1).unwrap();
        let base = BaseGroup::Dihedral(8).elements(sig).unwrap();
        let raw = random_ball_point::<f64>(4, 1, 0.9, Seed(3));
        let a = BallPoint::new(raw.matrix() * (0.6 / raw.norm())).unwrap();
        let pg = conjugated_orthogonal_group(&base, &a).unwrap();
        assert_eq!(pg.spec.generators().len(), 8);
        assert!(displacement(&a, pg.spec.generators()).unwrap() <= 1e-9);
    }
}
