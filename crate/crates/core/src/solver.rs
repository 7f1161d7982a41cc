//! Fixed points of finite J-unitary groups and of commuting nonexpansive
//! families, and unitarization of bounded representations.

use nalgebra::{DMatrix, DVector};

use crate::ball::{midpoint, rho, BallPoint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::indefinite::{
    ballpoint_from_negative_subspace, mobius_junitary, orbit_norm_bound, symplectic_apply, JUnitary, Signature,
    SubspaceBasis,
};
use crate::matfun::{self, PsdFn};
use crate::tolerance::Tolerances;

/// A self-map of the operator ball.
pub trait BallMap<T: Field> {
    fn apply(&self, x: &BallPoint<T>) -> Result<BallPoint<T>>;
}

impl<T: Field> BallMap<T> for JUnitary<T> {
    fn apply(&self, x: &BallPoint<T>) -> Result<BallPoint<T>> {
        symplectic_apply(self, x)
    }
}

impl<T: Field, M: BallMap<T> + ?Sized> BallMap<T> for &M {
    fn apply(&self, x: &BallPoint<T>) -> Result<BallPoint<T>> {
        (**self).apply(x)
    }
}

impl<T: Field, M: BallMap<T> + ?Sized> BallMap<T> for Box<M> {
    fn apply(&self, x: &BallPoint<T>) -> Result<BallPoint<T>> {
        (**self).apply(x)
    }
}

/// Adapter turning a closure into a [`BallMap`].
pub struct FnMap<F>(pub F);

impl<T: Field, F: Fn(&BallPoint<T>) -> Result<BallPoint<T>>> BallMap<T> for FnMap<F> {
    fn apply(&self, x: &BallPoint<T>) -> Result<BallPoint<T>> {
        (self.0)(x)
    }
}

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
pub const DEFAULT_MAX_ITER: usize = 5_000;

/// Generators of a group of J-unitary operators.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec<T: Field> {
    sig: Signature,
    generators: Vec<JUnitary<T>>,
    pub closure_cap: usize,
    pub dedup_tol: f64,
}

impl<T: Field> GroupSpec<T> {
    pub fn new(sig: Signature, generators: Vec<JUnitary<T>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.signature() != sig {
                return Err(Error::validation_at(format!("/generators/{i}"), "signature mismatch"));
            }
            if !(g.defect() <= Tolerances::DEFAULT.junitary) {
                return Err(Error::validation_at(
                    format!("/generators/{i}"),
                    "generator is not J-unitary",
                ));
            }
        }
        Ok(GroupSpec {
            sig,
            generators,
            closure_cap: DEFAULT_CLOSURE_CAP,
            dedup_tol: Tolerances::DEFAULT.dedup,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.closure_cap = cap;
        self
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn generators(&self) -> &[JUnitary<T>] {
        &self.generators
    }
}

/// Sum of real parts of all entries; moves by at most `dim² · δ` when every
/// entry moves by `δ`.
fn sort_key<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.re_part()).sum()
}

/// Breadth-first closure of the generators under products and inverses.
/// Elements closer than `dedup_tol` in max-norm are identified. The identity
/// comes first and the order is deterministic.
pub fn group_closure<T: Field>(spec: &GroupSpec<T>) -> Result<Vec<JUnitary<T>>> {
    let sig = spec.sig;
    let dim = sig.dim();
    let window = spec.dedup_tol * (dim * dim) as f64;
    let mut steps: Vec<DMatrix<T>> = Vec::new();
    for g in &spec.generators {
        steps.push(g.to_matrix());
        steps.push(g.inverse().to_matrix());
    }

    let mut elements: Vec<DMatrix<T>> = vec![DMatrix::identity(dim, dim)];
    let mut index: Vec<(f64, usize)> = vec![(sort_key(&elements[0]), 0)];
    let mut frontier = 0;
    while frontier < elements.len() {
        for step in &steps {
            let candidate = &elements[frontier] * step;
            let key = sort_key(&candidate);
            let lo = index.partition_point(|&(k, _)| k < key - window);
            let seen = index[lo..]
                .iter()
                .take_while(|&&(k, _)| k <= key + window)
                .any(|&(_, i)| matfun::max_abs(&(&elements[i] - &candidate)) < spec.dedup_tol);
            if seen {
                continue;
            }
            if elements.len() >= spec.closure_cap {
                return Err(Error::NotFinite { cap: spec.closure_cap });
            }
            let pos = index.partition_point(|&(k, _)| k < key);
            index.insert(pos, (key, elements.len()));
            elements.push(candidate);
        }
        frontier += 1;
    }
    Ok(elements
        .iter()
        .map(|m| JUnitary::from_matrix_unchecked(m, sig))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Averaging,
    Iterative,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Averaging => "averaging",
            SolveMethod::Iterative => "iterative",
        }
    }
}

/// Operator-norm bound `C`, the resulting radius `r(C)`, and the largest
/// observed `‖w_g(0)‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitBoundCheck {
    pub c: f64,
    pub r: f64,
    pub max_orbit_norm: f64,
}

impl OrbitBoundCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.max_orbit_norm <= self.r + slack
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T: Field> {
    pub fixed_point: BallPoint<T>,
    pub method: SolveMethod,
    /// `max_g ρ(w_g(X), X)` over the supplied maps.
    pub residual: f64,
    pub iterations: usize,
    pub group_size: usize,
    pub converged: bool,
    pub orbit_bound_check: Option<OrbitBoundCheck>,
    /// Displacement after each accepted sweep, starting with the initial point.
    pub trace: Vec<f64>,
}

/// `max_g ρ(X, g(X))`.
pub fn displacement<T: Field, M: BallMap<T>>(x: &BallPoint<T>, maps: &[M]) -> Result<f64> {
    let mut worst = 0.0f64;
    for g in maps {
        worst = worst.max(rho(x, &g.apply(x)?)?);
    }
    Ok(worst)
}

/// Orbit of `0` and the norm bound it must satisfy.
pub fn orbit_bound_check<T: Field>(elements: &[JUnitary<T>]) -> Result<OrbitBoundCheck> {
    let sig = elements
        .first()
        .ok_or_else(|| Error::validation("empty element list"))?
        .signature();
    let origin = BallPoint::zero(sig.n, sig.k);
    let mut c = 1.0f64;
    let mut max_orbit_norm = 0.0f64;
    for g in elements {
        c = c.max(g.norm()?);
        max_orbit_norm = max_orbit_norm.max(symplectic_apply(g, &origin)?.norm());
    }
    Ok(OrbitBoundCheck {
        c,
        r: orbit_norm_bound(c)?,
        max_orbit_norm,
    })
}

/// Intermediate data of the averaging construction.
#[derive(Debug, Clone)]
pub struct InvariantForm<T: Field> {
    /// `Q = (1/|G|) Σ U_g* U_g`, a positive definite form invariant under the group.
    pub q: DMatrix<T>,
    /// Eigenvalues of `Q^{-1/2} J Q^{-1/2}`, ascending.
    pub signature_eigenvalues: DVector<f64>,
    /// `Q^{-1/2}` applied to the negative eigenspace: an invariant maximal negative subspace.
    pub invariant_subspace: SubspaceBasis<T>,
}

pub fn invariant_form<T: Field>(elements: &[JUnitary<T>]) -> Result<InvariantForm<T>> {
    let sig = elements
        .first()
        .ok_or_else(|| Error::validation("empty element list"))?
        .signature();
    if elements.iter().any(|g| g.signature() != sig) {
        return Err(Error::validation("elements have different signatures"));
    }
    let dim = sig.dim();
    let mut q = DMatrix::<T>::zeros(dim, dim);
    for g in elements {
        let m = g.to_matrix();
        q += m.adjoint() * &m;
    }
    let q = matfun::hermitian_part(&q.unscale(elements.len() as f64));

    let q_scale = matfun::max_abs(&q);
    for g in elements {
        let m = g.to_matrix();
        let moved = m.adjoint() * &q * &m;
        if matfun::max_abs(&(moved - &q)) > 1e-9 * q_scale {
            return Err(Error::Inconsistency(
                "averaged form is not invariant; elements do not form a group".into(),
            ));
        }
    }

    let q_inv_sqrt = matfun::psd_func(&q, PsdFn::InvSqrt)?;
    let j_prime = &q_inv_sqrt * sig.j_matrix::<T>() * &q_inv_sqrt;
    let (values, vectors) = matfun::hermitian_eigen(&j_prime)?;
    let scale = values.amax();
    if values.iter().any(|l| l.abs() < Tolerances::DEFAULT.inertia_gap * scale) {
        return Err(Error::Inconsistency(
            "averaged signature operator has a near-zero eigenvalue".into(),
        ));
    }
    let negatives = values.iter().filter(|&&l| l < 0.0).count();
    if negatives != sig.k {
        return Err(Error::Inconsistency(format!(
            "averaged signature operator has {negatives} negative eigenvalues, expected {}",
            sig.k
        )));
    }
    let negative_space = vectors.columns(0, sig.k).into_owned();
    let invariant_subspace = SubspaceBasis::new(&q_inv_sqrt * negative_space, sig)?;
    Ok(InvariantForm {
        q,
        signature_eigenvalues: values,
        invariant_subspace,
    })
}

/// Exact common fixed point of a finite group by averaging the Hilbert form
/// over the group and taking the negative eigenspace of `J` relative to it.
pub fn fixed_point_averaging<T: Field>(elements: &[JUnitary<T>]) -> Result<SolveReport<T>> {
    let form = invariant_form(elements)?;
    let fixed_point = ballpoint_from_negative_subspace(&form.invariant_subspace)?;
    let residual = displacement(&fixed_point, elements)?;
    Ok(SolveReport {
        fixed_point,
        method: SolveMethod::Averaging,
        residual,
        iterations: 1,
        group_size: elements.len(),
        converged: true,
        orbit_bound_check: Some(orbit_bound_check(elements)?),
        trace: vec![residual],
    })
}

/// Heuristic common fixed point by cyclic midpoint sweeps
/// `X ← midpoint(X, g_i(X))` over the maps in input order.
///
/// A sweep that raises the displacement is damped by moving only to the
/// midpoint of the current point and the sweep result, halving up to 20
/// times; if no damped sweep helps the run stops unconverged. Exhausting
/// `max_iter` also returns unconverged with the best iterate.
pub fn fixed_point_iterative<T: Field, M: BallMap<T>>(
    maps: &[M],
    init: &BallPoint<T>,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport<T>> {
    if maps.is_empty() {
        return Err(Error::validation("no maps to iterate"));
    }
    let mut x = init.clone();
    let mut d = displacement(&x, maps)?;
    let mut trace = vec![d];
    let mut iterations = 0;
    while d > tol && iterations < max_iter {
        iterations += 1;
        let mut candidate = x.clone();
        for g in maps {
            candidate = midpoint(&candidate, &g.apply(&candidate)?)?;
        }
        let mut cd = displacement(&candidate, maps)?;
        let mut halvings = 0;
        while cd > d && halvings < 20 {
            candidate = midpoint(&x, &candidate)?;
            cd = displacement(&candidate, maps)?;
            halvings += 1;
        }
        if cd > d {
            break;
        }
        let progress = d - cd;
        x = candidate;
        d = cd;
        trace.push(d);
        if progress == 0.0 {
            break;
        }
    }
    Ok(SolveReport {
        fixed_point: x,
        method: SolveMethod::Iterative,
        residual: d,
        iterations,
        group_size: maps.len(),
        converged: d <= tol,
        orbit_bound_check: None,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitarizationResult<T: Field> {
    /// `U`, mapping `K` onto the invariant negative subspace.
    pub similarity: DMatrix<T>,
    /// Group elements `π(g)` in closure order.
    pub elements: Vec<DMatrix<T>>,
    /// `τ(g) = U^{-1} π(g) U`, aligned with `elements`.
    pub transformed: Vec<DMatrix<T>>,
    /// `max_g ‖τ(g)* τ(g) - I‖`.
    pub unitarity_defect: f64,
    pub solve: SolveReport<T>,
}

/// Similarity to a unitary (orthogonal, over the reals) representation:
/// closure, averaging fixed point `X`, then conjugation by the Möbius
/// operator of `X`.
pub fn unitarize<T: Field>(spec: &GroupSpec<T>) -> Result<UnitarizationResult<T>> {
    let closure = group_closure(spec)?;
    let solve = fixed_point_averaging(&closure)?;
    let u = mobius_junitary(&solve.fixed_point)?;
    let similarity = u.to_matrix();
    let similarity_inv = u.inverse().to_matrix();
    let elements: Vec<DMatrix<T>> = closure.iter().map(JUnitary::to_matrix).collect();
    let transformed: Vec<DMatrix<T>> = elements.iter().map(|p| &similarity_inv * p * &similarity).collect();
    let unitarity_defect = max_unitarity_defect(&transformed)?;
    Ok(UnitarizationResult {
        similarity,
        elements,
        transformed,
        unitarity_defect,
        solve,
    })
}

fn max_unitarity_defect<T: Field>(ms: &[DMatrix<T>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in ms {
        let id = DMatrix::<T>::identity(m.ncols(), m.ncols());
        worst = worst.max(matfun::spectral_norm(&(m.adjoint() * m - id))?);
    }
    Ok(worst)
}

/// Diagnostics recomputed from a unitarization result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarizationCheck {
    /// `max_g ‖τ'(g)* τ'(g) - I‖` with `τ'(g) = S^{-1} π(g) S` recomputed from the similarity `S`.
    pub unitarity_defect: f64,
    /// Largest entry of the off-diagonal blocks of any `τ'(g)`.
    pub block_diagonality_defect: f64,
    /// Largest entry of `τ(g) - τ'(g)` between stored and recomputed matrices.
    pub reconstruction_defect: f64,
    /// `max_g ρ(w_g(X), X)` with `X = S12 S22^{-1}` read off the similarity.
    pub fixed_point_residual: f64,
}

impl UnitarizationCheck {
    pub const UNITARITY_LIMIT: f64 = 1e-7;
    pub const BLOCK_LIMIT: f64 = 1e-8;
    pub const RECONSTRUCTION_LIMIT: f64 = 1e-10;
    pub const RESIDUAL_LIMIT: f64 = 1e-8;

    pub fn passes(&self) -> bool {
        self.unitarity_defect <= Self::UNITARITY_LIMIT
            && self.block_diagonality_defect <= Self::BLOCK_LIMIT
            && self.reconstruction_defect <= Self::RECONSTRUCTION_LIMIT
            && self.fixed_point_residual <= Self::RESIDUAL_LIMIT
    }

    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("unitarity_defect", self.unitarity_defect),
            ("block_diagonality_defect", self.block_diagonality_defect),
            ("reconstruction_defect", self.reconstruction_defect),
            ("fixed_point_residual", self.fixed_point_residual),
        ]
    }
}

pub fn verify_unitarized<T: Field>(result: &UnitarizationResult<T>, spec: &GroupSpec<T>) -> Result<UnitarizationCheck> {
    let sig = spec.signature();
    let (n, k) = (sig.n, sig.k);
    let closure = group_closure(spec)?;
    if result.transformed.len() != closure.len() {
        return Err(Error::validation(format!(
            "result holds {} transformed elements but the group has {}",
            result.transformed.len(),
            closure.len()
        )));
    }
    if result.similarity.shape() != (sig.dim(), sig.dim()) {
        return Err(Error::validation("similarity has the wrong shape"));
    }
    let s = &result.similarity;
    let s_inv = matfun::matrix_inverse(s)?;
    let mut recomputed = Vec::with_capacity(closure.len());
    let mut reconstruction_defect = 0.0f64;
    let mut block_diagonality_defect = 0.0f64;
    for (g, stored) in closure.iter().zip(&result.transformed) {
        let tau = &s_inv * g.to_matrix() * s;
        if stored.shape() != tau.shape() {
            return Err(Error::validation("transformed element has the wrong shape"));
        }
        reconstruction_defect = reconstruction_defect.max(matfun::max_abs(&(stored - &tau)));
        let off_top = tau.view((0, n), (n, k)).into_owned();
        let off_bottom = tau.view((n, 0), (k, n)).into_owned();
        block_diagonality_defect = block_diagonality_defect
            .max(matfun::max_abs(&off_top))
            .max(matfun::max_abs(&off_bottom));
        recomputed.push(tau);
    }
    let unitarity_defect = max_unitarity_defect(&recomputed)?;

    let top = s.view((0, n), (n, k)).into_owned();
    let bottom = s.view((n, n), (k, k)).into_owned();
    let x = BallPoint::new(matfun::right_divide(&top, &bottom)?)?;
    let fixed_point_residual = displacement(&x, &closure)?;
    Ok(UnitarizationCheck {
        unitarity_defect,
        block_diagonality_defect,
        reconstruction_defect,
        fixed_point_residual,
    })
}
