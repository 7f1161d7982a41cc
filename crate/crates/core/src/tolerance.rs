//! Numerical tolerances shared by every module.

/// One record holding every tolerance knob. Operations that do not take an
/// explicit tolerance read [`Tolerances::DEFAULT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative asymmetry allowed before a Hermitian input is rejected.
    pub hermitian: f64,
    /// Relative negative eigenvalue drift clamped to zero in spectral functions.
    pub psd_clamp: f64,
    /// Relative smallest singular value below which a matrix counts as singular.
    pub singular: f64,
    /// Absolute eigenvalue floor for `inv_sqrt`.
    pub inv_sqrt_floor: f64,
    /// Strict guard keeping ball points away from the unit sphere: `‖X‖ < 1 - ball_guard`.
    pub ball_guard: f64,
    /// Relative singular-value cutoff for nullspace and rank computations.
    pub rank: f64,
    /// Relative tolerance of subspace equality by rank of concatenation.
    pub subspace: f64,
    /// Default tolerance of J-unitarity checks.
    pub junitary: f64,
    /// Eigenvalues of the averaged signature operator closer to zero than this are ambiguous.
    pub inertia_gap: f64,
    /// Max-norm distance under which two group elements are identified.
    pub dedup: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        psd_clamp: 1e-12,
        singular: 1e-13,
        inv_sqrt_floor: 1e-14,
        ball_guard: 1e-12,
        rank: 1e-10,
        subspace: 1e-9,
        junitary: 1e-8,
        inertia_gap: 1e-10,
        dedup: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
