//! Hyperbolic geometry of the operator ball of `n × k` matrices, its
//! correspondence with maximal negative subspaces of an indefinite
//! inner-product space, and constructive fixed points and unitarization for
//! finite groups of J-unitary operators.

// Negated float comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod cli;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod indefinite;
mod jacobi;
pub mod matfun;
pub mod solver;
pub mod tolerance;

pub use ball::{BallPoint, BoundaryMargin};
pub use error::{Error, Result};
pub use field::{Field, FieldTag};
pub use indefinite::{DualPair, JUnitary, Signature, SubspaceBasis};
pub use matfun::{PolarFactors, PsdFn};
pub use solver::{GroupSpec, SolveMethod, SolveReport, UnitarizationResult};
pub use tolerance::Tolerances;
