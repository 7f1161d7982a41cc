//! Scalar fields: real `f64` and complex `Complex64`.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Tag of the scalar field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldTag::Real => "real",
            FieldTag::Complex => "complex",
        }
    }
}

/// Scalar types the library computes over.
pub trait Field: ComplexField<RealField = f64> + Copy {
    const TAG: FieldTag;

    fn from_parts(re: f64, im: f64) -> Self;

    fn re_part(self) -> f64;

    fn im_part(self) -> f64;

    /// A standard Gaussian draw; complex fields draw both parts.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Field for f64 {
    const TAG: FieldTag = FieldTag::Real;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn re_part(self) -> f64 {
        self
    }

    fn im_part(self) -> f64 {
        0.0
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Field for Complex64 {
    const TAG: FieldTag = FieldTag::Complex;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn re_part(self) -> f64 {
        self.re
    }

    fn im_part(self) -> f64 {
        self.im
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    }
}

/// Reinterpret a real matrix over the complex field.
pub fn complexify_matrix(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}
