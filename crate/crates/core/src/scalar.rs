use nalgebra::ComplexField;
use num_complex::Complex64;

/// Element type for tensors: `f64` or `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn from_real(value: f64) -> Self;
}

impl Scalar for f64 {
    fn from_real(value: f64) -> Self {
        value
    }
}

impl Scalar for Complex64 {
    fn from_real(value: f64) -> Self {
        Complex64::new(value, 0.0)
    }
}
