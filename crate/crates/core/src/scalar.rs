use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar used by the geometry and bound evaluators: f32 or f64.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + 'static
{
    /// Half-width of the membership band around region boundaries.
    fn boundary_tol() -> Self;

    /// Distance below which two computed vertices are treated as one.
    fn snap_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("scalar literal out of range")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn boundary_tol() -> Self {
        1e-9
    }

    #[inline]
    fn snap_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    #[inline]
    fn boundary_tol() -> Self {
        1e-4
    }

    #[inline]
    fn snap_tol() -> Self {
        1e-4
    }
}
