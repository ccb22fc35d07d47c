//! Floating-point scalar abstraction for the whole crate.

use rand::distr::uniform::SampleUniform;

/// Floating-point number type the engine computes with.
///
/// Everything needed by the model, solver, and oracle: IEEE float semantics
/// (via [`num_traits::Float`]), conversion from literals, uniform sampling,
/// and thread-safety so one problem instance can serve concurrent solver
/// runs.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + SampleUniform
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only for values outside the
    /// type's range (never the case for the in-crate constants).
    fn c(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
