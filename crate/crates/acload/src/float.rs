//! Scalar abstraction for the simulation kernels.
//!
//! All model math is generic over [`Float`] so the same pipeline runs in
//! `f32` or `f64`. The file-backed pipeline and the CLI fix `f64`; see the
//! aliases at the crate root.

use std::fmt::{Debug, Display};

/// Floating-point scalar the model kernels are generic over.
pub trait Float:
    num_traits::Float
    + num_traits::FromPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Float for f32 {}
impl Float for f64 {}

/// Convert an `f64` constant into `F`.
///
/// Panics only for scalar types that cannot represent ordinary constants,
/// which no implementor of [`Float`] in this crate does.
pub(crate) fn cast<F: Float>(value: f64) -> F {
    F::from_f64(value).expect("constant not representable in scalar type")
}
