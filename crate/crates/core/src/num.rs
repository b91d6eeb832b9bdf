//! Scalar abstraction for the analytic calculators.

use num_traits::{Float, FromPrimitive};
use std::fmt::Debug;

/// Floating-point scalar accepted by the analytic models.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    fn from_u64_lossy(v: u64) -> Self {
        Self::from_u64(v).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {}
impl Real for f64 {}
