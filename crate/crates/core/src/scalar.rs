//! Floating point abstraction shared by the planners.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for times, durations and frame rates: `f32` or `f64`.
///
/// Plans computed with `f64` are the reference; `f32` is supported for
/// callers that already carry single-precision metadata, but its floors can
/// land on different frames near integer boundaries.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static
{
    /// Lossless for every count this crate produces in `f64`.
    fn from_count(n: u64) -> Self;

    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn from_count(n: u64) -> Self {
                n as $t
            }

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Floors a nonnegative real onto a frame index, saturating at both ends.
#[inline]
pub(crate) fn floor_index<S: Scalar>(x: S) -> u64 {
    if x.is_nan() || x <= S::zero() {
        return 0;
    }
    x.floor().to_u64().unwrap_or(u64::MAX)
}
