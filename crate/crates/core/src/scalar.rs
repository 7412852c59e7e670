use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the numerical routines are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances inside the library are
/// expressed relative to [`Scalar::tiny_rel`], so `f32` runs are usable but
/// far less tight than the `f64` defaults.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant. Panics only for values the type cannot
    /// represent at all, which never happens for `f32`/`f64`.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance floor: `1e-10` for `f64`, scaled up for coarser types.
    fn tiny_rel() -> Self {
        let eps = Self::epsilon();
        let floor = Self::c(1e-10);
        if eps * Self::c(1e3) > floor {
            eps * Self::c(1e3)
        } else {
            floor
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
