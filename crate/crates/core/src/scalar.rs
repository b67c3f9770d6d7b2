//! Scalar abstraction for edge weights and distances.
//!
//! Every algorithm in the crate is generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Comparisons between distances are exact
//! (no epsilon); see the crate docs for the consequences of near-tie weights.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::num::ParseFloatError;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::Serialize;

/// Floating point type used for weights and distances.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + FromStr<Err = ParseFloatError>
    + Serialize
    + 'static
{
    /// Converts a configuration constant into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossless for `f32` and `f64`; used for reports and JSON output.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Largest integer `j >= 0` with `j * unit <= value`.
///
/// Computed by division and then corrected so that the defining inequality
/// holds in the scalar arithmetic itself, not only in the reals.
pub fn floor_steps<S: Scalar>(value: S, unit: S) -> u32 {
    debug_assert!(unit > S::zero());
    if !(value > S::zero()) {
        return 0;
    }
    let mut j = (value / unit).floor().to_u32().unwrap_or(u32::MAX - 1);
    while S::of_usize(j as usize + 1) * unit <= value {
        j += 1;
    }
    while j > 0 && S::of_usize(j as usize) * unit > value {
        j -= 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_steps_matches_definition() {
        assert_eq!(floor_steps(0.0f64, 2.0), 0);
        assert_eq!(floor_steps(1.999f64, 2.0), 0);
        assert_eq!(floor_steps(2.0f64, 2.0), 1);
        assert_eq!(floor_steps(5.0f64, 1.0), 5);
        assert_eq!(floor_steps(0.3f64, 0.1), 2);
        assert_eq!(floor_steps(7.5f32, 2.5), 3);
    }
}
