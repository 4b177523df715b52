//! Scalar abstraction shared by probabilities and utilities.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Numeric type used for probabilities and utilities.
///
/// Implemented for `f64` (the default everywhere), `f32`, and exact
/// `Ratio<i64>`. Rational arithmetic is handy when a deterministic CPT must
/// produce a result that is exactly zero or exactly a utility value, but
/// denominators grow quickly so it only suits small networks.
pub trait Real:
    Copy
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Allowed deviation of a CPT row sum from one.
    fn normalization_tolerance() -> Self;

    /// False for NaN and infinities.
    fn is_finite_value(self) -> bool;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn normalization_tolerance() -> Self {
        1e-9
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

// f32 cannot resolve 1e-9; one part in a million is the tightest useful slack.
impl Real for f32 {
    fn normalization_tolerance() -> Self {
        1e-6
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Real for Ratio<i64> {
    fn normalization_tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn is_finite_value(self) -> bool {
        true
    }
}

/// `true` when `p` lies in the closed unit interval. NaN is rejected.
pub(crate) fn in_unit_interval<P: Real>(p: P) -> bool {
    p >= P::zero() && p <= P::one()
}

/// Sum of a slice, folded left to right.
pub(crate) fn sum<P: Real>(values: &[P]) -> P {
    values.iter().fold(P::zero(), |acc, &v| acc + v)
}
