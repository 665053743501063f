// SPDX-License-Identifier: MIT OR Apache-2.0

//! Scalar abstraction shared by the splitter, the oracles and the envelope code.
//!
//! The splitting recursion only needs ordered signed arithmetic, so it runs
//! unchanged over binary floats and over exact rationals. Interpolation needs
//! true division, which rules out plain integers.

use std::fmt::Debug;

use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Ordered field element usable as a sample value or a timestamp.
pub trait Scalar:
    Clone + PartialOrd + Debug + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    /// Absolute slack for sign and equality tests on quantities of magnitude `scale`.
    ///
    /// Zero for exact types.
    fn slack(scale: &Self) -> Self;

    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable in scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn slack(scale: &Self) -> Self {
        64.0 * f64::EPSILON * scale.abs().max(f64::MIN_POSITIVE)
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn slack(scale: &Self) -> Self {
        64.0 * f32::EPSILON * scale.abs().max(f32::MIN_POSITIVE)
    }
}

impl Scalar for Rational64 {
    fn is_finite_value(&self) -> bool {
        true
    }

    fn slack(_scale: &Self) -> Self {
        Ratio::zero()
    }
}

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }

    fn slack(_scale: &Self) -> Self {
        Ratio::zero()
    }
}

/// Exact conversion of a finite float into a big rational.
pub fn exact_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Converts an integer into any scalar type; used by tests and generators.
pub fn from_i64<S: Scalar>(x: i64) -> S {
    S::from_i64(x).expect("integer representable in scalar type")
}

/// `|a - b| <= rel * max(|a|, |b|, 1)`, or exact equality for exact types.
pub fn approx_eq<S: Scalar>(a: &S, b: &S, rel: f64) -> bool {
    let diff = (a.clone() - b.clone()).abs();
    if diff.is_zero() {
        return true;
    }
    let scale = a.to_f64_lossy().abs().max(b.to_f64_lossy().abs()).max(1.0);
    diff.to_f64_lossy() <= rel * scale
}
