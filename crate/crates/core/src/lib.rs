// SPDX-License-Identifier: MIT OR Apache-2.0

//! Optimal two-way splitting of a time series under L1 drift.
//!
//! A binary labeling divides the samples into two subsequences; the objective
//! is the sum of both subsequences' total variation. [`trimmed_split`] finds a
//! minimizer in one streaming pass, keeping only switch points that are still
//! strict right-to-left records, and [`extract_envelopes`] turns a minimizer
//! into a non-crossing upper/lower band.
//!
//! Everything is generic over [`Scalar`]: `f64`, `f32`, and exact rationals.
//!
//! ```
//! use driftsplit::{trimmed_split, Series};
//!
//! let series = Series::from_f64(&[0.0, 2.0, 1.0]).unwrap();
//! let split = trimmed_split(&series).unwrap();
//! assert_eq!(split.total_drift, 1.0);
//! assert_eq!(split.labels.bits(), vec![1, 0, 1]);
//! ```

pub mod active;
pub mod analysis;
pub mod backtrack;
pub mod drift;
pub mod envelope;
pub mod error;
pub mod generators;
pub mod oracle;
pub mod scalar;
pub mod series;
pub mod splitter;

pub use active::{eliminate_by_step, ActiveClassSet, ClassState};
pub use backtrack::{backtrack_labels, BackPointerTable};
pub use drift::{total_drift, variation};
pub use envelope::{
    build_envelopes, check_non_crossing, extract_envelopes, interpolate, resolve_crossings,
    EnvelopePair, EnvelopeSplit, InterpMode,
};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use series::{LabelSequence, SampleSeries};
pub use splitter::{survivor_set, trimmed_split, SplitResult, Splitter, StepOutcome};

/// Exact rational with machine-word parts.
pub type Ratio = num_rational::Rational64;
/// Exact rational without overflow.
pub type BigRatio = num_rational::BigRational;

pub type Series = SampleSeries<f64>;
pub type Series32 = SampleSeries<f32>;
pub type RatioSeries = SampleSeries<Ratio>;
pub type BigRatioSeries = SampleSeries<BigRatio>;

pub type Split = SplitResult<f64>;
pub type Envelopes = EnvelopePair<f64>;
