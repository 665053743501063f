// SPDX-License-Identifier: MIT OR Apache-2.0

//! The split objective: summed L1 drift of the two subsequences.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LabelSequence, SampleSeries};

/// `Σ|a_t − a_{t−1}| + Σ|b_t − b_{t−1}|` over consecutive samples of each subsequence.
pub fn total_drift<S: Scalar>(series: &SampleSeries<S>, labels: &LabelSequence) -> Result<S> {
    if labels.len() != series.len() {
        return Err(Error::LengthMismatch {
            expected: series.len(),
            found: labels.len(),
        });
    }
    Ok(drift_of(series.values(), labels.as_slice()))
}

pub(crate) fn drift_of<S: Scalar>(values: &[S], labels: &[bool]) -> S {
    let mut last: [Option<&S>; 2] = [None, None];
    let mut sum = S::zero();
    for (v, &l) in values.iter().zip(labels) {
        let slot = &mut last[usize::from(l)];
        if let Some(prev) = slot {
            sum = sum + (v.clone() - (*prev).clone()).abs();
        }
        *slot = Some(v);
    }
    sum
}

/// Total variation `Σ_{t≥2} |x_t − x_{t−1}|` of a slice.
pub fn variation<S: Scalar>(values: &[S]) -> S {
    values.windows(2).fold(S::zero(), |acc, w| {
        acc + (w[1].clone() - w[0].clone()).abs()
    })
}
