// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered finite samples `x_1..x_T`, optionally on an explicit time grid.
///
/// Without explicit timestamps the grid is `1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries<S> {
    values: Vec<S>,
    timestamps: Option<Vec<S>>,
}

impl<S: Scalar> SampleSeries<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            timestamps: None,
        })
    }

    pub fn with_timestamps(values: Vec<S>, timestamps: Vec<S>) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                found: timestamps.len(),
            });
        }
        if let Some(index) = timestamps.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(w) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::TimestampsNotIncreasing { index: w + 1 });
        }
        let mut series = Self::new(values)?;
        series.timestamps = Some(timestamps);
        Ok(series)
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_timestamps(&self) -> bool {
        self.timestamps.is_some()
    }

    /// Time coordinate of the sample at zero-based position `i`.
    pub fn time(&self, i: usize) -> S {
        match &self.timestamps {
            Some(ts) => ts[i].clone(),
            None => S::from_index(i + 1),
        }
    }

    pub fn timestamps(&self) -> Vec<S> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// The samples at `positions` (zero-based, increasing), keeping their time coordinates.
    pub fn subsequence(&self, positions: &[usize]) -> Self {
        Self {
            values: positions.iter().map(|&i| self.values[i].clone()).collect(),
            timestamps: Some(positions.iter().map(|&i| self.time(i)).collect()),
        }
    }

    /// Largest absolute sample value; zero for an empty series.
    pub fn magnitude(&self) -> S {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(S::zero(), |acc, v| if v > acc { v } else { acc })
    }
}

impl SampleSeries<f64> {
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

/// Binary split decision per sample; `true` is label 1.
///
/// A sequence and its complement describe the same split.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSequence {
    labels: Vec<bool>,
}

impl LabelSequence {
    pub fn new(labels: Vec<bool>) -> Self {
        Self { labels }
    }

    /// Builds from `0`/`1` digits; any nonzero digit is label 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn ones(len: usize) -> Self {
        Self::new(vec![true; len])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> bool {
        self.labels[i]
    }

    pub fn bits(&self) -> Vec<u8> {
        self.labels.iter().map(|&l| u8::from(l)).collect()
    }

    pub fn complement(&self) -> Self {
        Self::new(self.labels.iter().map(|l| !l).collect())
    }

    /// Representative with the first label set to 1.
    pub fn canonical(&self) -> Self {
        match self.labels.first() {
            Some(false) => self.complement(),
            _ => self.clone(),
        }
    }

    /// Whether both sequences induce the same partition of the samples.
    pub fn same_split(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Zero-based positions carrying `label`.
    pub fn positions(&self, label: bool) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect()
    }

    pub fn count(&self, label: bool) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}
