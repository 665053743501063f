// SPDX-License-Identifier: MIT OR Apache-2.0

//! Upper and lower envelopes built from a labeling.
//!
//! Each subsequence is interpolated onto the full time grid and extended flat
//! beyond its first and last sample. Neither interpolation mode changes a
//! subsequence's drift.
//!
//! Exchanging the tails of the two subsequences at a crossing never increases
//! the objective, but it can leave it unchanged (nested value ranges), so a
//! minimum-drift labeling is not automatically crossing-free.
//! [`resolve_crossings`] performs those exchanges until none is left.

use serde::{Deserialize, Serialize};

use crate::drift::drift_of;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LabelSequence, SampleSeries};
use crate::splitter::{trimmed_split, SplitResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpMode {
    /// Piecewise constant: the most recent sample is held.
    Hold,
    /// Straight lines between neighbouring samples.
    Linear,
}

impl std::str::FromStr for InterpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hold" => Ok(Self::Hold),
            "linear" => Ok(Self::Linear),
            other => Err(Error::InvalidParameter(format!(
                "unknown interpolation mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePair<S> {
    pub timestamps: Vec<S>,
    pub upper: Vec<S>,
    /// `None` when every sample carries the same label.
    pub lower: Option<Vec<S>>,
    pub upper_defined: Vec<bool>,
    pub lower_defined: Vec<bool>,
    pub mode: InterpMode,
    /// Which label forms the upper envelope.
    pub upper_label: bool,
}

impl<S: Scalar> EnvelopePair<S> {
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn is_one_sided(&self) -> bool {
        self.lower.is_none()
    }
}

fn lerp<S: Scalar>(t: &S, t0: &S, v0: &S, t1: &S, v1: &S) -> S {
    v0.clone() + (v1.clone() - v0.clone()) * (t.clone() - t0.clone()) / (t1.clone() - t0.clone())
}

/// Interpolates the samples at `positions` onto the whole grid of `series`.
pub fn interpolate<S: Scalar>(
    series: &SampleSeries<S>,
    positions: &[usize],
    mode: InterpMode,
) -> Vec<S> {
    let x = series.values();
    let Some((&first, &last)) = positions.first().zip(positions.last()) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(series.len());
    let mut next = 0;
    for i in 0..series.len() {
        while next < positions.len() && positions[next] < i {
            next += 1;
        }
        let value = if i <= first {
            x[first].clone()
        } else if i >= last {
            x[last].clone()
        } else if positions[next] == i {
            x[i].clone()
        } else {
            let p = positions[next - 1];
            match mode {
                InterpMode::Hold => x[p].clone(),
                InterpMode::Linear => {
                    let n = positions[next];
                    lerp(
                        &series.time(i),
                        &series.time(p),
                        &x[p],
                        &series.time(n),
                        &x[n],
                    )
                }
            }
        };
        out.push(value);
    }
    out
}

fn mask(len: usize, positions: &[usize]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &p in positions {
        m[p] = true;
    }
    m
}

pub fn build_envelopes<S: Scalar>(
    series: &SampleSeries<S>,
    labels: &LabelSequence,
    mode: InterpMode,
) -> Result<EnvelopePair<S>> {
    if labels.len() != series.len() {
        return Err(Error::LengthMismatch {
            expected: series.len(),
            found: labels.len(),
        });
    }
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let ones = labels.positions(true);
    let zeros = labels.positions(false);
    let timestamps = series.timestamps();
    let len = series.len();

    if ones.is_empty() || zeros.is_empty() {
        let (label, pos) = if zeros.is_empty() {
            (true, ones)
        } else {
            (false, zeros)
        };
        return Ok(EnvelopePair {
            timestamps,
            upper: interpolate(series, &pos, mode),
            lower: None,
            upper_defined: mask(len, &pos),
            lower_defined: vec![false; len],
            mode,
            upper_label: label,
        });
    }

    let env_one = interpolate(series, &ones, mode);
    let env_zero = interpolate(series, &zeros, mode);
    let slack = S::slack(&series.magnitude());
    let start = ones[0].max(zeros[0]);
    let mut upper_label = true;
    for k in start..len {
        let d = env_one[k].clone() - env_zero[k].clone();
        if d > slack {
            break;
        }
        if d < -slack.clone() {
            upper_label = false;
            break;
        }
    }
    let (upper, lower, up_pos, low_pos) = if upper_label {
        (env_one, env_zero, ones, zeros)
    } else {
        (env_zero, env_one, zeros, ones)
    };
    Ok(EnvelopePair {
        timestamps,
        upper,
        lower: Some(lower),
        upper_defined: mask(len, &up_pos),
        lower_defined: mask(len, &low_pos),
        mode,
        upper_label,
    })
}

/// `true` iff the upper envelope never drops below the lower one.
///
/// Both envelopes are affine (linear mode) or constant (hold mode) between
/// neighbouring grid points, so checking the grid points covers every
/// interior segment. Touching is allowed. A one-sided pair is trivially
/// non-crossing.
pub fn check_non_crossing<S: Scalar>(pair: &EnvelopePair<S>) -> bool {
    let Some(lower) = &pair.lower else {
        return true;
    };
    let scale = pair
        .upper
        .iter()
        .chain(lower.iter())
        .map(|v| v.abs())
        .fold(S::zero(), |acc, v| if v > acc { v } else { acc });
    let slack = S::slack(&scale);
    let diff = |k: usize| pair.upper[k].clone() - lower[k].clone();
    (0..pair.len()).all(|k| diff(k) >= -slack.clone())
        && (1..pair.len()).all(|k| {
            let (a, b) = (diff(k - 1), diff(k));
            !(a > slack && b < -slack.clone())
        })
}

/// Fenwick tree over label-change positions.
///
/// Position `k ≥ 1` is a boundary when `label(k) != label(k − 1)`; flipping
/// every label from `k` onwards toggles exactly that boundary.
struct Boundaries {
    first: bool,
    tree: Vec<u32>,
    marks: Vec<bool>,
    total: usize,
    top_bit: usize,
}

impl Boundaries {
    fn new(labels: &[bool]) -> Self {
        let n = labels.len();
        let mut b = Self {
            first: labels.first().copied().unwrap_or(true),
            tree: vec![0; n + 1],
            marks: vec![false; n],
            total: 0,
            top_bit: if n == 0 {
                0
            } else {
                1 << (usize::BITS - 1 - n.leading_zeros())
            },
        };
        for k in 1..n {
            if labels[k] != labels[k - 1] {
                b.toggle(k);
            }
        }
        b
    }

    fn add(&mut self, k: usize, delta: i32) {
        let mut i = k + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    /// Number of boundaries at positions `≤ k`.
    fn rank(&self, k: usize) -> usize {
        let mut i = k + 1;
        let mut sum = 0usize;
        while i > 0 {
            sum += self.tree[i] as usize;
            i -= i & i.wrapping_neg();
        }
        sum
    }

    /// Position of the `r`-th boundary (one-based `r`).
    fn select(&self, r: usize) -> usize {
        let mut pos = 0;
        let mut remaining = r;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && (self.tree[next] as usize) < remaining {
                pos = next;
                remaining -= self.tree[next] as usize;
            }
            step >>= 1;
        }
        pos
    }

    fn toggle(&mut self, k: usize) {
        if self.marks[k] {
            self.marks[k] = false;
            self.total -= 1;
            self.add(k, -1);
        } else {
            self.marks[k] = true;
            self.total += 1;
            self.add(k, 1);
        }
    }

    fn label(&self, k: usize) -> bool {
        self.first ^ (self.rank(k) % 2 == 1)
    }

    fn prev_with(&self, label: bool, k: usize) -> Option<usize> {
        if self.label(k) == label {
            return Some(k);
        }
        let r = self.rank(k);
        (r > 0).then(|| self.select(r) - 1)
    }

    fn next_with(&self, label: bool, k: usize) -> Option<usize> {
        if self.label(k) == label {
            return Some(k);
        }
        let r = self.rank(k);
        (r < self.total).then(|| self.select(r + 1))
    }

    fn labels(&self, n: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(n);
        let mut cur = self.first;
        for k in 0..n {
            if self.marks[k] {
                cur = !cur;
            }
            out.push(cur);
        }
        out
    }
}

struct Resolver<'a, S> {
    series: &'a SampleSeries<S>,
    mode: InterpMode,
    bounds: Boundaries,
}

impl<S: Scalar> Resolver<'_, S> {
    fn x(&self, i: usize) -> &S {
        &self.series.values()[i]
    }

    fn value(&self, label: bool, k: usize) -> Option<S> {
        let p = self.bounds.prev_with(label, k);
        let n = self.bounds.next_with(label, k);
        match (p, n) {
            (Some(p), Some(n)) if p == n || self.mode == InterpMode::Hold => {
                Some(self.x(p).clone())
            }
            (Some(p), Some(n)) => Some(lerp(
                &self.series.time(k),
                &self.series.time(p),
                self.x(p),
                &self.series.time(n),
                self.x(n),
            )),
            (Some(i), None) | (None, Some(i)) => Some(self.x(i).clone()),
            (None, None) => None,
        }
    }

    fn sign(&self, k: usize, slack: &S) -> i8 {
        match (self.value(true, k), self.value(false, k)) {
            (Some(a), Some(b)) => {
                let d = a - b;
                if d > *slack {
                    1
                } else if d < -slack.clone() {
                    -1
                } else {
                    0
                }
            }
            _ => 0,
        }
    }

    fn link(&self, a: Option<usize>, b: Option<usize>) -> S {
        match (a, b) {
            (Some(a), Some(b)) => (self.x(a).clone() - self.x(b).clone()).abs(),
            _ => S::zero(),
        }
    }

    /// Objective change from flipping every label at positions `≥ s`.
    fn exchange_delta(&self, s: usize) -> S {
        let p1 = self.bounds.prev_with(true, s - 1);
        let p0 = self.bounds.prev_with(false, s - 1);
        let n1 = self.bounds.next_with(true, s);
        let n0 = self.bounds.next_with(false, s);
        self.link(p1, n0) + self.link(p0, n1) - self.link(p1, n1) - self.link(p0, n0)
    }

    /// First grid point whose envelope values may change when flipping from `s`.
    fn restart_point(&self, s: usize) -> usize {
        match (
            self.bounds.prev_with(true, s - 1),
            self.bounds.prev_with(false, s - 1),
        ) {
            (Some(a), Some(b)) => a.min(b),
            _ => 0,
        }
    }
}

/// Removes envelope crossings without increasing the objective.
///
/// Scans the grid left to right; at the first sign change of
/// `env_1 − env_0` the labels of a suffix are flipped, choosing the flip
/// point inside the crossing gap that lowers the objective most, and the
/// scan resumes where the envelopes changed.
pub fn resolve_crossings<S: Scalar>(
    series: &SampleSeries<S>,
    labels: &LabelSequence,
    mode: InterpMode,
) -> Result<LabelSequence> {
    let n = series.len();
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    if labels.count(true) == 0 || labels.count(false) == 0 {
        return Ok(labels.clone());
    }
    let slack = S::slack(&series.magnitude());
    let mut r = Resolver {
        series,
        mode,
        bounds: Boundaries::new(labels.as_slice()),
    };
    let limit = 8 * n + 64;
    let mut exchanges = 0usize;
    // nonzero-sign grid points since the scan start; all share `sign`
    let mut nonzero: Vec<usize> = Vec::new();
    let mut sign = 0i8;
    let mut k = 0;
    while k < n {
        let sg = r.sign(k, &slack);
        if sg == 0 {
            k += 1;
            continue;
        }
        if nonzero.is_empty() || sg == sign {
            sign = sg;
            nonzero.push(k);
            k += 1;
            continue;
        }
        let i = *nonzero.last().expect("non-empty");
        let mut best: Option<(usize, S)> = None;
        for s in i + 1..=k {
            let delta = r.exchange_delta(s);
            if best.as_ref().is_none_or(|(_, d)| delta < *d) {
                best = Some((s, delta));
            }
        }
        let (s, delta) = best.expect("gap is non-empty");
        if delta > slack {
            return Err(Error::Invariant(format!(
                "no objective-preserving exchange for crossing between grid points {i} and {k}"
            )));
        }
        let restart = r.restart_point(s);
        r.bounds.toggle(s);
        exchanges += 1;
        if exchanges > limit {
            return Err(Error::Invariant(format!(
                "crossing resolution did not settle after {limit} exchanges"
            )));
        }
        let keep = nonzero.partition_point(|&j| j < restart);
        nonzero.truncate(keep);
        k = restart;
    }
    Ok(LabelSequence::new(r.bounds.labels(n)))
}

/// A split together with its crossing-free envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSplit<S> {
    pub split: SplitResult<S>,
    /// Labels behind `envelopes`; same objective as `split.labels`.
    pub labels: LabelSequence,
    pub envelopes: EnvelopePair<S>,
    pub total_drift: S,
}

/// Optimal split, crossing resolution and envelope construction in one call.
pub fn extract_envelopes<S: Scalar>(
    series: &SampleSeries<S>,
    mode: InterpMode,
) -> Result<EnvelopeSplit<S>> {
    let split = trimmed_split(series)?;
    let labels = resolve_crossings(series, &split.labels, mode)?;
    let envelopes = build_envelopes(series, &labels, mode)?;
    let total_drift = drift_of(series.values(), labels.as_slice());
    Ok(EnvelopeSplit {
        split,
        labels,
        envelopes,
        total_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::{total_drift, variation};

    fn series(values: &[f64]) -> SampleSeries<f64> {
        SampleSeries::from_f64(values).unwrap()
    }

    #[test]
    fn linear_three_sample_pair() {
        let s = series(&[0.0, 2.0, 1.0]);
        let pair = build_envelopes(
            &s,
            &LabelSequence::from_bits(&[1, 0, 1]),
            InterpMode::Linear,
        )
        .unwrap();
        assert_eq!(pair.lower.as_deref(), Some(&[0.0, 0.5, 1.0][..]));
        assert_eq!(pair.upper, vec![2.0, 2.0, 2.0]);
        assert!(!pair.upper_label);
        assert_eq!(pair.upper_defined, vec![false, true, false]);
        assert_eq!(pair.lower_defined, vec![true, false, true]);
        assert!(check_non_crossing(&pair));
    }

    #[test]
    fn uniform_labels_give_one_sided_pair() {
        let s = series(&[3.0, 1.0, 4.0]);
        let pair = build_envelopes(&s, &LabelSequence::ones(3), InterpMode::Linear).unwrap();
        assert_eq!(pair.upper, vec![3.0, 1.0, 4.0]);
        assert!(pair.is_one_sided());
        assert!(check_non_crossing(&pair));
    }

    #[test]
    fn hold_mode_edge_extension() {
        let s = series(&[0.0, 1.0, 0.0, 1.0]);
        let pair = build_envelopes(
            &s,
            &LabelSequence::from_bits(&[1, 0, 1, 0]),
            InterpMode::Hold,
        )
        .unwrap();
        assert_eq!(pair.upper, vec![1.0; 4]);
        assert_eq!(pair.lower.as_deref(), Some(&[0.0; 4][..]));
    }

    #[test]
    fn inverted_pair_fails_check() {
        let pair = EnvelopePair {
            timestamps: vec![1.0, 2.0, 3.0],
            upper: vec![0.0, 0.5, 1.0],
            lower: Some(vec![2.0, 2.0, 2.0]),
            upper_defined: vec![true, false, true],
            lower_defined: vec![false, true, false],
            mode: InterpMode::Linear,
            upper_label: true,
        };
        assert!(!check_non_crossing(&pair));
    }

    #[test]
    fn linear_interpolation_uses_timestamps() {
        let s = SampleSeries::with_timestamps(vec![0.0, 5.0, 4.0], vec![0.0, 1.0, 4.0]).unwrap();
        let env = interpolate(&s, &[0, 2], InterpMode::Linear);
        assert_eq!(env, vec![0.0, 1.0, 4.0]);
    }

    #[test]
    fn interpolation_keeps_drift() {
        let s = series(&[0.3, 0.9, 0.1, 0.5, 0.7, 0.2]);
        let pos = [1, 2, 4];
        for mode in [InterpMode::Hold, InterpMode::Linear] {
            let env = interpolate(&s, &pos, mode);
            let direct = variation(&[0.9, 0.1, 0.7]);
            assert!((variation(&env) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn nested_ranges_cross_but_resolve() {
        // 9:b 0.316 10:a 0.018 11:b 0.328 12:a 0.95 — the a-segment spans the b-segment's range
        let s = series(&[0.316, 0.018, 0.328, 0.95]);
        let crossing = LabelSequence::from_bits(&[0, 1, 0, 1]);
        let pair = build_envelopes(&s, &crossing, InterpMode::Linear).unwrap();
        assert!(!check_non_crossing(&pair));

        let fixed = resolve_crossings(&s, &crossing, InterpMode::Linear).unwrap();
        let pair = build_envelopes(&s, &fixed, InterpMode::Linear).unwrap();
        assert!(check_non_crossing(&pair));
        let before = total_drift(&s, &crossing).unwrap();
        let after = total_drift(&s, &fixed).unwrap();
        assert!(after <= before + 1e-12);
    }

    #[test]
    fn boundaries_navigation() {
        let labels = [true, true, false, false, true, false];
        let mut b = Boundaries::new(&labels);
        assert_eq!(b.labels(6), labels.to_vec());
        assert_eq!(b.prev_with(true, 3), Some(1));
        assert_eq!(b.next_with(true, 2), Some(4));
        assert_eq!(b.next_with(true, 5), None);
        assert_eq!(b.prev_with(false, 1), None);
        b.toggle(4);
        assert_eq!(b.labels(6), vec![true, true, false, false, false, true]);
        assert_eq!(b.next_with(true, 2), Some(5));
    }

    #[test]
    fn extract_on_three_samples() {
        let s = series(&[0.0, 2.0, 1.0]);
        let out = extract_envelopes(&s, InterpMode::Linear).unwrap();
        assert_eq!(out.labels.bits(), vec![1, 0, 1]);
        assert_eq!(out.total_drift, 1.0);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("hold".parse::<InterpMode>().unwrap(), InterpMode::Hold);
        assert!("cubic".parse::<InterpMode>().is_err());
    }
}
