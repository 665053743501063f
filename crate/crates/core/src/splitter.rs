// SPDX-License-Identifier: MIT OR Apache-2.0

//! Streaming optimal splitter.
//!
//! On arrival of `x_{t+1}` the splitter finalizes `M_t`, the normalized loss
//! of the best prefix labeling in which `x_{t+1}` is labeled differently from
//! `x_t`:
//!
//! ```text
//! M_t = min( −|x_{t+1} − x_t| ,  min_τ M_τ − |x_{t+1} − x_t| + |x_{t+1} − x_τ| )
//! ```
//!
//! where `τ` ranges over the active classes. Afterwards every class whose
//! anchor lies in the closed interval spanned by `x_t` and `x_{t+1}` is
//! dropped and the class `(t, M_t, x_t)` is inserted. Losses are normalized by
//! the running variation `C_t = Σ|x_k − x_{k−1}|`, so the loss of class `τ`
//! never changes after it is created.

use crate::active::{ActiveClassSet, ClassState};
use crate::backtrack::{labels_from_chain, BackPointerTable};
use crate::drift::{total_drift, variation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LabelSequence, SampleSeries};

/// What a single step produced.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<S> {
    /// The switch index `t` that was just finalized.
    pub tau: usize,
    pub m_value: S,
    /// The minimizing predecessor `τ_t`.
    pub pointer: usize,
}

#[derive(Debug, Clone)]
pub struct Splitter<S> {
    active: ActiveClassSet<S>,
    pointers: BackPointerTable,
    survivor_counts: Vec<usize>,
    last: Option<S>,
    seen: usize,
}

impl<S: Scalar> Default for Splitter<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Splitter<S> {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(len: usize) -> Self {
        let steps = len.saturating_sub(1);
        Self {
            active: ActiveClassSet::new(),
            pointers: BackPointerTable::with_capacity(steps),
            survivor_counts: Vec::with_capacity(steps),
            last: None,
            seen: 0,
        }
    }

    pub fn active(&self) -> &ActiveClassSet<S> {
        &self.active
    }

    pub fn samples_seen(&self) -> usize {
        self.seen
    }

    pub fn push(&mut self, x: S) -> Result<Option<StepOutcome<S>>> {
        self.push_observed(x, |_| {})
    }

    /// Like [`push`](Self::push), reporting each class removed by the interval rule.
    pub fn push_observed<F>(&mut self, x: S, on_removed: F) -> Result<Option<StepOutcome<S>>>
    where
        F: FnMut(&ClassState<S>),
    {
        if !x.is_finite_value() {
            return Err(Error::NonFinite { index: self.seen });
        }
        self.seen += 1;
        let Some(prev) = self.last.replace(x.clone()) else {
            return Ok(None);
        };
        let t = self.seen - 1;
        let step = (x.clone() - prev.clone()).abs();

        // Base class contributes 0 before the shared −|Δ| shift.
        let mut best = S::zero();
        let mut best_tau = 0;
        for c in self.active.iter() {
            let v = c.m_value.clone() + (x.clone() - c.anchor.clone()).abs();
            if v < best || (v == best && c.tau > best_tau) {
                best = v;
                best_tau = c.tau;
            }
        }
        let m_value = best - step;

        self.active.eliminate_by_step(&prev, &x, on_removed);
        let inserted = self.active.insert(ClassState {
            tau: t,
            m_value: m_value.clone(),
            anchor: prev,
        });
        if !inserted {
            return Err(Error::Invariant(format!(
                "anchor of new class {t} already active"
            )));
        }
        self.pointers.push(best_tau);
        self.survivor_counts.push(self.active.len());

        Ok(Some(StepOutcome {
            tau: t,
            m_value,
            pointer: best_tau,
        }))
    }

    /// Selects `τ*` over the base class and the active classes (ties to the larger τ).
    pub fn final_choice(&self) -> (usize, S) {
        let mut best = S::zero();
        let mut best_tau = 0;
        for c in self.active.iter() {
            if c.m_value < best || (c.m_value == best && c.tau > best_tau) {
                best = c.m_value.clone();
                best_tau = c.tau;
            }
        }
        (best_tau, best)
    }

    /// Backtracks and assembles the result; `series` must be the samples that were pushed.
    pub fn into_result(self, series: &SampleSeries<S>) -> Result<SplitResult<S>> {
        if series.len() != self.seen {
            return Err(Error::LengthMismatch {
                expected: self.seen,
                found: series.len(),
            });
        }
        if self.seen == 0 {
            return Err(Error::EmptySeries);
        }
        let (final_tau, final_m) = self.final_choice();
        let pointer_trace = self.pointers.chain(final_tau)?;
        let labels = labels_from_chain(&pointer_trace, self.seen);
        let total_drift = total_drift(series, &labels)?;
        let survivors = self.active.taus();
        Ok(SplitResult {
            labels,
            total_drift,
            final_tau,
            final_m,
            survivor_counts: self.survivor_counts,
            pointer_trace,
            pointers: self.pointers,
            survivors,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult<S> {
    pub labels: LabelSequence,
    /// Objective recomputed from `labels`.
    pub total_drift: S,
    /// `τ*`; zero means no switch at all.
    pub final_tau: usize,
    /// `M_{τ*}`; `C_T + M_{τ*}` equals `total_drift`.
    pub final_m: S,
    /// Active-class count after each step `t = 1..T−1` (base class excluded).
    pub survivor_counts: Vec<usize>,
    /// `τ*, τ_{τ*}, ..., 0`.
    pub pointer_trace: Vec<usize>,
    pub pointers: BackPointerTable,
    /// Switch indices still active after the last sample, ascending.
    pub survivors: Vec<usize>,
}

impl<S: Scalar> SplitResult<S> {
    pub fn final_survivors(&self) -> usize {
        self.survivors.len()
    }

    /// `C_T + M_{τ*}` for the given series.
    pub fn normalized_total(&self, series: &SampleSeries<S>) -> S {
        variation(series.values()) + self.final_m.clone()
    }
}

/// Minimum-drift split of `series` with interval-rule trimming.
pub fn trimmed_split<S: Scalar>(series: &SampleSeries<S>) -> Result<SplitResult<S>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut splitter = Splitter::with_capacity(series.len());
    for x in series.values() {
        splitter.push(x.clone())?;
    }
    splitter.into_result(series)
}

/// Switch indices still active once the whole series has been processed.
pub fn survivor_set<S: Scalar>(series: &SampleSeries<S>) -> Result<Vec<usize>> {
    let mut splitter = Splitter::with_capacity(series.len());
    for x in series.values() {
        splitter.push(x.clone())?;
    }
    Ok(splitter.active().taus())
}
