// SPDX-License-Identifier: MIT OR Apache-2.0

//! Slow exact solvers used as ground truth for the trimmed splitter.

use crate::active::ClassState;
use crate::backtrack::labels_from_chain;
use crate::drift::drift_of;
use crate::error::{Error, Result};
use crate::scalar::{approx_eq, Scalar};
use crate::series::{LabelSequence, SampleSeries};
use crate::splitter::Splitter;

pub const BRUTE_FORCE_MAX_LEN: usize = 24;
pub const QUADRATIC_MAX_LEN: usize = 10_000;
pub const AUDIT_MAX_LEN: usize = 1_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<S> {
    pub best_loss: S,
    /// Canonical minimizers (first label 1). Brute force lists all of them,
    /// the quadratic solver its backtracked one.
    pub optimal_labelings: Vec<LabelSequence>,
    /// Rows `L_{t,·}` for `t = 1..T`, when requested from the quadratic solver.
    pub table_snapshot: Option<Vec<Vec<S>>>,
}

/// Exhaustive minimum over all `2^(T−1)` canonical labelings.
pub fn brute_force_split<S: Scalar>(series: &SampleSeries<S>) -> Result<OracleResult<S>> {
    let len = series.len();
    if len == 0 {
        return Err(Error::EmptySeries);
    }
    if len > BRUTE_FORCE_MAX_LEN {
        return Err(Error::TooLong {
            len,
            max: BRUTE_FORCE_MAX_LEN,
        });
    }
    let values = series.values();
    let slack = S::slack(&series.magnitude());
    let labeling = |mask: u32| -> Vec<bool> {
        (0..len)
            .map(|i| i == 0 || mask & (1 << (i - 1)) == 0)
            .collect()
    };
    let masks = 0u32..(1u32 << (len - 1));
    let best_loss = masks
        .clone()
        .map(|m| drift_of(values, &labeling(m)))
        .reduce(|a, b| if b < a { b } else { a })
        .expect("at least one labeling");
    let optimal_labelings = masks
        .map(labeling)
        .filter(|l| drift_of(values, l) <= best_loss.clone() + slack.clone())
        .map(LabelSequence::new)
        .collect();
    Ok(OracleResult {
        best_loss,
        optimal_labelings,
        table_snapshot: None,
    })
}

/// Untrimmed `L_{t,τ}` table, advanced one sample at a time.
///
/// `L_{t,τ}` is the best loss over the first `t` samples among labelings whose
/// last label change sits at `τ` (`τ = 0`: no change).
#[derive(Debug, Clone)]
pub struct QuadraticTable<S> {
    row: Vec<S>,
    argmins: Vec<usize>,
    values: Vec<S>,
    snapshot: Option<Vec<Vec<S>>>,
}

impl<S: Scalar> QuadraticTable<S> {
    pub fn new(keep_snapshot: bool) -> Self {
        Self {
            row: Vec::new(),
            argmins: Vec::new(),
            values: Vec::new(),
            snapshot: keep_snapshot.then(Vec::new),
        }
    }

    /// Adds `x_{t+1}`; returns `L_{t+1,t}` once `t ≥ 1`.
    pub fn push(&mut self, x: S) -> Option<S> {
        let created = match self.values.last() {
            None => {
                self.row.push(S::zero());
                None
            }
            Some(prev) => {
                let t = self.values.len();
                let step = (x.clone() - prev.clone()).abs();
                let mut best = self.row[0].clone();
                let mut best_tau = 0;
                for tau in 1..t {
                    let v =
                        self.row[tau].clone() + (x.clone() - self.values[tau - 1].clone()).abs();
                    if v < best || (v == best && tau > best_tau) {
                        best = v;
                        best_tau = tau;
                    }
                }
                for l in self.row.iter_mut() {
                    *l = l.clone() + step.clone();
                }
                self.row.push(best.clone());
                self.argmins.push(best_tau);
                Some(best)
            }
        };
        self.values.push(x);
        if let Some(snap) = &mut self.snapshot {
            snap.push(self.row.clone());
        }
        created
    }

    /// Current row `L_{t,τ}`, `τ = 0..t−1`.
    pub fn row(&self) -> &[S] {
        &self.row
    }

    /// Accumulated variation `C_t`.
    pub fn variation(&self) -> S {
        self.row.first().cloned().unwrap_or_else(S::zero)
    }

    fn finish(self) -> OracleResult<S> {
        let mut best = self.row[0].clone();
        let mut best_tau = 0;
        for (tau, l) in self.row.iter().enumerate().skip(1) {
            if *l < best || (*l == best && tau > best_tau) {
                best = l.clone();
                best_tau = tau;
            }
        }
        let mut chain = vec![best_tau];
        let mut tau = best_tau;
        while tau != 0 {
            tau = self.argmins[tau - 1];
            chain.push(tau);
        }
        let labels = labels_from_chain(&chain, self.values.len()).canonical();
        OracleResult {
            best_loss: best,
            optimal_labelings: vec![labels],
            table_snapshot: self.snapshot,
        }
    }
}

/// `O(T²)` dynamic program over every switch class, without elimination.
pub fn quadratic_split<S: Scalar>(series: &SampleSeries<S>) -> Result<OracleResult<S>> {
    quadratic_split_with(series, false)
}

pub fn quadratic_split_with<S: Scalar>(
    series: &SampleSeries<S>,
    keep_table: bool,
) -> Result<OracleResult<S>> {
    let len = series.len();
    if len == 0 {
        return Err(Error::EmptySeries);
    }
    if len > QUADRATIC_MAX_LEN {
        return Err(Error::TooLong {
            len,
            max: QUADRATIC_MAX_LEN,
        });
    }
    let mut table = QuadraticTable::new(keep_table);
    for x in series.values() {
        table.push(x.clone());
    }
    Ok(table.finish())
}

/// Strict right-to-left records: samples above, or below, every later sample.
///
/// One-based indices `t < T`, ascending.
pub fn right_to_left_records<S: Scalar>(values: &[S]) -> Vec<usize> {
    let n = values.len();
    (0..n.saturating_sub(1))
        .filter(|&i| {
            let later = &values[i + 1..];
            later.iter().all(|v| *v < values[i]) || later.iter().all(|v| *v > values[i])
        })
        .map(|i| i + 1)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuditFailureKind {
    /// The trimmed and untrimmed recursions disagree on `M_t`.
    LossMismatch,
    /// An eliminated class is not dominated by any remaining class.
    UnsafeElimination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditFailure {
    pub step: usize,
    pub kind: AuditFailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub steps: usize,
    pub eliminations: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Relative tolerance of the lockstep comparison.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

/// Runs the untrimmed table and the trimmed splitter side by side.
///
/// At every step it checks that both produce the same `M_t`, and that each
/// class removed by the interval rule satisfies
/// `M_{τ₁} ≥ M_{τ₂} + |x_{τ₂} − x_{τ₁}|` for some class `τ₂` still active.
pub fn elimination_safety_audit<S: Scalar>(series: &SampleSeries<S>) -> Result<AuditReport> {
    let len = series.len();
    if len == 0 {
        return Err(Error::EmptySeries);
    }
    if len > AUDIT_MAX_LEN {
        return Err(Error::TooLong {
            len,
            max: AUDIT_MAX_LEN,
        });
    }
    let mut report = AuditReport::default();
    let mut table = QuadraticTable::new(false);
    let mut splitter = Splitter::with_capacity(len);
    let mut removed: Vec<ClassState<S>> = Vec::new();

    for x in series.values() {
        let untrimmed = table.push(x.clone());
        removed.clear();
        let step = splitter.push_observed(x.clone(), |c| removed.push(c.clone()))?;
        let (Some(l_new), Some(step)) = (untrimmed, step) else {
            continue;
        };
        report.steps += 1;
        let expected_m = l_new - table.variation();
        if !approx_eq(&step.m_value, &expected_m, AUDIT_TOLERANCE) {
            report.failures.push(AuditFailure {
                step: step.tau,
                kind: AuditFailureKind::LossMismatch,
                detail: format!(
                    "trimmed M_{} = {:?}, untrimmed {:?}",
                    step.tau, step.m_value, expected_m
                ),
            });
        }
        for gone in &removed {
            report.eliminations += 1;
            let dominated = splitter.active().iter().any(|keep| {
                let bound =
                    keep.m_value.clone() + (keep.anchor.clone() - gone.anchor.clone()).abs();
                gone.m_value >= bound || approx_eq(&gone.m_value, &bound, AUDIT_TOLERANCE)
            });
            if !dominated {
                report.failures.push(AuditFailure {
                    step: step.tau,
                    kind: AuditFailureKind::UnsafeElimination,
                    detail: format!(
                        "class {} (M = {:?}, anchor {:?}) has no dominating survivor",
                        gone.tau, gone.m_value, gone.anchor
                    ),
                });
            }
        }
    }
    Ok(report)
}
