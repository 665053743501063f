// SPDX-License-Identifier: MIT OR Apache-2.0

use std::str::FromStr;

use crate::analysis::census::SurvivorStats;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthLaw {
    /// Mean survivors track `Σ_{τ=1}^{T−1} 2/(τ+1)`.
    Log,
    /// Mean survivors grow like `√T`.
    Sqrt,
    /// Mean survivors stay bounded.
    Constant,
}

impl FromStr for GrowthLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Self::Log),
            "sqrt" => Ok(Self::Sqrt),
            "constant" => Ok(Self::Constant),
            other => Err(Error::InvalidParameter(format!(
                "unknown growth law {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthTolerances {
    /// Allowed relative deviation from the log-law reference at every size.
    pub log_relative: f64,
    /// Window for `mean(4T) / mean(T)`; rescaled by `√(ratio / 4)` for other spans.
    pub sqrt_window: (f64, f64),
    /// Allowed relative deviation of the largest size's mean from the smallest's.
    pub constant_relative: f64,
}

impl Default for GrowthTolerances {
    fn default() -> Self {
        Self {
            log_relative: 0.15,
            sqrt_window: (1.7, 2.3),
            constant_relative: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub len: usize,
    pub mean: f64,
    pub std_error: f64,
    /// Law-specific reference at this size.
    pub reference: f64,
    /// `mean / reference`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub law: GrowthLaw,
    /// Mean-to-reference ratio at the largest size.
    pub coefficient: f64,
    pub rows: Vec<GrowthRow>,
    /// The statistic compared against the acceptance window.
    pub statistic: f64,
    pub window: (f64, f64),
    pub pass: bool,
}

/// `2(H_T − 1)`, summed directly.
pub fn log_law_reference(len: usize) -> f64 {
    (1..len).map(|tau| 2.0 / (tau as f64 + 1.0)).sum()
}

pub fn growth_fit(
    stats: &SurvivorStats,
    law: GrowthLaw,
    tol: &GrowthTolerances,
) -> Result<GrowthReport> {
    let sizes: Vec<usize> = stats.sizes.keys().copied().collect();
    let (smallest, largest) = match (sizes.first(), sizes.last()) {
        (Some(&a), Some(&b)) if sizes.len() >= 3 && b >= 4 * a => (a, b),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "growth fit needs at least 3 sizes spanning a factor of 4, got {sizes:?}"
            )))
        }
    };
    let reference = |len: usize| match law {
        GrowthLaw::Log => log_law_reference(len),
        GrowthLaw::Sqrt => (len as f64).sqrt(),
        GrowthLaw::Constant => 1.0,
    };
    let rows: Vec<GrowthRow> = stats
        .sizes
        .values()
        .map(|s| {
            let r = reference(s.len);
            GrowthRow {
                len: s.len,
                mean: s.mean,
                std_error: s.std_error,
                reference: r,
                ratio: s.mean / r,
            }
        })
        .collect();
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    debug_assert_eq!((first.len, last.len), (smallest, largest));

    let (statistic, window, pass) = match law {
        GrowthLaw::Log => {
            let worst = rows.iter().map(|r| r.ratio - 1.0).fold(0.0f64, |acc, d| {
                if d.abs() > acc.abs() {
                    d
                } else {
                    acc
                }
            });
            let w = (-tol.log_relative, tol.log_relative);
            (
                worst,
                w,
                rows.iter()
                    .all(|r| (r.ratio - 1.0).abs() <= tol.log_relative),
            )
        }
        GrowthLaw::Sqrt => {
            let scale = (largest as f64 / smallest as f64).sqrt() / 2.0;
            let w = (tol.sqrt_window.0 * scale, tol.sqrt_window.1 * scale);
            let ratio = last.mean / first.mean;
            (ratio, w, ratio >= w.0 && ratio <= w.1)
        }
        GrowthLaw::Constant => {
            let ratio = last.mean / first.mean;
            let w = (1.0 - tol.constant_relative, 1.0 + tol.constant_relative);
            (ratio, w, ratio >= w.0 && ratio <= w.1)
        }
    };
    Ok(GrowthReport {
        law,
        coefficient: last.ratio,
        statistic,
        window,
        pass: pass && statistic.is_finite(),
        rows,
    })
}
