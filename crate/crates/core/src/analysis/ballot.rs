// SPDX-License-Identifier: MIT OR Apache-2.0

//! Conditional survival of switch points in `±1` walks.
//!
//! Given the displacement `k = |x_T − x_t|` over `a = T − t` steps, the walk
//! stays strictly on one side of `x_t` with probability `k / a`, which is
//! exactly the chance that switch `t` is still active at the end.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{derive_seed, generate, Process};
use crate::splitter::survivor_set;

#[derive(Debug, Clone, PartialEq)]
pub struct BallotConfig {
    pub ages: Vec<usize>,
    /// Bins with fewer trials are reported but not judged.
    pub min_count: u64,
    /// Width of the score interval in standard deviations.
    pub sigmas: f64,
}

impl Default for BallotConfig {
    fn default() -> Self {
        Self {
            ages: vec![3, 7, 15, 31],
            min_count: 30,
            sigmas: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallotBin {
    pub age: usize,
    pub displacement: usize,
    pub trials: u64,
    pub survived: u64,
    /// `displacement / age`.
    pub expected: f64,
    /// Wilson score interval around the observed frequency.
    pub interval: (f64, f64),
    /// `None` when the bin is too small to judge.
    pub pass: Option<bool>,
}

impl BallotBin {
    pub fn frequency(&self) -> f64 {
        self.survived as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallotReport {
    pub len: usize,
    pub trials: usize,
    pub bins: Vec<BallotBin>,
    pub pass: bool,
}

impl BallotReport {
    pub fn judged(&self) -> usize {
        self.bins.iter().filter(|b| b.pass.is_some()).count()
    }
}

fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let f = hits as f64 / n;
    let z2 = z * z;
    let centre = (f + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn ballot_check(
    trials: usize,
    len: usize,
    seed: u64,
    config: &BallotConfig,
) -> Result<BallotReport> {
    if len < 8 {
        return Err(Error::InvalidParameter(format!(
            "ballot check needs T ≥ 8, got {len}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial is required".into(),
        ));
    }
    if let Some(&a) = config.ages.iter().find(|&&a| a == 0 || a >= len) {
        return Err(Error::InvalidParameter(format!("age {a} outside 1..{len}")));
    }
    let observations = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let series = generate(&Process::SimpleWalk.spec(len, derive_seed(seed, len, trial)))?;
            let survivors = survivor_set(&series)?;
            let x = series.values();
            let last = x[len - 1];
            Ok(config
                .ages
                .iter()
                .map(|&age| {
                    let t = len - age;
                    let k = (last - x[t - 1]).abs() as usize;
                    (age, k, survivors.binary_search(&t).is_ok())
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tally: BTreeMap<(usize, usize), (u64, u64)> = BTreeMap::new();
    for (age, k, hit) in observations.into_iter().flatten() {
        let e = tally.entry((age, k)).or_default();
        e.0 += 1;
        e.1 += u64::from(hit);
    }
    let bins: Vec<BallotBin> = tally
        .into_iter()
        .map(|((age, k), (n, hits))| {
            let expected = k as f64 / age as f64;
            let interval = wilson(hits, n, config.sigmas);
            let pass = if expected == 0.0 || expected == 1.0 {
                // degenerate bins are exact at any count
                Some(hits as f64 == expected * n as f64)
            } else if n >= config.min_count {
                Some(interval.0 <= expected && expected <= interval.1)
            } else {
                None
            };
            BallotBin {
                age,
                displacement: k,
                trials: n,
                survived: hits,
                expected,
                interval,
                pass,
            }
        })
        .collect();
    let pass = bins.iter().all(|b| b.pass != Some(false));
    Ok(BallotReport {
        len,
        trials,
        bins,
        pass,
    })
}
