// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{derive_seed, generate, Process};
use crate::splitter::trimmed_split;

/// One trial of a benchmark run, serialized as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub process: String,
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "T")]
    pub len: usize,
    pub trial: usize,
    pub seed: u64,
    pub final_survivors: usize,
    /// Wall-clock time of the split; `null` unless timing was requested.
    pub runtime_ns: Option<u64>,
}

/// Writes one JSON object per line.
pub fn write_jsonl<W: Write>(mut out: W, records: &[BenchRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn to_jsonl(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_jsonl(&mut buf, records).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Empirical frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn value(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.hits as f64 / self.trials as f64
    }

    /// Standard error of a binomial proportion with true rate `p`.
    pub fn std_error_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeStats {
    pub len: usize,
    pub trials: usize,
    pub mean: f64,
    /// Sample variance (`n − 1` denominator; zero for a single trial).
    pub variance: f64,
    pub std_error: f64,
    /// `age_hits[a − 1]`: trials in which switch `T − a` survived, for `a = 1..T−1`.
    pub age_hits: Vec<u64>,
}

impl SizeStats {
    pub fn age_frequency(&self, age: usize) -> Option<Frequency> {
        let hits = *self.age_hits.get(age.checked_sub(1)?)?;
        Some(Frequency {
            hits,
            trials: self.trials as u64,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivorStats {
    pub process: Process,
    pub seed: u64,
    pub sizes: BTreeMap<usize, SizeStats>,
    /// Per-trial records, ordered by size then trial.
    pub records: Vec<BenchRecord>,
}

impl SurvivorStats {
    pub fn age_frequency(&self, len: usize, age: usize) -> Option<Frequency> {
        self.sizes.get(&len)?.age_frequency(age)
    }

    pub fn mean(&self, len: usize) -> Option<(f64, f64)> {
        self.sizes.get(&len).map(|s| (s.mean, s.std_error))
    }
}

struct Trial {
    survivors: Vec<usize>,
    runtime_ns: Option<u64>,
    seed: u64,
}

/// Runs `trials` independent splits per size and aggregates survivor counts.
///
/// Trial seeds are derived from `seed`, the size and the trial index, so
/// results do not depend on scheduling; trials run in parallel.
pub fn survivor_census(
    process: Process,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    timing: bool,
) -> Result<SurvivorStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial is required".into(),
        ));
    }
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidParameter(
            "sizes must be non-empty and positive".into(),
        ));
    }
    process.validate()?;
    let name = process.name().to_string();
    let params: BTreeMap<String, f64> = process
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();

    let mut stats = BTreeMap::new();
    let mut records = Vec::with_capacity(sizes.len() * trials);
    for &len in sizes {
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let seed = derive_seed(seed, len, trial);
                let series = generate(&process.spec(len, seed))?;
                let start = timing.then(Instant::now);
                let split = trimmed_split(&series)?;
                let runtime_ns = start.map(|s| s.elapsed().as_nanos() as u64);
                Ok(Trial {
                    survivors: split.survivors,
                    runtime_ns,
                    seed,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut age_hits = vec![0u64; len.saturating_sub(1)];
        let counts: Vec<f64> = outcomes.iter().map(|o| o.survivors.len() as f64).collect();
        for (trial, o) in outcomes.iter().enumerate() {
            for &tau in &o.survivors {
                age_hits[len - tau - 1] += 1;
            }
            records.push(BenchRecord {
                process: name.clone(),
                params: params.clone(),
                len,
                trial,
                seed: o.seed,
                final_survivors: o.survivors.len(),
                runtime_ns: o.runtime_ns,
            });
        }
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let variance = if counts.len() > 1 {
            counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        stats.insert(
            len,
            SizeStats {
                len,
                trials,
                mean,
                variance,
                std_error: (variance / n).sqrt(),
                age_hits,
            },
        );
    }
    Ok(SurvivorStats {
        process,
        seed,
        sizes: stats,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_switch_always_survives() {
        let stats = survivor_census(Process::UniformIid, &[50], 200, 1, false).unwrap();
        let f = stats.age_frequency(50, 1).unwrap();
        assert_eq!((f.hits, f.trials), (200, 200));
        assert!(stats.age_frequency(50, 50).is_none());
        assert!(stats.age_frequency(50, 0).is_none());
    }

    #[test]
    fn counts_match_records() {
        let stats = survivor_census(Process::SimpleWalk, &[40, 80], 30, 9, false).unwrap();
        assert_eq!(stats.records.len(), 60);
        for (len, s) in &stats.sizes {
            let total: u64 = s.age_hits.iter().sum();
            let from_records: usize = stats
                .records
                .iter()
                .filter(|r| r.len == *len)
                .map(|r| r.final_survivors)
                .sum();
            assert_eq!(total as usize, from_records);
            assert!((s.mean - from_records as f64 / 30.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_runs_are_reproducible() {
        let a = survivor_census(Process::UniformIid, &[100], 64, 5, false).unwrap();
        let b = survivor_census(Process::UniformIid, &[100], 64, 5, false).unwrap();
        assert_eq!(to_jsonl(&a.records), to_jsonl(&b.records));
    }

    #[test]
    fn jsonl_schema() {
        let stats = survivor_census(
            Process::RecordRenewal { p: 0.1, q: 0.2 },
            &[10],
            1,
            3,
            false,
        )
        .unwrap();
        let line = to_jsonl(&stats.records);
        let v: serde_json::Value = serde_json::from_str(line.trim_end()).unwrap();
        for key in [
            "process",
            "params",
            "T",
            "trial",
            "seed",
            "final_survivors",
            "runtime_ns",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["process"], "records");
        assert_eq!(v["params"]["q"], 0.2);
        assert!(v["runtime_ns"].is_null());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(survivor_census(Process::UniformIid, &[10], 0, 1, false).is_err());
        assert!(survivor_census(Process::UniformIid, &[], 5, 1, false).is_err());
        assert!(survivor_census(Process::UniformIid, &[0], 5, 1, false).is_err());
    }
}
