// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded synthetic processes.
//!
//! Every generator is a pure function of its [`ProcessSpec`]: the same spec,
//! seed included, yields the same series bit for bit on every platform.

mod quantile;
mod rng;

use std::collections::BTreeMap;

pub use quantile::{quantile_exponential, quantile_standard_normal};
pub use rng::{derive_seed, mix64, SampleRng};

use crate::error::{Error, Result};
use crate::series::SampleSeries;

/// Distribution sampled by inverse transform.
#[derive(Debug, Clone, Copy)]
pub enum Quantile {
    StandardNormal,
    Normal {
        mean: f64,
        sd: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Caller-supplied quantile function on `(0, 1)`.
    Custom(fn(f64) -> f64),
}

impl PartialEq for Quantile {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::StandardNormal, Self::StandardNormal) => true,
            (Self::Normal { mean: a, sd: b }, Self::Normal { mean: c, sd: d }) => a == c && b == d,
            (Self::Exponential { rate: a }, Self::Exponential { rate: b }) => a == b,
            (Self::Custom(f), Self::Custom(g)) => std::ptr::fn_addr_eq(*f, *g),
            _ => false,
        }
    }
}

impl Quantile {
    pub fn eval(&self, u: f64) -> Result<f64> {
        match *self {
            Self::StandardNormal => quantile_standard_normal(u),
            Self::Normal { mean, sd } => Ok(mean + sd * quantile_standard_normal(u)?),
            Self::Exponential { rate } => quantile_exponential(u, rate),
            Self::Custom(f) => Ok(f(u)),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Normal { mean, sd } if !(mean.is_finite() && sd.is_finite() && sd > 0.0) => {
                Err(Error::InvalidParameter(format!(
                    "normal needs finite mean and sd > 0, got {mean}, {sd}"
                )))
            }
            Self::Exponential { rate } if !(rate.is_finite() && rate > 0.0) => Err(
                Error::InvalidParameter(format!("exponential rate must be positive, got {rate}")),
            ),
            _ => Ok(()),
        }
    }

    /// `None` when the mean is not known in closed form.
    fn mean(&self) -> Option<f64> {
        match *self {
            Self::StandardNormal => Some(0.0),
            Self::Normal { mean, .. } => Some(mean),
            Self::Exponential { rate } => Some(1.0 / rate),
            Self::Custom(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Process {
    /// Independent `U(0, 1)` draws.
    UniformIid,
    /// Independent draws from an arbitrary distribution.
    Iid(Quantile),
    /// Cumulative sum of fair `±1` steps starting at 0.
    SimpleWalk,
    /// Cumulative sum of zero-mean, finite-variance steps starting at 0.
    GeneralWalk(Quantile),
    /// New all-time maximum with probability `p`, new all-time minimum with
    /// probability `q`, otherwise a uniform draw strictly inside the current range.
    ///
    /// The running range starts as `[0, 1]` before the first sample; records
    /// overshoot by an `Exp(1)` gap.
    RecordRenewal { p: f64, q: f64 },
}

impl Process {
    /// Short name used on the command line and in benchmark records.
    pub fn name(&self) -> &'static str {
        match self {
            Self::UniformIid => "uniform",
            Self::Iid(Quantile::Exponential { .. }) => "expo",
            Self::Iid(_) => "normal",
            Self::SimpleWalk => "walk",
            Self::GeneralWalk(_) => "gwalk",
            Self::RecordRenewal { .. } => "records",
        }
    }

    /// Parses a command-line process name with its built-in parameters.
    pub fn from_name(name: &str, p: f64, q: f64) -> Result<Self> {
        let process = match name {
            "uniform" => Self::UniformIid,
            "normal" => Self::Iid(Quantile::StandardNormal),
            "expo" => Self::Iid(Quantile::Exponential { rate: 1.0 }),
            "walk" => Self::SimpleWalk,
            "gwalk" => Self::GeneralWalk(Quantile::StandardNormal),
            "records" => Self::RecordRenewal { p, q },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown process {other:?}"
                )));
            }
        };
        process.validate()?;
        Ok(process)
    }

    pub fn params(&self) -> BTreeMap<&'static str, f64> {
        let mut m = BTreeMap::new();
        match *self {
            Self::Iid(q) | Self::GeneralWalk(q) => match q {
                Quantile::Normal { mean, sd } => {
                    m.insert("mean", mean);
                    m.insert("sd", sd);
                }
                Quantile::Exponential { rate } => {
                    m.insert("rate", rate);
                }
                _ => {}
            },
            Self::RecordRenewal { p, q } => {
                m.insert("p", p);
                m.insert("q", q);
            }
            _ => {}
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Iid(q) => q.validate(),
            Self::GeneralWalk(q) => {
                q.validate()?;
                match q.mean() {
                    Some(m) if m != 0.0 => Err(Error::InvalidParameter(format!(
                        "walk steps must have zero mean, got {m}"
                    ))),
                    _ => Ok(()),
                }
            }
            Self::RecordRenewal { p, q } => {
                if p.is_finite() && q.is_finite() && p >= 0.0 && q >= 0.0 && p + q <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "record probabilities need p, q ≥ 0 and p + q ≤ 1, got {p}, {q}"
                    )))
                }
            }
            _ => Ok(()),
        }
    }

    pub fn spec(self, length: usize, seed: u64) -> ProcessSpec {
        ProcessSpec {
            process: self,
            length,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessSpec {
    pub process: Process,
    pub length: usize,
    pub seed: u64,
}

/// Cumulative sum of `steps` starting from 0.
pub fn cumulative_walk(steps: &[f64]) -> Vec<f64> {
    let mut x = 0.0;
    std::iter::once(0.0)
        .chain(steps.iter().map(|s| {
            x += s;
            x
        }))
        .collect()
}

pub fn generate(spec: &ProcessSpec) -> Result<SampleSeries<f64>> {
    if spec.length == 0 {
        return Err(Error::InvalidParameter("length must be at least 1".into()));
    }
    spec.process.validate()?;
    let mut rng = SampleRng::seed_from_u64(spec.seed);
    let n = spec.length;
    let values = match spec.process {
        Process::UniformIid => (0..n).map(|_| rng.open_unit()).collect(),
        Process::Iid(q) => (0..n)
            .map(|_| q.eval(rng.open_unit()))
            .collect::<Result<Vec<_>>>()?,
        Process::SimpleWalk => {
            let steps: Vec<f64> = (1..n)
                .map(|_| if rng.coin() { 1.0 } else { -1.0 })
                .collect();
            cumulative_walk(&steps)
        }
        Process::GeneralWalk(q) => {
            let steps = (1..n)
                .map(|_| q.eval(rng.open_unit()))
                .collect::<Result<Vec<_>>>()?;
            cumulative_walk(&steps)
        }
        Process::RecordRenewal { p, q } => record_renewal(&mut rng, n, p, q)?,
    };
    SampleSeries::new(values)
}

fn record_renewal(rng: &mut SampleRng, n: usize, p: f64, q: f64) -> Result<Vec<f64>> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u = rng.open_unit();
        let x = if u < p {
            hi += quantile_exponential(rng.open_unit(), 1.0)?;
            hi
        } else if u < p + q {
            lo -= quantile_exponential(rng.open_unit(), 1.0)?;
            lo
        } else {
            lo + (hi - lo) * rng.open_unit()
        };
        out.push(x);
    }
    Ok(out)
}
