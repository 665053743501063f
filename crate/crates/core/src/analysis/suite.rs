// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::analysis::census::{survivor_census, BenchRecord, SurvivorStats};
use crate::analysis::growth::{growth_fit, GrowthLaw, GrowthReport, GrowthTolerances};
use crate::error::Result;
use crate::generators::{Process, Quantile};

/// Growth law expected for a process family.
pub fn default_law(process: &Process) -> GrowthLaw {
    match process {
        Process::UniformIid | Process::Iid(_) => GrowthLaw::Log,
        Process::SimpleWalk | Process::GeneralWalk(_) => GrowthLaw::Sqrt,
        Process::RecordRenewal { .. } => GrowthLaw::Constant,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSuite {
    pub processes: Vec<Process>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub timing: bool,
    pub tolerances: GrowthTolerances,
}

impl Default for BenchSuite {
    fn default() -> Self {
        Self {
            processes: vec![
                Process::UniformIid,
                Process::Iid(Quantile::StandardNormal),
                Process::SimpleWalk,
                Process::GeneralWalk(Quantile::StandardNormal),
                Process::RecordRenewal { p: 0.1, q: 0.1 },
            ],
            sizes: vec![1024, 2048, 4096],
            trials: 1000,
            seed: 0,
            timing: false,
            tolerances: GrowthTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub stats: Vec<SurvivorStats>,
    /// `None` where the sizes do not support a fit.
    pub fits: Vec<Option<GrowthReport>>,
}

impl SuiteOutcome {
    pub fn records(&self) -> impl Iterator<Item = &BenchRecord> {
        self.stats.iter().flat_map(|s| s.records.iter())
    }

    pub fn all_records(&self) -> Vec<BenchRecord> {
        self.records().cloned().collect()
    }
}

/// Census and growth fit for every process, in order.
pub fn bench_suite(suite: &BenchSuite) -> Result<SuiteOutcome> {
    let mut stats = Vec::with_capacity(suite.processes.len());
    let mut fits = Vec::with_capacity(suite.processes.len());
    for process in &suite.processes {
        let s = survivor_census(
            *process,
            &suite.sizes,
            suite.trials,
            suite.seed,
            suite.timing,
        )?;
        fits.push(growth_fit(&s, default_law(process), &suite.tolerances).ok());
        stats.push(s);
    }
    Ok(SuiteOutcome { stats, fits })
}
