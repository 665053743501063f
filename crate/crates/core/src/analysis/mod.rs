// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte-Carlo survivor statistics, growth-law checks and hierarchical forks.

mod ballot;
mod census;
mod fork;
mod growth;
mod suite;

pub use ballot::{ballot_check, BallotBin, BallotConfig, BallotReport};
pub use census::{
    survivor_census, to_jsonl, write_jsonl, BenchRecord, Frequency, SizeStats, SurvivorStats,
};
pub use fork::{hierarchical_fork, Branch, ForkNode, ForkTree};
pub use growth::{
    growth_fit, log_law_reference, GrowthLaw, GrowthReport, GrowthRow, GrowthTolerances,
};
pub use suite::{bench_suite, default_law, BenchSuite, SuiteOutcome};
