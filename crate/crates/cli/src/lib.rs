// SPDX-License-Identifier: MIT OR Apache-2.0

//! Batch front-end for `driftsplit`: split, bands, gen, bench and plot.

pub mod args;
pub mod emit;
pub mod error;
pub mod ingest;
pub mod plot;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use driftsplit::analysis::{
    ballot_check, bench_suite, default_law, hierarchical_fork, write_jsonl, BallotConfig,
    BenchSuite,
};
use driftsplit::generators::{generate, Process};
use driftsplit::{extract_envelopes, InterpMode, Series};

use crate::args::{
    BandsArgs, BenchArgs, Cli, Command, Format, GenArgs, InputArgs, PlotArgs, SplitArgs,
};
pub use crate::error::{CliError, Result};

/// Parses `argv` and runs it, returning the process exit code.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Split(a) => split(a),
        Command::Bands(a) => bands(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
        Command::Plot(a) => plot(a),
    }
}

fn check_input(input: &InputArgs) -> Result<()> {
    if !input.input.is_file() {
        return Err(CliError::io(
            &input.input,
            io::Error::new(io::ErrorKind::NotFound, "input file not found"),
        ));
    }
    Ok(())
}

fn check_output(path: Option<&Path>) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if parent.is_some_and(|p| !p.is_dir()) {
        return Err(CliError::io(
            path,
            io::Error::new(io::ErrorKind::NotFound, "output directory does not exist"),
        ));
    }
    Ok(())
}

fn read_input(input: &InputArgs) -> Result<Series> {
    ingest::ingest(
        &input.input,
        ingest::infer_format(&input.input, input.format),
    )
}

/// Writes through `f` to `path`, or to standard output.
fn with_output<F>(path: Option<&PathBuf>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let (result, name) = match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            (f(&mut w).and_then(|_| w.flush()), p.clone())
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            (f(&mut w).and_then(|_| w.flush()), PathBuf::from("<stdout>"))
        }
    };
    result.map_err(|e| CliError::io(name, e))
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Summary lines go to stdout unless stdout carries the data.
fn report(to_file: bool, line: &str) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn split(a: SplitArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(a.output.as_deref())?;
    let series = read_input(&a.input)?;
    let e = extract_envelopes(&series, a.interp.into())?;
    with_output(a.output.as_ref(), |w| {
        emit::write_split(w, &series, &e).map_err(csv_io)
    })?;
    let to_file = a.output.is_some();
    if e.envelopes.lower.is_none() {
        eprintln!("warning: every sample has the same label; the lower envelope is empty");
    }
    report(
        to_file,
        &format!(
            "total_drift={} final_survivors={} samples={}",
            emit::fmt_num(e.total_drift),
            e.split.final_survivors(),
            series.len()
        ),
    );
    Ok(())
}

fn bands(a: BandsArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(a.output.as_deref())?;
    let series = read_input(&a.input)?;
    let tree = hierarchical_fork(&series, a.depth as usize, a.interp.into())?;
    if !tree.is_consistent() {
        return Err(
            driftsplit::Error::Invariant("fork tree failed its consistency check".into()).into(),
        );
    }
    with_output(a.output.as_ref(), |w| {
        emit::write_bands(w, &tree).map_err(csv_io)
    })?;
    report(
        a.output.is_some(),
        &format!(
            "nodes={} splits={} leaves={} depth={}",
            tree.nodes.len(),
            tree.splits().count(),
            tree.leaves().count(),
            tree.depth
        ),
    );
    Ok(())
}

fn process_of(name: args::ProcessName, p: f64, q: f64) -> Result<Process> {
    Process::from_name(name.as_str(), p, q).map_err(|e| CliError::Usage(e.to_string()))
}

fn gen(a: GenArgs) -> Result<()> {
    check_output(a.output.as_deref())?;
    let process = process_of(a.process.process, a.process.p, a.process.q)?;
    let series = generate(&process.spec(a.len as usize, a.process.seed))?;
    with_output(a.output.as_ref(), |w| match a.format {
        Format::Csv => emit::write_series_csv(w, &series).map_err(csv_io),
        Format::Json => emit::write_series_json(w, &series),
    })
}

fn bench(a: BenchArgs) -> Result<()> {
    check_output(a.output.as_deref())?;
    if a.sizes.is_empty() || a.sizes.contains(&0) {
        return Err(CliError::Usage("--sizes must list positive lengths".into()));
    }
    let processes = match a.process {
        Some(name) => vec![process_of(name, a.p, a.q)?],
        None => BenchSuite::default()
            .processes
            .into_iter()
            .map(|p| match p {
                Process::RecordRenewal { .. } => Process::RecordRenewal { p: a.p, q: a.q },
                other => other,
            })
            .collect(),
    };
    for p in &processes {
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let suite = BenchSuite {
        processes,
        sizes: a.sizes.clone(),
        trials: a.trials as usize,
        seed: a.seed,
        timing: a.timing,
        ..BenchSuite::default()
    };
    let outcome = bench_suite(&suite)?;
    let records = outcome.all_records();
    with_output(a.output.as_ref(), |w| write_jsonl(w, &records))?;

    let to_file = a.output.is_some();
    for (stats, fit) in outcome.stats.iter().zip(&outcome.fits) {
        let means: Vec<String> = stats
            .sizes
            .values()
            .map(|s| format!("T={}:{:.3}±{:.3}", s.len, s.mean, s.std_error))
            .collect();
        let verdict = match fit {
            Some(f) => format!(
                "{:?} law {} (statistic {:.3}, window [{:.3}, {:.3}])",
                default_law(&stats.process),
                if f.pass { "pass" } else { "FAIL" },
                f.statistic,
                f.window.0,
                f.window.1
            ),
            None => "no fit (needs ≥ 3 sizes spanning a factor of 4)".to_string(),
        };
        report(
            to_file,
            &format!("{} {} {verdict}", stats.process.name(), means.join(" ")),
        );
        if stats.process == Process::SimpleWalk {
            let len = suite.sizes.iter().copied().min().expect("non-empty");
            if len >= 32 {
                let b = ballot_check(suite.trials, len, suite.seed, &BallotConfig::default())?;
                report(
                    to_file,
                    &format!(
                        "walk ballot T={len}: {} judged bins, {}",
                        b.judged(),
                        if b.pass { "pass" } else { "FAIL" }
                    ),
                );
            }
        }
    }
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(Some(&a.output))?;
    let series = read_input(&a.input)?;
    let mode: InterpMode = a.interp.into();
    let tree = hierarchical_fork(&series, a.depth as usize, mode)?;
    let single;
    let bands: Vec<plot::Band<'_>> = if tree.splits().next().is_some() {
        tree.splits()
            .map(|n| plot::Band {
                level: n.level() + 1,
                pair: &n.split.as_ref().expect("split node").envelopes,
            })
            .collect()
    } else {
        // a single sample still has a (one-sided) envelope
        single = extract_envelopes(&series, mode)?;
        vec![plot::Band {
            level: 1,
            pair: &single.envelopes,
        }]
    };
    let svg = plot::render_svg(&series, &bands);
    with_output(Some(&a.output), |w| w.write_all(svg.as_bytes()))
}
