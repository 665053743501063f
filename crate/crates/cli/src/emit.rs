// SPDX-License-Identifier: MIT OR Apache-2.0

//! CSV and JSON writers.

use std::io::Write;

use driftsplit::analysis::{Branch, ForkTree};
use driftsplit::{EnvelopePair, EnvelopeSplit, LabelSequence, Series};

/// Shortest decimal that parses back to the same `f64`; integers print without a fraction.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn path_name(path: &[Branch]) -> String {
    if path.is_empty() {
        return "root".to_string();
    }
    path.iter()
        .map(|b| match b {
            Branch::Upper => 'U',
            Branch::Lower => 'L',
        })
        .collect()
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn split_rows<W: Write>(
    out: &mut csv::Writer<W>,
    prefix: &[String],
    series: &Series,
    labels: &LabelSequence,
    pair: &EnvelopePair<f64>,
) -> csv::Result<()> {
    for i in 0..series.len() {
        let mut row = prefix.to_vec();
        row.extend([
            fmt_num(pair.timestamps[i]),
            fmt_num(series.values()[i]),
            bit(labels.get(i)).to_string(),
            fmt_num(pair.upper[i]),
            pair.lower.as_ref().map_or(String::new(), |l| fmt_num(l[i])),
            bit(pair.upper_defined[i]).to_string(),
            bit(pair.lower_defined[i]).to_string(),
        ]);
        out.write_record(&row)?;
    }
    Ok(())
}

const SPLIT_HEADER: [&str; 7] = [
    "t",
    "x",
    "label",
    "upper",
    "lower",
    "upper_defined",
    "lower_defined",
];

pub fn write_split<W: Write>(
    out: W,
    series: &Series,
    split: &EnvelopeSplit<f64>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPLIT_HEADER)?;
    split_rows(&mut w, &[], series, &split.labels, &split.envelopes)?;
    w.flush()?;
    Ok(())
}

/// Every split node of the tree, breadth-first.
pub fn write_bands<W: Write>(out: W, tree: &ForkTree<f64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["path", "level"];
    header.extend(SPLIT_HEADER);
    w.write_record(&header)?;
    for node in tree.splits() {
        let split = node.split.as_ref().expect("split node");
        let prefix = [path_name(&node.path), (node.level() + 1).to_string()];
        split_rows(
            &mut w,
            &prefix,
            &node.series,
            &split.labels,
            &split.envelopes,
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_csv<W: Write>(out: W, series: &Series) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "value"])?;
    for (t, v) in series.timestamps().into_iter().zip(series.values()) {
        w.write_record([fmt_num(t), fmt_num(*v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_json<W: Write>(mut out: W, series: &Series) -> std::io::Result<()> {
    serde_json::to_writer(&mut out, series.values())?;
    out.write_all(b"\n")?;
    out.flush()
}
