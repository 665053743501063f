// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reading series from CSV and JSON.

use std::fs;
use std::path::Path;

use driftsplit::{LabelSequence, Series};
use serde_json::Value;

use crate::args::Format;
use crate::error::{CliError, Result};

const TIME_NAMES: [&str; 3] = ["t", "time", "timestamp"];
const VALUE_NAMES: [&str; 3] = ["value", "x", "y"];

pub fn infer_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

pub fn ingest(path: &Path, format: Format) -> Result<Series> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match format {
        Format::Csv => parse_csv(path, &text),
        Format::Json => parse_json(path, &text),
    }
}

/// The `label` column of a CSV written by `split`.
pub fn ingest_labels(path: &Path) -> Result<LabelSequence> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let table = read_table(path, &text)?;
    let header = table
        .header
        .as_ref()
        .ok_or_else(|| CliError::parse(path, 1, "a header with a label column is required"))?;
    let col =
        column(header, &["label"]).ok_or_else(|| CliError::parse(path, 1, "no label column"))?;
    table
        .rows
        .iter()
        .map(|(line, cells)| match cells.get(col).map(String::as_str) {
            Some("1") => Ok(true),
            Some("0") => Ok(false),
            other => Err(CliError::parse(
                path,
                *line,
                format!("label must be 0 or 1, found {:?}", other.unwrap_or("")),
            )),
        })
        .collect::<Result<Vec<_>>>()
        .map(LabelSequence::new)
}

struct Table {
    header: Option<Vec<String>>,
    header_line: u64,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_table(path: &Path, text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::parse(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    let is_header = rows
        .first()
        .is_some_and(|(_, cells)| cells.iter().any(|c| c.parse::<f64>().is_err()));
    if is_header {
        let (line, header) = rows.remove(0);
        Ok(Table {
            header: Some(header.iter().map(|h| h.to_ascii_lowercase()).collect()),
            header_line: line,
            rows,
        })
    } else {
        Ok(Table {
            header: None,
            header_line: 0,
            rows,
        })
    }
}

fn column(header: &[String], names: &[&str]) -> Option<usize> {
    header.iter().position(|h| names.contains(&h.as_str()))
}

fn parse_csv(path: &Path, text: &str) -> Result<Series> {
    let table = read_table(path, text)?;
    let first_line = table.header_line + 1;
    let width = table
        .header
        .as_ref()
        .map(Vec::len)
        .or_else(|| table.rows.first().map(|(_, c)| c.len()));
    let (t_col, v_col) = match (&table.header, width) {
        (Some(h), _) if column(h, &VALUE_NAMES).is_some() => (
            column(h, &TIME_NAMES),
            column(h, &VALUE_NAMES).expect("checked"),
        ),
        (_, Some(1)) => (None, 0),
        (_, Some(2)) => (Some(0), 1),
        (_, Some(n)) => {
            return Err(CliError::parse(
                path,
                first_line,
                format!("expected one value column or two columns t,value; found {n} columns"),
            ))
        }
        (_, None) => return Err(CliError::parse(path, first_line, "no samples")),
    };
    if table.rows.is_empty() {
        return Err(CliError::parse(path, first_line, "no samples"));
    }

    let mut values = Vec::with_capacity(table.rows.len());
    let mut times = Vec::with_capacity(table.rows.len());
    for (line, cells) in &table.rows {
        let cell = |col: usize, what: &str| -> Result<f64> {
            let raw = cells
                .get(col)
                .ok_or_else(|| CliError::parse(path, *line, format!("missing {what} column")))?;
            let v: f64 = raw.parse().map_err(|_| {
                CliError::parse(path, *line, format!("{what} {raw:?} is not a number"))
            })?;
            if !v.is_finite() {
                return Err(CliError::parse(
                    path,
                    *line,
                    format!("{what} {raw:?} is not finite"),
                ));
            }
            Ok(v)
        };
        values.push(cell(v_col, "value")?);
        if let Some(c) = t_col {
            let t = cell(c, "timestamp")?;
            if times.last().is_some_and(|&prev| t <= prev) {
                return Err(CliError::parse(
                    path,
                    *line,
                    "timestamps must be strictly increasing",
                ));
            }
            times.push(t);
        }
    }
    let series = match t_col {
        Some(_) => Series::with_timestamps(values, times)?,
        None => Series::new(values)?,
    };
    Ok(series)
}

/// One-based line on which each top-level array element starts.
fn element_lines(text: &str) -> Vec<u64> {
    let mut lines = Vec::new();
    let (mut line, mut depth) = (1u64, 0usize);
    let (mut in_string, mut escaped, mut expect) = (false, false, false);
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        if expect && !ch.is_whitespace() && ch != ']' {
            lines.push(line);
            expect = false;
        }
        match ch {
            '"' => in_string = true,
            '[' | '{' => {
                depth += 1;
                expect = depth == 1 && ch == '[';
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 1 => expect = true,
            _ => {}
        }
    }
    lines
}

fn parse_json(path: &Path, text: &str) -> Result<Series> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| CliError::parse(path, e.line() as u64, e.to_string()))?;
    let Value::Array(items) = doc else {
        return Err(CliError::parse(path, 1, "expected a top-level array"));
    };
    if items.is_empty() {
        return Err(CliError::parse(path, 1, "no samples"));
    }
    let lines = element_lines(text);
    let line_of = |i: usize| lines.get(i).copied().unwrap_or(1);
    let number = |v: &Value, i: usize, what: &str| -> Result<f64> {
        v.as_f64().ok_or_else(|| {
            CliError::parse(
                path,
                line_of(i),
                format!("{what} of element {i} is not a number"),
            )
        })
    };

    if items[0].is_number() {
        let values = items
            .iter()
            .enumerate()
            .map(|(i, v)| number(v, i, "value"))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Series::new(values)?);
    }
    let mut values = Vec::with_capacity(items.len());
    let mut times: Vec<f64> = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let Value::Object(obj) = item else {
            return Err(CliError::parse(
                path,
                line_of(i),
                format!("element {i} must be a number or an object with t and value"),
            ));
        };
        let get = |key: &str| {
            obj.get(key).ok_or_else(|| {
                CliError::parse(path, line_of(i), format!("element {i} has no {key:?}"))
            })
        };
        let t = number(get("t")?, i, "t")?;
        if times.last().is_some_and(|&prev| t <= prev) {
            return Err(CliError::parse(
                path,
                line_of(i),
                "timestamps must be strictly increasing",
            ));
        }
        times.push(t);
        values.push(number(get("value")?, i, "value")?);
    }
    Ok(Series::with_timestamps(values, times)?)
}
