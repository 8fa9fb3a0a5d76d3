//! Trace files: comma-separated, one row per tick, first column `time`.
//!
//! Boolean cells are `0`/`1` (`true`/`false` is also accepted). Column
//! kinds come from hints where available; any other column is boolean
//! when every cell is `0` or `1` and numeric otherwise.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::trace::{Column, SignalKind, Trace, TraceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("empty trace file")]
    Empty,
    #[error("the first column must be `time`, found `{0}`")]
    MissingTimeColumn(String),
    #[error("line 1: duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("line {line}: `time` must be the tick index {expected}, found `{found}`")]
    TimeColumn { line: usize, expected: usize, found: String },
    #[error("line 1: empty column name")]
    EmptyColumnName,
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: column `{column}`: `{text}` is not a {expected} value")]
    BadValue {
        line: usize,
        column: String,
        text: String,
        expected: SignalKind,
    },
    #[error("line {line}: column `{column}`: non-finite number `{text}`")]
    NonFinite { line: usize, column: String, text: String },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

fn parse_bool(cell: &str) -> Option<bool> {
    match cell {
        "1" | "true" => Some(true),
        "0" | "false" => Some(false),
        _ => None,
    }
}

/// Parse a trace. `hints` fixes the kind of the named columns.
pub fn read_trace(text: &str, hints: &BTreeMap<String, SignalKind>) -> Result<Trace, CsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(CsvError::Empty)?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names[0] != "time" {
        return Err(CsvError::MissingTimeColumn(names[0].to_string()));
    }
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() {
            return Err(CsvError::EmptyColumnName);
        }
        if names[..i].contains(n) {
            return Err(CsvError::DuplicateColumn(n.to_string()));
        }
    }

    let mut cells: Vec<Vec<&str>> = vec![Vec::new(); names.len()];
    let mut line_nos = Vec::new();
    for (line, row) in lines {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != names.len() {
            return Err(CsvError::FieldCount {
                line,
                expected: names.len(),
                found: fields.len(),
            });
        }
        let tick = line_nos.len();
        if fields[0].parse::<usize>().ok() != Some(tick) {
            return Err(CsvError::TimeColumn {
                line,
                expected: tick,
                found: fields[0].to_string(),
            });
        }
        for (col, f) in cells.iter_mut().zip(fields) {
            col.push(f);
        }
        line_nos.push(line);
    }

    let mut trace = Trace::new(line_nos.len());
    for (name, col) in names.iter().zip(&cells) {
        if *name == "time" {
            continue;
        }
        let kind = match hints.get(*name) {
            Some(k) => *k,
            _ if col.iter().all(|c| *c == "0" || *c == "1") => SignalKind::Bool,
            _ => SignalKind::Num,
        };
        let bad = |i: usize| CsvError::BadValue {
            line: line_nos[i],
            column: name.to_string(),
            text: col[i].to_string(),
            expected: kind,
        };
        let column = match kind {
            SignalKind::Bool => Column::Bool(
                col.iter()
                    .enumerate()
                    .map(|(i, c)| parse_bool(c).ok_or_else(|| bad(i)))
                    .collect::<Result<_, _>>()?,
            ),
            SignalKind::Num => Column::Num(
                col.iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let v: f64 = c.parse().map_err(|_| bad(i))?;
                        if !v.is_finite() {
                            return Err(CsvError::NonFinite {
                                line: line_nos[i],
                                column: name.to_string(),
                                text: c.to_string(),
                            });
                        }
                        Ok(v)
                    })
                    .collect::<Result<_, _>>()?,
            ),
        };
        trace.insert(*name, column)?;
    }
    Ok(trace)
}

/// Render a trace with `time` equal to the tick index.
pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::from("time");
    for (name, _) in trace.columns() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for t in 0..trace.len() {
        let _ = write!(out, "{t}");
        for (_, col) in trace.columns() {
            if let Some(v) = col.get(t) {
                let _ = write!(out, ",{v}");
            }
        }
        out.push('\n');
    }
    out
}
