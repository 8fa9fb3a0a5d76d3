//! Text renderings of violation reports.

use std::fmt::Write;

use super::ViolationReport;
use crate::trace::Trace;

/// One `id=… first_violation_tick=… trace_length=…` line per report;
/// `-` marks a requirement that was never violated.
pub fn format_records(reports: &[ViolationReport], trace_len: usize) -> String {
    let mut out = String::new();
    for r in reports {
        let first = r
            .first_violation_tick
            .map_or_else(|| "-".to_string(), |t| t.to_string());
        let _ = writeln!(out, "id={} first_violation_tick={first} trace_length={trace_len}", r.id);
    }
    out
}

/// One `ALERT` line per violated requirement, listing the signal values at
/// the first violation.
pub fn format_alerts(reports: &[ViolationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let (Some(t), Some(values)) = (r.first_violation_tick, &r.offending_values) else {
            continue;
        };
        let _ = write!(out, "ALERT {} first violation at tick {t}:", r.id);
        for (name, v) in values {
            let _ = write!(out, " {name}={v}");
        }
        out.push('\n');
    }
    out
}

/// Per-tick table of every signal and verdict (`ok`/`VIOLATED`).
pub fn format_table(trace: &Trace, reports: &[ViolationReport]) -> String {
    let mut header: Vec<String> = vec!["tick".into()];
    header.extend(trace.columns().map(|(n, _)| n.to_string()));
    header.extend(reports.iter().map(|r| r.id.clone()));

    let mut rows = vec![header];
    for t in 0..trace.len() {
        let mut row = vec![t.to_string()];
        row.extend(trace.columns().filter_map(|(_, c)| c.get(t)).map(|v| v.to_string()));
        row.extend(reports.iter().map(|r| match r.verdicts.get(t) {
            Some(true) => "ok".to_string(),
            Some(false) => "VIOLATED".to_string(),
            None => "?".to_string(),
        }));
        rows.push(row);
    }

    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
