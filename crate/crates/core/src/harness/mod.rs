//! Flight-data harness.
//!
//! Signals travel over a synchronous [`Bus`]: every topic is published
//! exactly once per tick and ticks are numbered without gaps. A
//! [`MonitorNode`] subscribes to all input topics, steps each monitor and
//! publishes one `verdict/<id>` topic per requirement, in requirement
//! order. [`run_live`] drives this loop tick by tick; [`replay`] runs the
//! same monitors over a recorded trace.

mod csv;
mod report;
mod scenario;

pub use csv::{read_trace, write_trace, CsvError};
pub use report::{format_alerts, format_records, format_table};
pub use scenario::{builtin_scenario, generate_scenario, Geofence, Scenario, Track, BUILTIN_SCENARIOS};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::monitor::{MonitorError, NamedMonitor, Verdict};
use crate::semantics::{check_coverage, EvalError};
use crate::trace::{Trace, Valuation, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("requirement {id}: {source}")]
    Monitor {
        id: String,
        #[source]
        source: MonitorError,
    },
    #[error("requirement {id}: {source}")]
    Coverage {
        id: String,
        #[source]
        source: EvalError,
    },
}

/// Topic carrying a requirement's verdict.
pub fn verdict_topic(id: &str) -> String {
    format!("verdict/{id}")
}

/// Everything published on one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct BusTick {
    pub tick: u64,
    pub values: BTreeMap<String, Value>,
}

/// Publishes every column of a trace once per tick.
#[derive(Debug, Clone)]
pub struct Bus {
    trace: Trace,
    next: usize,
}

impl Bus {
    pub fn new(trace: Trace) -> Self {
        Bus { trace, next: 0 }
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.trace.columns().map(|(n, _)| n)
    }
}

impl Iterator for Bus {
    type Item = BusTick;

    fn next(&mut self) -> Option<BusTick> {
        if self.next >= self.trace.len() {
            return None;
        }
        let t = self.next;
        self.next += 1;
        Some(BusTick {
            tick: t as u64,
            values: self.trace.row(t),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.trace.len() - self.next;
        (n, Some(n))
    }
}

/// Steps a set of monitors from bus ticks.
#[derive(Debug, Clone)]
pub struct MonitorNode {
    monitors: Vec<NamedMonitor>,
}

impl MonitorNode {
    pub fn new(requirements: &[(String, Formula)]) -> Result<Self, HarnessError> {
        let monitors = requirements
            .iter()
            .map(|(id, f)| {
                NamedMonitor::new(id.clone(), f).map_err(|source| HarnessError::Monitor {
                    id: id.clone(),
                    source,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(MonitorNode { monitors })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.monitors.iter().map(|m| m.id.as_str())
    }

    /// Verdicts for one tick, in requirement order.
    pub fn on_tick(&mut self, tick: &BusTick) -> Result<Vec<Verdict>, HarnessError> {
        self.monitors
            .iter_mut()
            .map(|m| {
                m.step(&tick.values).map_err(|source| HarnessError::Monitor {
                    id: m.id.clone(),
                    source,
                })
            })
            .collect()
    }
}

/// One tick of a live run: what the bus published and the verdicts the
/// monitor node answered with.
#[derive(Debug, Clone, PartialEq)]
pub struct LiveTick {
    pub bus: BusTick,
    pub verdicts: Vec<Verdict>,
}

impl LiveTick {
    /// The verdict topics published on this tick.
    pub fn published(&self) -> Vec<(String, bool)> {
        self.verdicts
            .iter()
            .map(|v| (verdict_topic(&v.requirement_id), v.ok))
            .collect()
    }
}

/// Iterator over a live run; see [`run_live`].
pub struct LiveRun {
    bus: Bus,
    node: MonitorNode,
    failed: bool,
}

impl Iterator for LiveRun {
    type Item = Result<LiveTick, HarnessError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let tick = self.bus.next()?;
        Some(match self.node.on_tick(&tick) {
            Ok(verdicts) => Ok(LiveTick { bus: tick, verdicts }),
            Err(e) => {
                self.failed = true;
                Err(e)
            }
        })
    }
}

fn check_signals(requirements: &[(String, Formula)], trace: &Trace) -> Result<(), HarnessError> {
    for (id, f) in requirements {
        check_coverage(f, trace).map_err(|source| HarnessError::Coverage {
            id: id.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Stream `trace` over the bus, yielding verdicts as each tick completes.
pub fn run_live(requirements: &[(String, Formula)], trace: Trace) -> Result<LiveRun, HarnessError> {
    check_signals(requirements, &trace)?;
    Ok(LiveRun {
        bus: Bus::new(trace),
        node: MonitorNode::new(requirements)?,
        failed: false,
    })
}

/// Outcome of monitoring one requirement over a whole trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub id: String,
    pub first_violation_tick: Option<u64>,
    pub verdicts: Vec<bool>,
    /// Every signal's value at the first violation.
    pub offending_values: Option<Valuation>,
}

impl ViolationReport {
    pub fn violated(&self) -> bool {
        self.first_violation_tick.is_some()
    }
}

/// Run the monitors over a recorded trace.
pub fn replay(requirements: &[(String, Formula)], trace: &Trace) -> Result<Vec<ViolationReport>, HarnessError> {
    check_signals(requirements, trace)?;
    requirements
        .iter()
        .map(|(id, f)| {
            let wrap = |source| HarnessError::Monitor { id: id.clone(), source };
            let mut m = NamedMonitor::new(id.clone(), f).map_err(wrap)?;
            let mut verdicts = Vec::with_capacity(trace.len());
            for t in 0..trace.len() {
                verdicts.push(m.step(&trace.row(t)).map_err(wrap)?.ok);
            }
            Ok(report(id, verdicts, trace))
        })
        .collect()
}

fn report(id: &str, verdicts: Vec<bool>, trace: &Trace) -> ViolationReport {
    let first = verdicts.iter().position(|ok| !ok);
    ViolationReport {
        id: id.to_string(),
        first_violation_tick: first.map(|t| t as u64),
        offending_values: first.map(|t| trace.row(t)),
        verdicts,
    }
}

/// Generate a scenario's trace and stream it over the bus.
pub fn simulate(scenario: &Scenario, requirements: &[(String, Formula)]) -> Result<LiveRun, HarnessError> {
    run_live(requirements, generate_scenario(scenario))
}

/// Collect a live run into per-requirement reports.
pub fn collect_reports(
    requirements: &[(String, Formula)],
    trace: &Trace,
) -> Result<Vec<ViolationReport>, HarnessError> {
    let mut streams: Vec<Vec<bool>> = vec![Vec::with_capacity(trace.len()); requirements.len()];
    for tick in run_live(requirements, trace.clone())? {
        for (stream, v) in streams.iter_mut().zip(tick?.verdicts) {
            stream.push(v.ok);
        }
    }
    Ok(requirements
        .iter()
        .zip(streams)
        .map(|((id, _), verdicts)| report(id, verdicts, trace))
        .collect())
}
