//! Incremental, bounded-memory evaluation of past-time formulas.
//!
//! A formula is compiled into a plan of node evaluators in post-order
//! (children before parents). Each temporal node owns a fixed-size
//! [`TemporalState`]; one call to [`CompiledMonitor::step`] consumes one
//! tick of input and returns the verdict for that tick.

mod majority;
mod state;

pub use majority::{majority, MajorityError, Vote};
pub use state::{MonitorState, TemporalState};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, Interval};
use crate::fretish::{BoolExpr, CmpOp, NumExpr};
use crate::trace::{SignalKind, Valuation, Value};
use state::push_window;

/// Largest finite upper bound accepted by [`compile`].
pub const BOUND_CAP: u32 = 65_535;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonitorError {
    #[error("interval bound {hi} exceeds the cap of {cap} ticks")]
    BoundTooLarge { hi: u32, cap: u32 },
    #[error("signal `{0}` is used both as a boolean and as a number")]
    KindConflict(String),
    #[error("missing signal `{0}`")]
    MissingSignal(String),
    #[error("signal `{name}` is {found}, expected {expected}")]
    TypeMismatch {
        name: String,
        expected: SignalKind,
        found: SignalKind,
    },
}

/// Boolean expression with signals resolved to input slots.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotBool {
    Lit(bool),
    Slot(usize),
    Cmp(CmpOp, SlotNum, SlotNum),
    Not(Box<SlotBool>),
    And(Box<SlotBool>, Box<SlotBool>),
    Or(Box<SlotBool>, Box<SlotBool>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SlotNum {
    Lit(f64),
    Slot(usize),
    Neg(Box<SlotNum>),
    Add(Box<SlotNum>, Box<SlotNum>),
    Sub(Box<SlotNum>, Box<SlotNum>),
    Mul(Box<SlotNum>, Box<SlotNum>),
}

impl SlotBool {
    fn eval(&self, inputs: &[Value]) -> bool {
        match self {
            SlotBool::Lit(b) => *b,
            SlotBool::Slot(i) => inputs[*i].as_bool().unwrap_or_default(),
            SlotBool::Cmp(op, l, r) => op.apply(l.eval(inputs), r.eval(inputs)),
            SlotBool::Not(e) => !e.eval(inputs),
            SlotBool::And(l, r) => {
                let l = l.eval(inputs);
                let r = r.eval(inputs);
                l && r
            }
            SlotBool::Or(l, r) => {
                let l = l.eval(inputs);
                let r = r.eval(inputs);
                l || r
            }
        }
    }
}

impl SlotNum {
    fn eval(&self, inputs: &[Value]) -> f64 {
        match self {
            SlotNum::Lit(v) => *v,
            SlotNum::Slot(i) => inputs[*i].as_num().unwrap_or_default(),
            SlotNum::Neg(e) => -e.eval(inputs),
            SlotNum::Add(l, r) => l.eval(inputs) + r.eval(inputs),
            SlotNum::Sub(l, r) => l.eval(inputs) - r.eval(inputs),
            SlotNum::Mul(l, r) => l.eval(inputs) * r.eval(inputs),
        }
    }
}

/// One evaluator in a compiled plan. Operands are indices of earlier
/// plan entries; `state` indexes [`MonitorState::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub enum PlanNode {
    Atom(SlotBool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Yesterday { child: usize, state: usize },
    WeakYesterday { child: usize, state: usize },
    Once { interval: Interval, child: usize, state: usize },
    Historically { interval: Interval, child: usize, state: usize },
    Since { interval: Interval, lhs: usize, rhs: usize, state: usize },
}

/// Where a signal's value lives in the input vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSlot {
    pub index: usize,
    pub kind: SignalKind,
}

#[derive(Debug, Clone)]
pub struct CompiledMonitor {
    formula: Formula,
    plan: Vec<PlanNode>,
    state: MonitorState,
    initial: MonitorState,
    layout: BTreeMap<String, InputSlot>,
    inputs: Vec<Value>,
    values: Vec<bool>,
}

struct Builder<'a> {
    layout: &'a BTreeMap<String, InputSlot>,
    plan: Vec<PlanNode>,
    states: Vec<TemporalState>,
}

impl Builder<'_> {
    fn push(&mut self, node: PlanNode) -> usize {
        self.plan.push(node);
        self.plan.len() - 1
    }

    fn state(&mut self, s: TemporalState) -> usize {
        self.states.push(s);
        self.states.len() - 1
    }

    fn check(i: Interval) -> Result<(), MonitorError> {
        match i.hi() {
            Some(hi) if hi > BOUND_CAP => Err(MonitorError::BoundTooLarge { hi, cap: BOUND_CAP }),
            _ => Ok(()),
        }
    }

    fn once_like_state(&mut self, i: Interval, neutral: bool) -> usize {
        match (i.lo(), i.hi()) {
            (0, None) => self.state(TemporalState::Latch { value: neutral }),
            (_, None) => self.state(TemporalState::FirstHit { seen: false, age: 0 }),
            (_, Some(hi)) => self.state(TemporalState::window(hi)),
        }
    }

    fn build(&mut self, f: &Formula) -> Result<usize, MonitorError> {
        let node = match f {
            Formula::Atom(e) => PlanNode::Atom(self.bool_expr(e)),
            Formula::Not(g) => PlanNode::Not(self.build(g)?),
            Formula::And(l, r) => PlanNode::And(self.build(l)?, self.build(r)?),
            Formula::Or(l, r) => PlanNode::Or(self.build(l)?, self.build(r)?),
            Formula::Implies(l, r) => PlanNode::Implies(self.build(l)?, self.build(r)?),
            Formula::Yesterday(g) => {
                let child = self.build(g)?;
                let state = self.state(TemporalState::Prev { value: false });
                PlanNode::Yesterday { child, state }
            }
            Formula::WeakYesterday(g) => {
                let child = self.build(g)?;
                let state = self.state(TemporalState::Prev { value: true });
                PlanNode::WeakYesterday { child, state }
            }
            Formula::Once(i, g) => {
                Self::check(*i)?;
                let child = self.build(g)?;
                let state = self.once_like_state(*i, false);
                PlanNode::Once { interval: *i, child, state }
            }
            Formula::Historically(i, g) => {
                Self::check(*i)?;
                let child = self.build(g)?;
                let state = self.once_like_state(*i, true);
                PlanNode::Historically { interval: *i, child, state }
            }
            Formula::Since(i, p, q) => {
                Self::check(*i)?;
                let lhs = self.build(p)?;
                let rhs = self.build(q)?;
                let state = match (i.lo(), i.hi()) {
                    (0, None) => self.state(TemporalState::Latch { value: false }),
                    (_, None) => self.state(TemporalState::SinceAge { valid: false, age: 0 }),
                    (_, Some(hi)) => self.state(TemporalState::since_window(hi)),
                };
                PlanNode::Since { interval: *i, lhs, rhs, state }
            }
        };
        Ok(self.push(node))
    }

    fn bool_expr(&self, e: &BoolExpr) -> SlotBool {
        match e {
            BoolExpr::Lit(b) => SlotBool::Lit(*b),
            BoolExpr::Signal(s) => SlotBool::Slot(self.layout[s.as_str()].index),
            BoolExpr::Cmp(op, l, r) => SlotBool::Cmp(*op, self.num_expr(l), self.num_expr(r)),
            BoolExpr::Not(x) => SlotBool::Not(Box::new(self.bool_expr(x))),
            BoolExpr::And(l, r) => SlotBool::And(Box::new(self.bool_expr(l)), Box::new(self.bool_expr(r))),
            BoolExpr::Or(l, r) => SlotBool::Or(Box::new(self.bool_expr(l)), Box::new(self.bool_expr(r))),
        }
    }

    fn num_expr(&self, e: &NumExpr) -> SlotNum {
        match e {
            NumExpr::Lit(v) => SlotNum::Lit(*v),
            NumExpr::Signal(s) => SlotNum::Slot(self.layout[s.as_str()].index),
            NumExpr::Neg(x) => SlotNum::Neg(Box::new(self.num_expr(x))),
            NumExpr::Add(l, r) => SlotNum::Add(Box::new(self.num_expr(l)), Box::new(self.num_expr(r))),
            NumExpr::Sub(l, r) => SlotNum::Sub(Box::new(self.num_expr(l)), Box::new(self.num_expr(r))),
            NumExpr::Mul(l, r) => SlotNum::Mul(Box::new(self.num_expr(l)), Box::new(self.num_expr(r))),
        }
    }
}

/// Compile a formula into a freshly initialised monitor.
pub fn compile(f: &Formula) -> Result<CompiledMonitor, MonitorError> {
    let kinds = f
        .signal_kinds()
        .map_err(|c| MonitorError::KindConflict(c.signal))?;
    let layout: BTreeMap<String, InputSlot> = kinds
        .into_iter()
        .enumerate()
        .map(|(index, (name, kind))| (name, InputSlot { index, kind }))
        .collect();

    let mut b = Builder {
        layout: &layout,
        plan: Vec::new(),
        states: Vec::new(),
    };
    b.build(f)?;
    let (plan, states) = (b.plan, b.states);

    let state = MonitorState { tick: 0, nodes: states };
    let inputs = layout
        .values()
        .map(|s| match s.kind {
            SignalKind::Bool => Value::Bool(false),
            SignalKind::Num => Value::Num(0.0),
        })
        .collect();
    Ok(CompiledMonitor {
        formula: f.clone(),
        values: vec![false; plan.len()],
        plan,
        initial: state.clone(),
        state,
        layout,
        inputs,
    })
}

impl CompiledMonitor {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Node evaluators, children before parents; the last one is the root.
    pub fn plan(&self) -> &[PlanNode] {
        &self.plan
    }

    pub fn state(&self) -> &MonitorState {
        &self.state
    }

    /// The state a fresh monitor starts from.
    pub fn initial_state(&self) -> &MonitorState {
        &self.initial
    }

    /// Signal name → input slot, in slot order.
    pub fn layout(&self) -> &BTreeMap<String, InputSlot> {
        &self.layout
    }

    /// Signal names in slot order.
    pub fn signals(&self) -> impl Iterator<Item = &str> {
        self.layout.keys().map(String::as_str)
    }

    /// Consume one tick of named inputs. Extra entries are ignored. On
    /// error the state is left untouched.
    pub fn step(&mut self, inputs: &Valuation) -> Result<bool, MonitorError> {
        for (name, slot) in &self.layout {
            let v = inputs
                .get(name)
                .ok_or_else(|| MonitorError::MissingSignal(name.clone()))?;
            if v.kind() != slot.kind {
                return Err(MonitorError::TypeMismatch {
                    name: name.clone(),
                    expected: slot.kind,
                    found: v.kind(),
                });
            }
            self.inputs[slot.index] = *v;
        }
        Ok(self.advance())
    }

    /// Consume one tick given values in slot order (see [`Self::signals`]).
    pub fn step_ordered(&mut self, inputs: &[Value]) -> Result<bool, MonitorError> {
        if inputs.len() < self.layout.len() {
            let missing = self.layout.keys().nth(inputs.len()).cloned().unwrap_or_default();
            return Err(MonitorError::MissingSignal(missing));
        }
        for ((name, slot), v) in self.layout.iter().zip(inputs) {
            if v.kind() != slot.kind {
                return Err(MonitorError::TypeMismatch {
                    name: name.clone(),
                    expected: slot.kind,
                    found: v.kind(),
                });
            }
        }
        self.inputs.copy_from_slice(&inputs[..self.layout.len()]);
        Ok(self.advance())
    }

    /// Restore the freshly compiled state.
    pub fn reset(&mut self) {
        self.state.restore(&self.initial);
    }

    /// Roll back to a state previously read from [`Self::state`] on this
    /// monitor.
    ///
    /// # Panics
    ///
    /// If the snapshot was taken from a monitor with a different layout.
    pub fn restore(&mut self, snapshot: &MonitorState) {
        assert!(
            snapshot.nodes.len() == self.state.nodes.len()
                && snapshot
                    .nodes
                    .iter()
                    .zip(&self.state.nodes)
                    .all(|(a, b)| std::mem::discriminant(a) == std::mem::discriminant(b)
                        && a.buffer_len() == b.buffer_len()),
            "snapshot does not belong to this monitor"
        );
        self.state.restore(snapshot);
    }

    fn advance(&mut self) -> bool {
        let vals = &mut self.values;
        let nodes = &mut self.state.nodes;
        for (idx, node) in self.plan.iter().enumerate() {
            let v = match node {
                PlanNode::Atom(e) => e.eval(&self.inputs),
                PlanNode::Not(c) => !vals[*c],
                PlanNode::And(l, r) => vals[*l] && vals[*r],
                PlanNode::Or(l, r) => vals[*l] || vals[*r],
                PlanNode::Implies(l, r) => !vals[*l] || vals[*r],
                PlanNode::Yesterday { child, state } | PlanNode::WeakYesterday { child, state } => {
                    match &mut nodes[*state] {
                        TemporalState::Prev { value } => std::mem::replace(value, vals[*child]),
                        other => unreachable!("yesterday node with {other:?}"),
                    }
                }
                PlanNode::Once { interval, child, state } => {
                    once_like(&mut nodes[*state], interval.lo(), vals[*child], false)
                }
                PlanNode::Historically { interval, child, state } => {
                    once_like(&mut nodes[*state], interval.lo(), vals[*child], true)
                }
                PlanNode::Since { interval, lhs, rhs, state } => {
                    since(&mut nodes[*state], interval, vals[*lhs], vals[*rhs])
                }
            };
            vals[idx] = v;
        }
        self.state.tick += 1;
        self.values.last().copied().unwrap_or(true)
    }
}

/// `O` tracks hits of the child; `H` is the dual, tracking hits of its
/// negation and holding when there are none.
fn once_like(st: &mut TemporalState, lo: u32, child: bool, historically: bool) -> bool {
    let hit = child != historically;
    let holds = match st {
        TemporalState::Latch { value } => {
            // The latch stores the operator's own value.
            *value = if historically { *value && child } else { *value || child };
            return *value;
        }
        TemporalState::FirstHit { seen, age } => {
            if *seen {
                if *age < lo {
                    *age += 1;
                }
            } else if hit {
                *seen = true;
                *age = 0;
            }
            *seen && *age >= lo
        }
        TemporalState::Window { buf, cursor, count } => push_window(buf, cursor, count, lo, hit) > 0,
        other => unreachable!("once/historically node with {other:?}"),
    };
    holds != historically
}

fn since(st: &mut TemporalState, interval: &Interval, p: bool, q: bool) -> bool {
    let lo = interval.lo();
    match st {
        TemporalState::Latch { value } => {
            *value = q || (p && *value);
            *value
        }
        TemporalState::SinceAge { valid, age } => {
            if !p {
                *valid = q;
                *age = 0;
            } else if *valid {
                if *age < lo {
                    *age += 1;
                }
            } else if q {
                *valid = true;
                *age = 0;
            }
            *valid && *age >= lo
        }
        TemporalState::SinceWindow {
            buf,
            cursor,
            run,
            recent,
        } => {
            let n = buf.len();
            let hi = n as u32 - 1;
            buf[*cursor as usize] = q;
            *cursor = ((*cursor as usize + 1) % n) as u32;
            let q_at_lo = buf[(*cursor as usize + 2 * n - 1 - lo as usize) % n];
            *recent = if q_at_lo { lo } else { (*recent + 1).min(hi + 1) };
            *run = if p { (*run + 1).min(hi + 1) } else { 0 };
            *recent <= hi && *recent <= *run
        }
        other => unreachable!("since node with {other:?}"),
    }
}

/// A monitor bound to a requirement id.
#[derive(Debug, Clone)]
pub struct NamedMonitor {
    pub id: String,
    pub monitor: CompiledMonitor,
}

/// Verdict of one requirement at one tick; `ok == false` is a violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub requirement_id: String,
    pub tick: u64,
    pub ok: bool,
}

impl NamedMonitor {
    pub fn new(id: impl Into<String>, f: &Formula) -> Result<Self, MonitorError> {
        Ok(NamedMonitor {
            id: id.into(),
            monitor: compile(f)?,
        })
    }

    pub fn step(&mut self, inputs: &Valuation) -> Result<Verdict, MonitorError> {
        let tick = self.monitor.state().tick();
        let ok = self.monitor.step(inputs)?;
        Ok(Verdict {
            requirement_id: self.id.clone(),
            tick,
            ok,
        })
    }
}
