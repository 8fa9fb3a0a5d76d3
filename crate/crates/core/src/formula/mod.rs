//! Past-time metric temporal logic formulas over named signals.
//!
//! Temporal bounds count ticks. An interval `[lo, hi]` with `hi = None`
//! is unbounded; `[0, ∞)` is the untimed operator.

mod formalize;

pub use formalize::{formalize, FormalizeError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use thiserror::Error;

use crate::fretish::{print_bool, BoolExpr};
use crate::trace::SignalKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: u32,
    hi: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("interval lower bound {lo} exceeds upper bound {hi}")]
pub struct IntervalError {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub const UNTIMED: Interval = Interval { lo: 0, hi: None };

    pub fn new(lo: u32, hi: Option<u32>) -> Result<Self, IntervalError> {
        match hi {
            Some(hi) if hi < lo => Err(IntervalError { lo, hi }),
            _ => Ok(Interval { lo, hi }),
        }
    }

    pub fn bounded(lo: u32, hi: u32) -> Result<Self, IntervalError> {
        Self::new(lo, Some(hi))
    }

    pub fn from(lo: u32) -> Self {
        Interval { lo, hi: None }
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> Option<u32> {
        self.hi
    }

    pub fn is_untimed(self) -> bool {
        self == Self::UNTIMED
    }

    /// Whether `d` ticks into the past lies inside the interval.
    pub fn contains(self, d: u64) -> bool {
        d >= u64::from(self.lo) && self.hi.is_none_or(|hi| d <= u64::from(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(hi) => write!(f, "[{},{}]", self.lo, hi),
            None => write!(f, "[{},inf]", self.lo),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(BoolExpr),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Previous tick; false at tick 0.
    Yesterday(Box<Formula>),
    /// Previous tick; true at tick 0.
    WeakYesterday(Box<Formula>),
    Once(Interval, Box<Formula>),
    Historically(Interval, Box<Formula>),
    /// `Since(i, p, q)`: `q` held at some tick within `i` and `p` has held
    /// at every tick after it.
    Since(Interval, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Self {
        Formula::Atom(BoolExpr::Lit(true))
    }

    pub fn ff() -> Self {
        Formula::Atom(BoolExpr::Lit(false))
    }

    pub fn signal(name: impl Into<String>) -> Self {
        Formula::Atom(BoolExpr::Signal(name.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn yesterday(f: Formula) -> Self {
        Formula::Yesterday(Box::new(f))
    }

    pub fn weak_yesterday(f: Formula) -> Self {
        Formula::WeakYesterday(Box::new(f))
    }

    pub fn once(i: Interval, f: Formula) -> Self {
        Formula::Once(i, Box::new(f))
    }

    pub fn historically(i: Interval, f: Formula) -> Self {
        Formula::Historically(i, Box::new(f))
    }

    pub fn since(i: Interval, p: Formula, q: Formula) -> Self {
        Formula::Since(i, Box::new(p), Box::new(q))
    }

    /// Constant value of an `Atom(Lit(_))`.
    pub fn as_const(&self) -> Option<bool> {
        match self {
            Formula::Atom(BoolExpr::Lit(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(f)
            | Formula::Yesterday(f)
            | Formula::WeakYesterday(f)
            | Formula::Once(_, f)
            | Formula::Historically(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Since(_, l, r) => {
                vec![l, r]
            }
        }
    }

    /// Operator nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Yesterday(_)
                | Formula::WeakYesterday(_)
                | Formula::Once(..)
                | Formula::Historically(..)
                | Formula::Since(..)
        )
    }

    /// Every signal referenced anywhere in the formula.
    pub fn free_signals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |e| e.for_each_signal(&mut |s, _| {
            out.insert(s.to_string());
        }));
        out
    }

    /// Infer each signal's kind from how it is used. A signal used both as
    /// a boolean and as a number is an error.
    pub fn signal_kinds(&self) -> Result<BTreeMap<String, SignalKind>, KindConflict> {
        let mut kinds: BTreeMap<String, SignalKind> = BTreeMap::new();
        let mut conflict = None;
        self.visit_atoms(&mut |e| {
            e.for_each_signal(&mut |s, is_bool| {
                let kind = if is_bool { SignalKind::Bool } else { SignalKind::Num };
                match kinds.get(s) {
                    Some(k) if *k != kind => {
                        conflict.get_or_insert_with(|| KindConflict { signal: s.to_string() });
                    }
                    Some(_) => {}
                    None => {
                        kinds.insert(s.to_string(), kind);
                    }
                }
            })
        });
        match conflict {
            Some(c) => Err(c),
            None => Ok(kinds),
        }
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a BoolExpr)) {
        match self {
            Formula::Atom(e) => f(e),
            _ => {
                for c in self.children() {
                    c.visit_atoms(f);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("signal `{signal}` is used both as a boolean and as a number")]
pub struct KindConflict {
    pub signal: String,
}

/// Collect the signal identifiers of a formula.
pub fn free_signals(f: &Formula) -> BTreeSet<String> {
    f.free_signals()
}

/// Canonical text: `H[lo,hi]`, `O[lo,hi]`, `S[lo,hi]`, `Y`, `Z`, `!`, `&`,
/// `|`, `->`; untimed operators omit the brackets and every operand is
/// parenthesized.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let bounds = |i: &Interval| if i.is_untimed() { String::new() } else { i.to_string() };
    match f {
        Formula::Atom(e) => out.push_str(&print_bool(e)),
        Formula::Not(g) => {
            out.push('!');
            operand(out, g);
        }
        Formula::And(l, r) => binary(out, l, " & ", r),
        Formula::Or(l, r) => binary(out, l, " | ", r),
        Formula::Implies(l, r) => binary(out, l, " -> ", r),
        Formula::Yesterday(g) => {
            out.push_str("Y ");
            operand(out, g);
        }
        Formula::WeakYesterday(g) => {
            out.push_str("Z ");
            operand(out, g);
        }
        Formula::Once(i, g) => {
            let _ = write!(out, "O{} ", bounds(i));
            operand(out, g);
        }
        Formula::Historically(i, g) => {
            let _ = write!(out, "H{} ", bounds(i));
            operand(out, g);
        }
        Formula::Since(i, l, r) => binary(out, l, &format!(" S{} ", bounds(i)), r),
    }
}

fn binary(out: &mut String, l: &Formula, op: &str, r: &Formula) {
    operand(out, l);
    out.push_str(op);
    operand(out, r);
}

fn operand(out: &mut String, f: &Formula) {
    out.push('(');
    write_formula(out, f);
    out.push(')');
}
