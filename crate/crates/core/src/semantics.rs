//! Reference finite-trace semantics.
//!
//! Each operator is evaluated straight from its definition over the whole
//! prefix `[0..=t]`, without any incremental state. This is the ground
//! truth the streaming engine and the emitted C are tested against.
//!
//! * `Y p @t`   = `t >= 1 && p@(t-1)`; `Z p @t` = `t == 0 || p@(t-1)`
//! * `O[lo,hi] p @t` = ∃ d ∈ [lo, min(hi,t)]. `p@(t-d)`
//! * `H[lo,hi] p @t` = ∀ d ∈ [lo, min(hi,t)]. `p@(t-d)` (vacuous if lo > t)
//! * `p S[lo,hi] q @t` = ∃ d ∈ [lo, min(hi,t)]. `q@(t-d)` and `p@s` for all s ∈ (t-d, t]

use thiserror::Error;

use crate::formula::{Formula, Interval};
use crate::fretish::{BoolExpr, NumExpr};
use crate::trace::{SignalKind, Trace, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("missing signal `{0}`")]
    MissingSignal(String),
    #[error("signal `{name}` is {found}, expected {expected}")]
    TypeMismatch {
        name: String,
        expected: SignalKind,
        found: SignalKind,
    },
    #[error("signal `{0}` is used both as a boolean and as a number")]
    KindConflict(String),
    #[error("tick {tick} is outside the trace (length {len})")]
    TickOutOfRange { tick: usize, len: usize },
}

fn lookup(trace: &Trace, name: &str, t: usize, expected: SignalKind) -> Result<Value, EvalError> {
    let col = trace
        .column(name)
        .ok_or_else(|| EvalError::MissingSignal(name.to_string()))?;
    if col.kind() != expected {
        return Err(EvalError::TypeMismatch {
            name: name.to_string(),
            expected,
            found: col.kind(),
        });
    }
    col.get(t).ok_or(EvalError::TickOutOfRange { tick: t, len: trace.len() })
}

pub fn eval_num(e: &NumExpr, trace: &Trace, t: usize) -> Result<f64, EvalError> {
    Ok(match e {
        NumExpr::Lit(v) => *v,
        NumExpr::Signal(s) => lookup(trace, s, t, SignalKind::Num)?.as_num().unwrap_or_default(),
        NumExpr::Neg(x) => -eval_num(x, trace, t)?,
        NumExpr::Add(l, r) => eval_num(l, trace, t)? + eval_num(r, trace, t)?,
        NumExpr::Sub(l, r) => eval_num(l, trace, t)? - eval_num(r, trace, t)?,
        NumExpr::Mul(l, r) => eval_num(l, trace, t)? * eval_num(r, trace, t)?,
    })
}

/// Evaluate a non-temporal expression at tick `t`.
pub fn eval_expr(e: &BoolExpr, trace: &Trace, t: usize) -> Result<bool, EvalError> {
    Ok(match e {
        BoolExpr::Lit(b) => *b,
        BoolExpr::Signal(s) => lookup(trace, s, t, SignalKind::Bool)?.as_bool().unwrap_or_default(),
        BoolExpr::Cmp(op, l, r) => op.apply(eval_num(l, trace, t)?, eval_num(r, trace, t)?),
        BoolExpr::Not(x) => !eval_expr(x, trace, t)?,
        BoolExpr::And(l, r) => {
            let l = eval_expr(l, trace, t)?;
            let r = eval_expr(r, trace, t)?;
            l && r
        }
        BoolExpr::Or(l, r) => {
            let l = eval_expr(l, trace, t)?;
            let r = eval_expr(r, trace, t)?;
            l || r
        }
    })
}

/// Check that every signal of `f` is present in `trace` with the kind its
/// use requires.
pub fn check_coverage(f: &Formula, trace: &Trace) -> Result<(), EvalError> {
    let kinds = f
        .signal_kinds()
        .map_err(|c| EvalError::KindConflict(c.signal))?;
    for (name, kind) in kinds {
        let col = trace.column(&name).ok_or_else(|| EvalError::MissingSignal(name.clone()))?;
        if col.kind() != kind {
            return Err(EvalError::TypeMismatch {
                name,
                expected: kind,
                found: col.kind(),
            });
        }
    }
    Ok(())
}

/// Truth of `f` at tick `t`.
pub fn eval_formula(f: &Formula, trace: &Trace, t: usize) -> Result<bool, EvalError> {
    if t >= trace.len() {
        return Err(EvalError::TickOutOfRange { tick: t, len: trace.len() });
    }
    check_coverage(f, trace)?;
    Ok(column(f, trace, t + 1)?[t])
}

/// Verdict at every tick of the trace.
pub fn verdict_stream(f: &Formula, trace: &Trace) -> Result<Vec<bool>, EvalError> {
    check_coverage(f, trace)?;
    column(f, trace, trace.len())
}

fn window(i: Interval, t: usize) -> std::ops::RangeInclusive<usize> {
    let lo = i.lo() as usize;
    let hi = i.hi().map_or(t, |h| (h as usize).min(t));
    lo..=hi
}

/// Values of `f` on ticks `0..n`.
fn column(f: &Formula, trace: &Trace, n: usize) -> Result<Vec<bool>, EvalError> {
    Ok(match f {
        Formula::Atom(e) => (0..n).map(|t| eval_expr(e, trace, t)).collect::<Result<_, _>>()?,
        Formula::Not(g) => column(g, trace, n)?.into_iter().map(|v| !v).collect(),
        Formula::And(l, r) => zip(column(l, trace, n)?, column(r, trace, n)?, |a, b| a && b),
        Formula::Or(l, r) => zip(column(l, trace, n)?, column(r, trace, n)?, |a, b| a || b),
        Formula::Implies(l, r) => zip(column(l, trace, n)?, column(r, trace, n)?, |a, b| !a || b),
        Formula::Yesterday(g) => {
            let c = column(g, trace, n)?;
            (0..n).map(|t| t >= 1 && c[t - 1]).collect()
        }
        Formula::WeakYesterday(g) => {
            let c = column(g, trace, n)?;
            (0..n).map(|t| t == 0 || c[t - 1]).collect()
        }
        Formula::Once(i, g) => {
            let c = column(g, trace, n)?;
            (0..n).map(|t| window(*i, t).any(|d| c[t - d])).collect()
        }
        Formula::Historically(i, g) => {
            let c = column(g, trace, n)?;
            (0..n).map(|t| window(*i, t).all(|d| c[t - d])).collect()
        }
        Formula::Since(i, p, q) => {
            let (p, q) = (column(p, trace, n)?, column(q, trace, n)?);
            (0..n)
                .map(|t| {
                    let w = window(*i, t);
                    // Walk d upward; p must hold on (t-d, t], so the first
                    // p-gap ends the search.
                    for d in 0..=*w.end() {
                        if d >= 1 && !p[t - d + 1] {
                            return false;
                        }
                        if w.contains(&d) && q[t - d] {
                            return true;
                        }
                    }
                    false
                })
                .collect()
        }
    })
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}
