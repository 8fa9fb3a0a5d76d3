//! Requirement → past-time formula translation.
//!
//! With `M` the mode atom (`true` for global scope), `c` the trigger and
//! `R` the response:
//!
//! | condition | timing   | formula                                         |
//! |-----------|----------|-------------------------------------------------|
//! | none      | always   | `H (M -> R)`                                    |
//! | none      | never    | `H (M -> !R)`                                   |
//! | c         | always   | `H ((M S (M & c)) -> R)`                        |
//! | c         | never    | `H ((M S (M & c)) -> !R)`                       |
//! | c         | within n | `H !((M & !R) S[n,inf] ((M & c) & !R))`         |
//!
//! A deadline without a trigger has no start point and is rejected.
//! Boolean constants are folded after instantiation.

use thiserror::Error;

use super::{Formula, Interval};
use crate::fretish::{BoolExpr, Requirement, Scope, Timing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormalizeError {
    #[error("requirement `{id}` is not monitorable: {reason}")]
    NonMonitorable { id: String, reason: String },
}

pub fn formalize(req: &Requirement) -> Result<Formula, FormalizeError> {
    let mode = match &req.scope {
        Scope::Global => Formula::tt(),
        Scope::InMode(m) => Formula::signal(m.clone()),
    };
    let response = Formula::Atom(req.response.clone());
    let body = match (&req.condition, req.timing) {
        (None, Timing::Always) => Formula::implies(mode, response),
        (None, Timing::Never) => Formula::implies(mode, Formula::not(response)),
        (None, Timing::Within(_)) => {
            return Err(FormalizeError::NonMonitorable {
                id: req.id.clone(),
                reason: "a `within` deadline needs a `when`/`upon` trigger".into(),
            })
        }
        (Some(cond), timing) => {
            let trigger = Formula::and(mode.clone(), Formula::Atom(cond.expr.clone()));
            match timing {
                Timing::Always => Formula::implies(Formula::since(Interval::UNTIMED, mode, trigger), response),
                Timing::Never => Formula::implies(
                    Formula::since(Interval::UNTIMED, mode, trigger),
                    Formula::not(response),
                ),
                Timing::Within(n) => {
                    let pending = Formula::and(mode, Formula::not(response.clone()));
                    let unanswered = Formula::and(trigger, Formula::not(response));
                    Formula::not(Formula::since(Interval::from(n), pending, unanswered))
                }
            }
        }
    };
    Ok(fold(Formula::historically(Interval::UNTIMED, body)))
}

/// Bottom-up boolean constant folding.
pub(crate) fn fold(f: Formula) -> Formula {
    use Formula::*;
    let c = |b: bool| Atom(BoolExpr::Lit(b));
    match f {
        Atom(e) => Atom(e),
        Not(g) => {
            let g = fold(*g);
            match g.as_const() {
                Some(b) => c(!b),
                None => Formula::not(g),
            }
        }
        And(l, r) => {
            let (l, r) = (fold(*l), fold(*r));
            match (l.as_const(), r.as_const()) {
                (Some(false), _) | (_, Some(false)) => c(false),
                (Some(true), _) => r,
                (_, Some(true)) => l,
                _ => Formula::and(l, r),
            }
        }
        Or(l, r) => {
            let (l, r) = (fold(*l), fold(*r));
            match (l.as_const(), r.as_const()) {
                (Some(true), _) | (_, Some(true)) => c(true),
                (Some(false), _) => r,
                (_, Some(false)) => l,
                _ => Formula::or(l, r),
            }
        }
        Implies(l, r) => {
            let (l, r) = (fold(*l), fold(*r));
            match (l.as_const(), r.as_const()) {
                (Some(true), _) => r,
                (Some(false), _) | (_, Some(true)) => c(true),
                (_, Some(false)) => fold(Formula::not(l)),
                _ => Formula::implies(l, r),
            }
        }
        Yesterday(g) => match fold(*g) {
            g if g.as_const() == Some(false) => g,
            g => Formula::yesterday(g),
        },
        WeakYesterday(g) => match fold(*g) {
            g if g.as_const() == Some(true) => g,
            g => Formula::weak_yesterday(g),
        },
        Once(i, g) => match (fold(*g), i.lo()) {
            (g, _) if g.as_const() == Some(false) => g,
            (g, 0) if g.as_const() == Some(true) => g,
            (g, _) => Formula::once(i, g),
        },
        Historically(i, g) => match (fold(*g), i.lo()) {
            (g, _) if g.as_const() == Some(true) => g,
            (g, 0) if g.as_const() == Some(false) => g,
            (g, _) => Formula::historically(i, g),
        },
        Since(i, p, q) => {
            let (p, q) = (fold(*p), fold(*q));
            if q.as_const() == Some(false) {
                q
            } else {
                Formula::since(i, p, q)
            }
        }
    }
}
