//! Canonical single-line rendering of requirements and expressions.
//!
//! Every non-atomic operand of a binary or unary operator is wrapped in
//! parentheses, which makes re-parsing the output reproduce the tree
//! exactly.

use std::fmt::Write;

use super::ast::*;

pub fn print_requirement(req: &Requirement) -> String {
    let mut out = String::new();
    if let Scope::InMode(mode) = &req.scope {
        let _ = write!(out, "in {mode} mode ");
    }
    if let Some(cond) = &req.condition {
        let _ = write!(out, "{} {}, ", cond.flavor.keyword(), print_bool(&cond.expr));
    }
    let _ = write!(out, "the {} shall ", req.component);
    match req.timing {
        Timing::Always => out.push_str("always"),
        Timing::Never => out.push_str("never"),
        Timing::Within(n) => {
            let _ = write!(out, "within {n} ticks");
        }
    }
    let _ = write!(out, " satisfy {}", print_bool(&req.response));
    out
}

pub fn print_bool(e: &BoolExpr) -> String {
    let mut out = String::new();
    write_bool(&mut out, e);
    out
}

pub fn print_num(e: &NumExpr) -> String {
    let mut out = String::new();
    write_num(&mut out, e);
    out
}

fn write_bool(out: &mut String, e: &BoolExpr) {
    match e {
        BoolExpr::Lit(b) => out.push_str(if *b { "true" } else { "false" }),
        BoolExpr::Signal(s) => out.push_str(s),
        BoolExpr::Cmp(op, l, r) => {
            write_num(out, l);
            let _ = write!(out, " {} ", op.symbol());
            write_num(out, r);
        }
        BoolExpr::Not(inner) => {
            out.push('!');
            bool_operand(out, inner);
        }
        BoolExpr::And(l, r) => {
            bool_operand(out, l);
            out.push_str(" & ");
            bool_operand(out, r);
        }
        BoolExpr::Or(l, r) => {
            bool_operand(out, l);
            out.push_str(" | ");
            bool_operand(out, r);
        }
    }
}

fn bool_operand(out: &mut String, e: &BoolExpr) {
    if e.is_atomic() {
        write_bool(out, e);
    } else {
        out.push('(');
        write_bool(out, e);
        out.push(')');
    }
}

/// Shortest decimal that parses back to the same value; never uses an
/// exponent.
pub(crate) fn format_number(v: f64) -> String {
    format!("{v}")
}

fn write_num(out: &mut String, e: &NumExpr) {
    match e {
        NumExpr::Lit(v) => out.push_str(&format_number(*v)),
        NumExpr::Signal(s) => out.push_str(s),
        NumExpr::Neg(inner) => {
            out.push('-');
            num_operand(out, inner);
        }
        NumExpr::Add(l, r) => binary_num(out, l, "+", r),
        NumExpr::Sub(l, r) => binary_num(out, l, "-", r),
        NumExpr::Mul(l, r) => binary_num(out, l, "*", r),
    }
}

fn binary_num(out: &mut String, l: &NumExpr, op: &str, r: &NumExpr) {
    num_operand(out, l);
    let _ = write!(out, " {op} ");
    num_operand(out, r);
}

fn num_operand(out: &mut String, e: &NumExpr) {
    if e.is_atomic() {
        write_num(out, e);
    } else {
        out.push('(');
        write_num(out, e);
        out.push(')');
    }
}
