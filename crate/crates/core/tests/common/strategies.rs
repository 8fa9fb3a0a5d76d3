//! proptest strategies for requirement syntax trees.

use proptest::prelude::*;
use reqmon::fretish::{
    is_reserved_word, BoolExpr, CmpOp, Condition, ConditionFlavor, NumExpr, Requirement, Scope, Timing,
};

pub fn identifier() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,11}".prop_filter("reserved word", |s| !is_reserved_word(s))
}

/// Finite, non-negative literals; a leading minus is unary negation.
fn literal() -> impl Strategy<Value = f64> {
    prop_oneof![
        (0u32..10_000).prop_map(f64::from),
        (0u32..100_000, 1u32..1000).prop_map(|(a, b)| f64::from(a) / f64::from(b)),
        (0.0f64..1e12),
    ]
}

pub fn num_expr() -> impl Strategy<Value = NumExpr> {
    let leaf = prop_oneof![literal().prop_map(NumExpr::Lit), identifier().prop_map(NumExpr::Signal)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| NumExpr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| NumExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| NumExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| NumExpr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge),
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
    ]
}

pub fn bool_expr() -> impl Strategy<Value = BoolExpr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(BoolExpr::Lit),
        identifier().prop_map(BoolExpr::Signal),
        (cmp_op(), num_expr(), num_expr()).prop_map(|(op, l, r)| BoolExpr::Cmp(op, l, r)),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| BoolExpr::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolExpr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| BoolExpr::Or(Box::new(a), Box::new(b))),
        ]
    })
}

pub fn requirement() -> impl Strategy<Value = Requirement> {
    let scope = prop_oneof![Just(Scope::Global), identifier().prop_map(Scope::InMode)];
    let flavor = prop_oneof![Just(ConditionFlavor::When), Just(ConditionFlavor::Upon)];
    let condition = proptest::option::of((flavor, bool_expr()).prop_map(|(flavor, expr)| Condition { flavor, expr }));
    let timing = prop_oneof![
        Just(Timing::Always),
        Just(Timing::Never),
        (1u32..100_000).prop_map(Timing::Within)
    ];
    (scope, condition, identifier(), timing, bool_expr()).prop_map(|(scope, condition, component, timing, response)| {
        Requirement {
            id: "GEN".into(),
            source_text: String::new(),
            scope,
            condition,
            component,
            timing,
            response,
        }
    })
}
