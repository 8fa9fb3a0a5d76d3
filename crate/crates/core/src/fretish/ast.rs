//! Syntax tree for structured requirements and their expression sublanguage.

use std::fmt;

/// Applicability of a requirement.
#[derive(Debug, Clone, PartialEq)]
pub enum Scope {
    Global,
    /// Only assessed while the boolean mode signal holds.
    InMode(String),
}

/// Keyword used to introduce a trigger condition. Both flavors share
/// the same semantics; the distinction is kept for printing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionFlavor {
    When,
    Upon,
}

impl ConditionFlavor {
    pub fn keyword(self) -> &'static str {
        match self {
            ConditionFlavor::When => "when",
            ConditionFlavor::Upon => "upon",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub flavor: ConditionFlavor,
    pub expr: BoolExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Always,
    Never,
    /// Response must occur within `n` ticks of the trigger, `n >= 1`.
    Within(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }
}

/// Non-temporal boolean expression.
#[derive(Debug, Clone, PartialEq)]
pub enum BoolExpr {
    Lit(bool),
    Signal(String),
    Cmp(CmpOp, NumExpr, NumExpr),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

/// Unit-free arithmetic over numeric signals.
#[derive(Debug, Clone, PartialEq)]
pub enum NumExpr {
    Lit(f64),
    Signal(String),
    Neg(Box<NumExpr>),
    Add(Box<NumExpr>, Box<NumExpr>),
    Sub(Box<NumExpr>, Box<NumExpr>),
    Mul(Box<NumExpr>, Box<NumExpr>),
}

impl BoolExpr {
    pub fn signal(name: impl Into<String>) -> Self {
        BoolExpr::Signal(name.into())
    }

    pub fn cmp(op: CmpOp, lhs: NumExpr, rhs: NumExpr) -> Self {
        BoolExpr::Cmp(op, lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(l), Box::new(r))
    }

    /// Literals and bare signal references.
    pub fn is_atomic(&self) -> bool {
        matches!(self, BoolExpr::Lit(_) | BoolExpr::Signal(_))
    }

    /// Visit every signal reference, tagging whether it is used as a
    /// boolean (`true`) or numeric (`false`) operand.
    pub fn for_each_signal<'a>(&'a self, f: &mut impl FnMut(&'a str, bool)) {
        match self {
            BoolExpr::Lit(_) => {}
            BoolExpr::Signal(s) => f(s, true),
            BoolExpr::Cmp(_, l, r) => {
                l.for_each_signal(f);
                r.for_each_signal(f);
            }
            BoolExpr::Not(e) => e.for_each_signal(f),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.for_each_signal(f);
                r.for_each_signal(f);
            }
        }
    }

    /// Number of atoms (literals, signal references and comparisons).
    pub fn atom_count(&self) -> usize {
        match self {
            BoolExpr::Lit(_) | BoolExpr::Signal(_) | BoolExpr::Cmp(..) => 1,
            BoolExpr::Not(e) => e.atom_count(),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => l.atom_count() + r.atom_count(),
        }
    }
}

impl NumExpr {
    pub fn lit(v: f64) -> Self {
        NumExpr::Lit(v)
    }

    pub fn signal(name: impl Into<String>) -> Self {
        NumExpr::Signal(name.into())
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, NumExpr::Lit(_) | NumExpr::Signal(_))
    }

    pub fn for_each_signal<'a>(&'a self, f: &mut impl FnMut(&'a str, bool)) {
        match self {
            NumExpr::Lit(_) => {}
            NumExpr::Signal(s) => f(s, false),
            NumExpr::Neg(e) => e.for_each_signal(f),
            NumExpr::Add(l, r) | NumExpr::Sub(l, r) | NumExpr::Mul(l, r) => {
                l.for_each_signal(f);
                r.for_each_signal(f);
            }
        }
    }
}

/// A parsed requirement. The `shall` keyword carries no data.
#[derive(Debug, Clone, PartialEq)]
pub struct Requirement {
    pub id: String,
    pub source_text: String,
    pub scope: Scope,
    pub condition: Option<Condition>,
    pub component: String,
    pub timing: Timing,
    pub response: BoolExpr,
}

impl Requirement {
    /// Compare the five semantic fields, ignoring `id` and `source_text`.
    pub fn same_structure(&self, other: &Requirement) -> bool {
        self.scope == other.scope
            && self.condition == other.condition
            && self.component == other.component
            && self.timing == other.timing
            && self.response == other.response
    }
}

/// Line/column position, both 1-based; columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}
