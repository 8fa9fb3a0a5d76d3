//! Recursive descent parser producing [`Requirement`]s.
//!
//! Expressions are first parsed into an untyped tree with the usual
//! precedence (`!` > `&` > `|`, comparisons below arithmetic) and then
//! split into boolean and numeric parts, so `(a > 1) > 2` is rejected with
//! the position of the offending operand.

use super::ast::*;
use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::FretishError;

/// Untyped expression produced before boolean/numeric classification.
#[derive(Debug)]
enum Raw {
    Num(f64),
    Bool(bool),
    Ident(String),
    Not(Box<Spanned>),
    And(Box<Spanned>, Box<Spanned>),
    Or(Box<Spanned>, Box<Spanned>),
    Cmp(CmpOp, Box<Spanned>, Box<Spanned>),
    Neg(Box<Spanned>),
    Add(Box<Spanned>, Box<Spanned>),
    Sub(Box<Spanned>, Box<Spanned>),
    Mul(Box<Spanned>, Box<Spanned>),
}

#[derive(Debug)]
struct Spanned {
    raw: Raw,
    pos: Pos,
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end: Pos,
}

impl Parser {
    pub(crate) fn new(source: &str) -> Result<Self, FretishError> {
        let tokens = tokenize(source)?;
        let end = match tokens.last() {
            Some(t) => Pos {
                line: t.pos.line,
                column: t.pos.column + t.text.chars().count() as u32,
            },
            None => Pos::START,
        };
        Ok(Parser { tokens, idx: 0, end })
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.idx).map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.idx).map_or(self.end, |t| t.pos)
    }

    fn advance(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.idx);
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Kw(kw))
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        if self.at_kw(kw) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> FretishError {
        FretishError::Parse {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |k| k.to_string()),
        }
    }

    fn expect_kw(&mut self, kw: Keyword, also: &[&str]) -> Result<(), FretishError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            let mut exp: Vec<String> = also.iter().map(|s| s.to_string()).collect();
            exp.push(format!("`{}`", kw.as_str()));
            Err(FretishError::Parse {
                pos: self.pos(),
                expected: exp,
                found: self
                    .peek()
                    .map_or_else(|| "end of input".to_string(), |k| k.to_string()),
            })
        }
    }

    fn ident(&mut self, expected: &[&str]) -> Result<String, FretishError> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.idx += 1;
                Ok(name)
            }
            _ => Err(self.error(expected)),
        }
    }

    pub(crate) fn requirement(&mut self, id: &str, source: &str) -> Result<Requirement, FretishError> {
        let scope = if self.eat_kw(Keyword::In) {
            let mode = self.ident(&["mode identifier"])?;
            self.eat_kw(Keyword::Mode);
            Scope::InMode(mode)
        } else {
            Scope::Global
        };

        let flavor = if self.eat_kw(Keyword::When) {
            Some(ConditionFlavor::When)
        } else if self.eat_kw(Keyword::Upon) {
            Some(ConditionFlavor::Upon)
        } else {
            None
        };
        let condition = match flavor {
            Some(flavor) => {
                let expr = self.bool_expr()?;
                if self.peek() == Some(&TokenKind::Comma) {
                    self.idx += 1;
                }
                Some(Condition { flavor, expr })
            }
            None => None,
        };

        let has_the = self.eat_kw(Keyword::The);
        let component = if has_the {
            self.ident(&["component identifier"])?
        } else {
            let mut expected = Vec::new();
            if scope == Scope::Global && condition.is_none() {
                expected.push("`in`");
            }
            if condition.is_none() {
                expected.extend(["`when`", "`upon`"]);
            }
            expected.extend(["`the`", "component identifier"]);
            self.ident(&expected)?
        };

        self.expect_kw(Keyword::Shall, &[])?;

        let timing = if self.eat_kw(Keyword::Always) {
            Timing::Always
        } else if self.eat_kw(Keyword::Never) {
            Timing::Never
        } else if self.at_kw(Keyword::Within) {
            self.idx += 1;
            let pos = self.pos();
            if !matches!(self.peek(), Some(TokenKind::Number(_))) {
                return Err(self.error(&["tick count"]));
            }
            let n = self.advance().map(|t| t.text.clone()).unwrap_or_default();
            let ticks: u32 = n.parse().map_err(|_| FretishError::Invalid {
                pos,
                message: format!("tick count `{n}` must be a positive integer"),
            })?;
            if ticks == 0 {
                return Err(FretishError::Invalid {
                    pos,
                    message: "tick count must be at least 1".into(),
                });
            }
            self.expect_kw(Keyword::Ticks, &[])?;
            Timing::Within(ticks)
        } else {
            Timing::Always
        };

        self.expect_kw(Keyword::Satisfy, &["`always`", "`never`", "`within`"])?;
        let response = self.bool_expr()?;
        if self.peek().is_some() {
            return Err(self.error(&["end of input"]));
        }

        Ok(Requirement {
            id: id.to_string(),
            source_text: source.to_string(),
            scope,
            condition,
            component,
            timing,
            response,
        })
    }

    pub(crate) fn bool_expr(&mut self) -> Result<BoolExpr, FretishError> {
        let raw = self.or()?;
        to_bool(raw)
    }

    pub(crate) fn finish(&self) -> Result<(), FretishError> {
        if self.peek().is_some() {
            Err(self.error(&["end of input"]))
        } else {
            Ok(())
        }
    }

    fn or(&mut self) -> Result<Spanned, FretishError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&TokenKind::Or) {
            self.idx += 1;
            let rhs = self.and()?;
            let pos = lhs.pos;
            lhs = Spanned {
                raw: Raw::Or(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Spanned, FretishError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&TokenKind::And) {
            self.idx += 1;
            let rhs = self.unary()?;
            let pos = lhs.pos;
            lhs = Spanned {
                raw: Raw::And(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Spanned, FretishError> {
        if self.peek() == Some(&TokenKind::Not) {
            let pos = self.pos();
            self.idx += 1;
            let inner = self.unary()?;
            return Ok(Spanned {
                raw: Raw::Not(Box::new(inner)),
                pos,
            });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Spanned, FretishError> {
        let lhs = self.sum()?;
        let op = match self.peek() {
            Some(TokenKind::Lt) => CmpOp::Lt,
            Some(TokenKind::Le) => CmpOp::Le,
            Some(TokenKind::Gt) => CmpOp::Gt,
            Some(TokenKind::Ge) => CmpOp::Ge,
            Some(TokenKind::EqEq) => CmpOp::Eq,
            Some(TokenKind::Ne) => CmpOp::Ne,
            _ => return Ok(lhs),
        };
        self.idx += 1;
        let rhs = self.sum()?;
        if matches!(
            self.peek(),
            Some(TokenKind::Lt | TokenKind::Le | TokenKind::Gt | TokenKind::Ge | TokenKind::EqEq | TokenKind::Ne)
        ) {
            return Err(FretishError::Invalid {
                pos: self.pos(),
                message: "comparisons cannot be chained; add parentheses".into(),
            });
        }
        let pos = lhs.pos;
        Ok(Spanned {
            raw: Raw::Cmp(op, Box::new(lhs), Box::new(rhs)),
            pos,
        })
    }

    fn sum(&mut self) -> Result<Spanned, FretishError> {
        let mut lhs = self.product()?;
        loop {
            let plus = match self.peek() {
                Some(TokenKind::Plus) => true,
                Some(TokenKind::Minus) => false,
                _ => return Ok(lhs),
            };
            self.idx += 1;
            let rhs = self.product()?;
            let pos = lhs.pos;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            lhs = Spanned {
                raw: if plus { Raw::Add(l, r) } else { Raw::Sub(l, r) },
                pos,
            };
        }
    }

    fn product(&mut self) -> Result<Spanned, FretishError> {
        let mut lhs = self.negation()?;
        while self.peek() == Some(&TokenKind::Star) {
            self.idx += 1;
            let rhs = self.negation()?;
            let pos = lhs.pos;
            lhs = Spanned {
                raw: Raw::Mul(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Spanned, FretishError> {
        if self.peek() == Some(&TokenKind::Minus) {
            let pos = self.pos();
            self.idx += 1;
            let inner = self.negation()?;
            return Ok(Spanned {
                raw: Raw::Neg(Box::new(inner)),
                pos,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Spanned, FretishError> {
        let pos = self.pos();
        let raw = match self.peek() {
            Some(TokenKind::Number(n)) => Raw::Num(*n),
            Some(TokenKind::Ident(name)) => Raw::Ident(name.clone()),
            Some(TokenKind::Kw(Keyword::True)) => Raw::Bool(true),
            Some(TokenKind::Kw(Keyword::False)) => Raw::Bool(false),
            Some(TokenKind::LParen) => {
                self.idx += 1;
                let inner = self.or()?;
                if self.peek() != Some(&TokenKind::RParen) {
                    return Err(self.error(&["`)`"]));
                }
                self.idx += 1;
                return Ok(inner);
            }
            _ => {
                return Err(self.error(&["identifier", "number", "`true`", "`false`", "`(`", "`!`", "`-`"]));
            }
        };
        self.idx += 1;
        Ok(Spanned { raw, pos })
    }
}

fn type_error(pos: Pos, expected: &str, found: &str) -> FretishError {
    FretishError::Parse {
        pos,
        expected: vec![expected.to_string()],
        found: found.to_string(),
    }
}

fn to_bool(e: Spanned) -> Result<BoolExpr, FretishError> {
    Ok(match e.raw {
        Raw::Bool(b) => BoolExpr::Lit(b),
        Raw::Ident(name) => BoolExpr::Signal(name),
        Raw::Not(inner) => BoolExpr::Not(Box::new(to_bool(*inner)?)),
        Raw::And(l, r) => BoolExpr::And(Box::new(to_bool(*l)?), Box::new(to_bool(*r)?)),
        Raw::Or(l, r) => BoolExpr::Or(Box::new(to_bool(*l)?), Box::new(to_bool(*r)?)),
        Raw::Cmp(op, l, r) => BoolExpr::Cmp(op, to_num(*l)?, to_num(*r)?),
        Raw::Num(_) | Raw::Neg(_) | Raw::Add(..) | Raw::Sub(..) | Raw::Mul(..) => {
            return Err(type_error(e.pos, "boolean expression", "numeric expression"))
        }
    })
}

fn to_num(e: Spanned) -> Result<NumExpr, FretishError> {
    Ok(match e.raw {
        Raw::Num(v) => NumExpr::Lit(v),
        Raw::Ident(name) => NumExpr::Signal(name),
        Raw::Neg(inner) => NumExpr::Neg(Box::new(to_num(*inner)?)),
        Raw::Add(l, r) => NumExpr::Add(Box::new(to_num(*l)?), Box::new(to_num(*r)?)),
        Raw::Sub(l, r) => NumExpr::Sub(Box::new(to_num(*l)?), Box::new(to_num(*r)?)),
        Raw::Mul(l, r) => NumExpr::Mul(Box::new(to_num(*l)?), Box::new(to_num(*r)?)),
        Raw::Bool(_) | Raw::Not(_) | Raw::And(..) | Raw::Or(..) | Raw::Cmp(..) => {
            return Err(type_error(e.pos, "numeric expression", "boolean expression"))
        }
    })
}
