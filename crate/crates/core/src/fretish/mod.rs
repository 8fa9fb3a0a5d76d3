//! The structured requirement language.
//!
//! A requirement has up to six fields in fixed order:
//!
//! ```text
//! requirement := [scope] [condition] ["the"] component "shall" [timing] "satisfy" boolexpr
//! scope       := "in" identifier ["mode"]
//! condition   := ("when" | "upon") boolexpr [","]
//! timing      := "always" | "never" | "within" integer "ticks"
//! ```
//!
//! An omitted timing means `always`. Keywords and identifiers are
//! case-sensitive; numbers carry no units.

mod ast;
mod lexer;
mod parser;
mod print;

pub use ast::*;
pub use lexer::{is_reserved_word, tokenize, Keyword, Token, TokenKind};
pub use print::{print_bool, print_num, print_requirement};

pub(crate) use print::format_number;

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FretishError {
    #[error("lex error at {pos}: {message}")]
    Lex { pos: Pos, message: String },
    #[error("parse error at {pos}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("invalid requirement at {pos}: {message}")]
    Invalid { pos: Pos, message: String },
    #[error("line {line}: duplicate requirement id `{id}`")]
    DuplicateId { line: u32, id: String },
}

impl FretishError {
    pub fn pos(&self) -> Pos {
        match self {
            FretishError::Lex { pos, .. }
            | FretishError::Parse { pos, .. }
            | FretishError::Invalid { pos, .. } => *pos,
            FretishError::DuplicateId { line, .. } => Pos { line: *line, column: 1 },
        }
    }

    fn on_line(mut self, line: u32) -> Self {
        match &mut self {
            FretishError::Lex { pos, .. }
            | FretishError::Parse { pos, .. }
            | FretishError::Invalid { pos, .. } => pos.line = line,
            FretishError::DuplicateId { .. } => {}
        }
        self
    }
}

/// Parse one requirement sentence.
pub fn parse_requirement(source: &str, id: &str) -> Result<Requirement, FretishError> {
    let mut p = parser::Parser::new(source)?;
    p.requirement(id, source)
}

/// Parse a standalone boolean expression (used by templates and tests).
pub fn parse_bool_expr(source: &str) -> Result<BoolExpr, FretishError> {
    let mut p = parser::Parser::new(source)?;
    let e = p.bool_expr()?;
    p.finish()?;
    Ok(e)
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Parse a `.frt` requirements file: one requirement per non-empty line,
/// `#` comments, optional `LABEL:` prefix. Unlabelled requirements are
/// named `REQ-n` where `n` is their 1-based position among the file's
/// requirements.
pub fn parse_requirements_file(text: &str) -> Result<Vec<Requirement>, FretishError> {
    let mut reqs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (id, body) = match content.split_once(':') {
            Some((label, rest)) if is_label(label.trim()) => {
                // Blank out the label so error columns still match the line.
                let blanked = " ".repeat(label.chars().count() + 1) + rest;
                (label.trim().to_string(), blanked)
            }
            _ => (format!("REQ-{}", reqs.len() + 1), content.to_string()),
        };
        let mut req = parse_requirement(&body, &id).map_err(|e| e.on_line(line_no))?;
        req.source_text = body.trim().to_string();
        if !seen.insert(id.clone()) {
            return Err(FretishError::DuplicateId { line: line_no, id });
        }
        reqs.push(req);
    }
    Ok(reqs)
}
