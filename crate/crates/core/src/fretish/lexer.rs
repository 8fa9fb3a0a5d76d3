//! Tokenizer for the requirement language.

use std::fmt;

use super::ast::Pos;
use super::FretishError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    In,
    Mode,
    When,
    Upon,
    The,
    Shall,
    Always,
    Never,
    Within,
    Ticks,
    Satisfy,
    True,
    False,
}

impl Keyword {
    pub fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "in" => Keyword::In,
            "mode" => Keyword::Mode,
            "when" => Keyword::When,
            "upon" => Keyword::Upon,
            "the" => Keyword::The,
            "shall" => Keyword::Shall,
            "always" => Keyword::Always,
            "never" => Keyword::Never,
            "within" => Keyword::Within,
            "ticks" => Keyword::Ticks,
            "satisfy" => Keyword::Satisfy,
            "true" => Keyword::True,
            "false" => Keyword::False,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::In => "in",
            Keyword::Mode => "mode",
            Keyword::When => "when",
            Keyword::Upon => "upon",
            Keyword::The => "the",
            Keyword::Shall => "shall",
            Keyword::Always => "always",
            Keyword::Never => "never",
            Keyword::Within => "within",
            Keyword::Ticks => "ticks",
            Keyword::Satisfy => "satisfy",
            Keyword::True => "true",
            Keyword::False => "false",
        }
    }
}

/// Words that can never be identifiers: the keyword table plus the
/// spelled-out logical connectives.
pub fn is_reserved_word(word: &str) -> bool {
    Keyword::from_word(word).is_some() || matches!(word, "and" | "or" | "not")
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Kw(Keyword),
    Ident(String),
    Number(f64),
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    /// `&` or `and`
    And,
    /// `|` or `or`
    Or,
    /// `!` or `not`
    Not,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Kw(k) => write!(f, "`{}`", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Number(n) => write!(f, "number `{n}`"),
            TokenKind::Lt => f.write_str("`<`"),
            TokenKind::Le => f.write_str("`<=`"),
            TokenKind::Gt => f.write_str("`>`"),
            TokenKind::Ge => f.write_str("`>=`"),
            TokenKind::EqEq => f.write_str("`==`"),
            TokenKind::Ne => f.write_str("`!=`"),
            TokenKind::And => f.write_str("`&`"),
            TokenKind::Or => f.write_str("`|`"),
            TokenKind::Not => f.write_str("`!`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Comma => f.write_str("`,`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
    /// The lexeme as written.
    pub text: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }
}

/// Split `source` into tokens. `#` starts a comment running to the end of
/// the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>, FretishError> {
    let mut cur = Cursor {
        chars: source.char_indices().peekable(),
        src: source,
        pos: Pos::START,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let start_off = cur.offset();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            let word = &source[start_off..cur.offset()];
            match word {
                "and" => TokenKind::And,
                "or" => TokenKind::Or,
                "not" => TokenKind::Not,
                _ => match Keyword::from_word(word) {
                    Some(kw) => TokenKind::Kw(kw),
                    None => TokenKind::Ident(word.to_string()),
                },
            }
        } else if c.is_ascii_digit() {
            while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
            if cur.peek() == Some('.') {
                cur.bump();
                if !matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                    return Err(FretishError::Lex {
                        pos: cur.pos,
                        message: "expected digit after decimal point".into(),
                    });
                }
                while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                    cur.bump();
                }
            }
            let text = &source[start_off..cur.offset()];
            let value: f64 = text.parse().map_err(|_| FretishError::Lex {
                pos: start,
                message: format!("malformed number `{text}`"),
            })?;
            if !value.is_finite() {
                return Err(FretishError::Lex {
                    pos: start,
                    message: format!("number `{text}` is not finite"),
                });
            }
            TokenKind::Number(value)
        } else {
            cur.bump();
            let two = |cur: &mut Cursor<'_>, next: char, yes: TokenKind, no: Option<TokenKind>| {
                if cur.peek() == Some(next) {
                    cur.bump();
                    Ok(yes)
                } else {
                    no.ok_or(())
                }
            };
            let k = match c {
                '<' => two(&mut cur, '=', TokenKind::Le, Some(TokenKind::Lt)),
                '>' => two(&mut cur, '=', TokenKind::Ge, Some(TokenKind::Gt)),
                '=' => two(&mut cur, '=', TokenKind::EqEq, None),
                '!' => two(&mut cur, '=', TokenKind::Ne, Some(TokenKind::Not)),
                '&' => Ok(TokenKind::And),
                '|' => Ok(TokenKind::Or),
                '+' => Ok(TokenKind::Plus),
                '-' => Ok(TokenKind::Minus),
                '*' => Ok(TokenKind::Star),
                '(' => Ok(TokenKind::LParen),
                ')' => Ok(TokenKind::RParen),
                ',' => Ok(TokenKind::Comma),
                _ => Err(()),
            };
            k.map_err(|()| FretishError::Lex {
                pos: start,
                message: if c == '=' {
                    "expected `==`".to_string()
                } else {
                    format!("unexpected character `{c}`")
                },
            })?
        };
        tokens.push(Token {
            kind,
            pos: start,
            text: source[start_off..cur.offset()].to_string(),
        });
    }
    Ok(tokens)
}
