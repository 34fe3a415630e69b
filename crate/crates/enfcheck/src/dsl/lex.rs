//! Tokenizer for the model language. Keywords are recognized by the
//! parser; the lexer only distinguishes words from punctuation.

use super::{DslError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// word: identifiers, keywords, state names (may be numeric)
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    /// `->`
    Arrow,
    /// `=>`
    Impl,
    Bang,
    AndAnd,
    OrOr,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::Impl => "=>",
            Tok::Bang => "!",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
        };
        write!(f, "`{s}`")
    }
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let pos = Pos { line, col };
        let c = match chars.peek() {
            Some(&c) => c,
            None => return Ok(out),
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            out.push((Tok::Word(word), pos));
            continue;
        }
        bump!();
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '!' => Tok::Bang,
            '/' => {
                if chars.peek() == Some(&'/') {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                return Err(DslError::syntax(pos, "stray `/` (comments are `//`)"));
            }
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::Arrow
                } else {
                    return Err(DslError::syntax(pos, "expected `->`"));
                }
            }
            '=' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::Impl
                } else {
                    Tok::Eq
                }
            }
            '&' => {
                if chars.peek() == Some(&'&') {
                    bump!();
                    Tok::AndAnd
                } else {
                    return Err(DslError::syntax(pos, "expected `&&`"));
                }
            }
            '|' => {
                if chars.peek() == Some(&'|') {
                    bump!();
                    Tok::OrOr
                } else {
                    return Err(DslError::syntax(pos, "expected `||`"));
                }
            }
            other => {
                return Err(DslError::syntax(pos, format!("unexpected character `{other}`")));
            }
        };
        out.push((tok, pos));
    }
}
