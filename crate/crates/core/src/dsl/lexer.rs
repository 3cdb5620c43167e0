use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Rational literal as written, sign included (`-3`, `3.5`, `1/3`).
    Number(String),
    /// `inf` or `-inf`
    Inf { negative: bool },
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Eq,
    Pipe,
    Amp,
    Tilde,
    Backslash,
    Caret,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Inf { negative: true } => "`-inf`".into(),
            Tok::Inf { negative: false } => "`inf`".into(),
            other => {
                let c = match other {
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Comma => ",",
                    Tok::Eq => "=",
                    Tok::Pipe => "|",
                    Tok::Amp => "&",
                    Tok::Tilde => "~",
                    Tok::Backslash => "\\",
                    _ => "^",
                };
                format!("`{c}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '|' => Some(Tok::Pipe),
            '&' => Some(Tok::Amp),
            '~' => Some(Tok::Tilde),
            '\\' => Some(Tok::Backslash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(Token {
                tok,
                span: Span::new(start.0, start.1, 1),
            });
            i += 1;
            col += 1;
            continue;
        }
        let begin = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            let tok = if word == "inf" {
                Tok::Inf { negative: false }
            } else {
                Tok::Ident(word)
            };
            tokens.push(Token {
                tok,
                span: Span::new(start.0, start.1, i - begin),
            });
            col += i - begin;
            continue;
        }
        if c.is_ascii_digit() || c == '-' || c == '.' {
            if c == '-' {
                i += 1;
                if chars[i..].starts_with(&['i', 'n', 'f']) {
                    i += 3;
                    tokens.push(Token {
                        tok: Tok::Inf { negative: true },
                        span: Span::new(start.0, start.1, 4),
                    });
                    col += 4;
                    continue;
                }
            }
            while i < chars.len() && (chars[i].is_ascii_digit() || matches!(chars[i], '.' | '/')) {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            let len = i - begin;
            if word == "-" {
                return Err(Diagnostic::error(
                    Span::new(start.0, start.1, 1),
                    "unexpected `-`",
                    Some("a minus sign must be followed by a number or `inf`"),
                ));
            }
            tokens.push(Token {
                tok: Tok::Number(word),
                span: Span::new(start.0, start.1, len),
            });
            col += len;
            continue;
        }
        return Err(Diagnostic::error(
            Span::new(start.0, start.1, 1),
            format!("unexpected character `{c}`"),
            Some("operators are | & ~ \\ ^ and comments start with #"),
        ));
    }
    Ok(tokens)
}
