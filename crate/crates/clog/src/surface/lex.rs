//! Tokenizer shared by the `.clog`, `.foclog`, and `.edlp` parsers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Quoted(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    ColonDash,
    Semi,
    Comma,
    Dot,
    LeftArrow,
    RightArrow,
    Amp,
    Pipe,
    Tilde,
    FatArrow,
    Iff,
    Eq,
    NotEq,
    Gt,
    Plus,
    Bang,
    Question,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Quoted(s) => return write!(f, "`'{s}'`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Colon => "`:`",
            Tok::ColonDash => "`:-`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::LeftArrow => "`<-`",
            Tok::RightArrow => "`->`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Tilde => "`~`",
            Tok::FatArrow => "`=>`",
            Tok::Iff => "`<=>`",
            Tok::Eq => "`=`",
            Tok::NotEq => "`!=`",
            Tok::Gt => "`>`",
            Tok::Plus => "`+`",
            Tok::Bang => "`!`",
            Tok::Question => "`?`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

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
        let (tl, tc) = (line, col);
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line: tl,
                    col: tc,
                });
                return Ok(out);
            }
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            if chars.peek() == Some(&'/') {
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    bump!();
                }
                continue;
            }
            return Err(ParseError::new(tl, tc, "unexpected character `/`"));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || n == '_' {
                    s.push(n);
                    bump!();
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_ascii_digit() {
                    s.push(n);
                    bump!();
                } else {
                    break;
                }
            }
            let n: i64 = s
                .parse()
                .map_err(|_| ParseError::new(tl, tc, format!("integer literal `{s}` out of range")))?;
            out.push(Spanned {
                tok: Tok::Int(n),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '\'' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.peek().copied() {
                    Some('\'') => {
                        bump!();
                        break;
                    }
                    Some(n) if n.is_ascii_alphanumeric() || n == '_' => {
                        s.push(n);
                        bump!();
                    }
                    _ => return Err(ParseError::new(tl, tc, "unterminated quoted constant")),
                }
            }
            if s.is_empty() {
                return Err(ParseError::new(tl, tc, "empty quoted constant"));
            }
            out.push(Spanned {
                tok: Tok::Quoted(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        bump!();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '~' => Tok::Tilde,
            '>' => Tok::Gt,
            '+' => Tok::Plus,
            '?' => Tok::Question,
            ':' => {
                if chars.peek() == Some(&'-') {
                    bump!();
                    Tok::ColonDash
                } else {
                    Tok::Colon
                }
            }
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::RightArrow
                } else {
                    return Err(ParseError::new(tl, tc, "unexpected character `-`"));
                }
            }
            '<' => match chars.peek().copied() {
                Some('-') => {
                    bump!();
                    Tok::LeftArrow
                }
                Some('=') => {
                    bump!();
                    if chars.peek() == Some(&'>') {
                        bump!();
                        Tok::Iff
                    } else {
                        return Err(ParseError::new(tl, tc, "expected `<=>`"));
                    }
                }
                _ => return Err(ParseError::new(tl, tc, "unexpected character `<`")),
            },
            '=' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::FatArrow
                } else {
                    Tok::Eq
                }
            }
            '!' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    Tok::NotEq
                } else {
                    Tok::Bang
                }
            }
            other => {
                return Err(ParseError::new(
                    tl,
                    tc,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
}

/// Token cursor with single-token lookahead.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Cursor {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].tok
    }

    pub fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos.min(self.toks.len() - 1)];
        (s.line, s.col)
    }

    pub fn next(&mut self) -> Spanned {
        let s = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
        s
    }

    pub fn eat(&mut self, want: &Tok) -> Result<Spanned, ParseError> {
        if self.peek() == want {
            Ok(self.next())
        } else {
            let (l, c) = self.here();
            Err(ParseError::new(
                l,
                c,
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    pub fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }
}
