use alloc::string::String;
use alloc::vec::Vec;

use super::{ParseError, SourceLocation};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Dot,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("number {n}"),
            Tok::Str(_) => "string".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub column: u32,
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens. `//` starts a comment running to the end of the line.
pub(crate) fn tokenize(file: &str, text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '/' {
                let mut look = cur.chars.clone();
                look.next();
                if look.next() == Some('/') {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let loc = || SourceLocation::new(file, line, column);
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, line, column });
            return Ok(out);
        };
        let tok = match c {
            '{' => {
                cur.bump();
                Tok::LBrace
            }
            '}' => {
                cur.bump();
                Tok::RBrace
            }
            ';' => {
                cur.bump();
                Tok::Semi
            }
            ':' => {
                cur.bump();
                Tok::Colon
            }
            ',' => {
                cur.bump();
                Tok::Comma
            }
            '.' => {
                cur.bump();
                Tok::Dot
            }
            '-' => {
                cur.bump();
                match cur.peek() {
                    Some('>') => {
                        cur.bump();
                        Tok::Arrow
                    }
                    Some(d) if d.is_ascii_digit() => Tok::Number(-lex_number(&mut cur, loc())?),
                    _ => return Err(ParseError::new(loc(), "expected `->` or a number after `-`")),
                }
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None => return Err(ParseError::new(loc(), "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            _ => {
                                return Err(ParseError::new(
                                    SourceLocation::new(file, cur.line, cur.column.saturating_sub(1).max(1)),
                                    "invalid escape sequence",
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => Tok::Number(lex_number(&mut cur, loc())?),
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(c) = cur.peek().filter(|c| is_ident_continue(*c)) {
                    s.push(c);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            other => {
                return Err(ParseError::new(
                    loc(),
                    alloc::format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token { tok, line, column });
    }
}

fn lex_number(cur: &mut Cursor<'_>, loc: SourceLocation) -> Result<f64, ParseError> {
    let mut s = String::new();
    let digits = |cur: &mut Cursor<'_>, s: &mut String| {
        while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
            s.push(d);
            cur.bump();
        }
    };
    digits(cur, &mut s);
    if cur.peek() == Some('.') {
        let mut look = cur.chars.clone();
        look.next();
        if look.peek().is_some_and(char::is_ascii_digit) {
            s.push('.');
            cur.bump();
            digits(cur, &mut s);
        }
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let mut look = cur.chars.clone();
        look.next();
        let next = look.next();
        let ok = match next {
            Some(d) if d.is_ascii_digit() => true,
            Some('+' | '-') => look.next().is_some_and(|d| d.is_ascii_digit()),
            _ => false,
        };
        if ok {
            s.push('e');
            cur.bump();
            if let Some(sign @ ('+' | '-')) = cur.peek() {
                s.push(sign);
                cur.bump();
            }
            digits(cur, &mut s);
        }
    }
    if cur.peek().is_some_and(is_ident_start) {
        return Err(ParseError::new(loc, "malformed number"));
    }
    match s.parse::<f64>() {
        Ok(n) if n.is_finite() => Ok(n),
        Ok(_) => Err(ParseError::new(loc, "number out of range")),
        Err(_) => Err(ParseError::new(loc, "malformed number")),
    }
}
