//! Tokenizer shared by the program DSL and the formula syntaxes.

use std::fmt;

use num_bigint::BigInt;

use crate::error::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Char(char),
    Punct(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Char(c) => write!(f, "'{c}'"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

// longest first
const PUNCT: &[&str] = &[
    "->", "==", "!=", "<=", ">=", "&&", "||", "(", ")", "[", "]", "{", "}", ",", ";", ".", "=", "<", ">", "+", "-",
    "*", "/", "!", "|", "&", ":", "?",
];

/// Splits `src` into tokens. `#` starts a comment running to the end of the
/// line. Newlines inside brackets are dropped so long constructs can wrap.
pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let at = |msg: String| SyntaxError { line: ln + 1, col: k + 1, msg };
            let start = k;
            let tok = if c.is_whitespace() {
                k += 1;
                continue;
            } else if c == '#' {
                break;
            } else if c == '\'' {
                let (ch, len) = match (chars.get(k + 1), chars.get(k + 2), chars.get(k + 3)) {
                    (Some('\\'), Some(e), Some('\'')) => (*e, 4),
                    (Some(ch), Some('\''), _) if *ch != '\\' => (*ch, 3),
                    _ => return Err(at("malformed character literal".into())),
                };
                k += len;
                Tok::Char(ch)
            } else if c.is_ascii_digit() {
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                Tok::Int(s.parse().expect("digits"))
            } else if c.is_alphabetic() || c == '_' {
                while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                Tok::Ident(chars[start..k].iter().collect())
            } else {
                let rest: String = chars[k..].iter().take(2).collect();
                match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                    Some(p) => {
                        k += p.chars().count();
                        match *p {
                            "(" | "[" | "{" => depth += 1,
                            ")" | "]" | "}" => depth = depth.saturating_sub(1),
                            _ => {}
                        }
                        Tok::Punct(p)
                    }
                    None => return Err(at(format!("unexpected character {c:?}"))),
                }
            };
            out.push(Token { tok, line: ln + 1, col: start + 1 });
        }
        if depth == 0 && out.last().is_some_and(|t| t.tok != Tok::Newline) {
            out.push(Token { tok: Tok::Newline, line: ln + 1, col: chars.len() + 1 });
        }
    }
    let line = src.lines().count().max(1);
    if out.last().is_some_and(|t| t.tok != Tok::Newline) {
        out.push(Token { tok: Tok::Newline, line, col: 1 });
    }
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0 })
    }

    /// A cursor that ignores line structure.
    pub fn free_form(src: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(src)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
        Ok(Cursor { toks, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    pub fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        let t = self.here();
        SyntaxError { line: t.line, col: t.col, msg: msg.into() }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, p: &str) -> Result<(), SyntaxError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    pub fn eat_ident(&mut self, name: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == name) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self, name: &str) -> Result<(), SyntaxError> {
        if self.eat_ident(name) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{name}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    /// Ends a statement: a newline or the end of input.
    pub fn end_statement(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn punctuation_and_literals() {
        assert_eq!(
            toks("L1[i] <= 'a' -> x"),
            vec![
                Tok::Ident("L1".into()),
                Tok::Punct("["),
                Tok::Ident("i".into()),
                Tok::Punct("]"),
                Tok::Punct("<="),
                Tok::Char('a'),
                Tok::Punct("->"),
                Tok::Ident("x".into()),
                Tok::Newline,
                Tok::Eof,
            ]
        );
        assert_eq!(toks("'\\''")[0], Tok::Char('\''));
        assert_eq!(toks("n-i")[1], Tok::Punct("-"));
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        let t = toks("f(a,\n b)\nc # note");
        assert_eq!(t.iter().filter(|t| **t == Tok::Newline).count(), 2);
    }

    #[test]
    fn bad_character() {
        let e = tokenize("a $ b").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }
}
