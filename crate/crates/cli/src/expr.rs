//! Polynomial expression parsing.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := INT ('/' INT)? | 'x' | IDENT | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit (`2*x`, never `2x`) and exponents are
//! nonnegative integer literals. Identifiers other than `x` must be
//! declared parameters.

use std::fmt;

use num::bigint::BigInt;

use polyode_core::algebra::param::{ParamScalar, ParamSet};
use polyode_core::algebra::Rational;
use polyode_core::XPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// Byte offset into the input where the problem starts.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((Tok::Int(digits.parse().unwrap()), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    set: &'a ParamSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<XPoly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<XPoly, ExprError> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<XPoly, ExprError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<XPoly, ExprError> {
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(e)) => {
                let e: u32 = match e.try_into() {
                    Ok(v) if v <= 10_000u32 => v,
                    _ => return err(at, "exponent too large"),
                };
                Ok(base.pow(e))
            }
            Some(t) => err(at, format!("expected a nonnegative integer exponent, found {t}")),
            None => err(at, "expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<XPoly, ExprError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional `/ INT` forms a rational literal
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dat = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                return err(dat, "zero denominator");
                            }
                            Ok(XPoly::rational(self.set, Rational::new(n, d)))
                        }
                        Some(t) => err(dat, format!("expected an integer denominator, found {t}")),
                        None => err(dat, "expected an integer denominator"),
                    }
                } else {
                    Ok(XPoly::rational(self.set, Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                if name == "x" {
                    Ok(XPoly::x(self.set))
                } else if let Some(sym) = self.set.symbol(&name) {
                    Ok(XPoly::monomial(
                        self.set,
                        ParamScalar::symbol(self.set, sym),
                        0,
                    ))
                } else {
                    err(at, format!("undeclared symbol `{name}`"))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cat = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => err(cat, format!("expected `)`, found {t}")),
                    None => err(cat, "expected `)`"),
                }
            }
            Some(t) => err(at, format!("expected a value, found {t}")),
            None => err(at, "expected a value"),
        }
    }
}

/// Parses `text` into a polynomial in `x` over the declared parameters.
pub fn parse_expression(text: &str, set: &ParamSet) -> Result<XPoly, ExprError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        set,
    };
    let result = parser.expr()?;
    if parser.pos < parser.toks.len() {
        let (t, p) = &parser.toks[parser.pos];
        return err(*p, format!("unexpected {t}"));
    }
    Ok(result)
}
