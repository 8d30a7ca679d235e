//! Polynomial expressions in x and y (or t for parametrizations).
//!
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | variable | '(' expr ')'
//!
//! Division is only by nonzero constants.

use branchkit::{FieldSpec, Series, YPolynomial};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at {pos}: negative exponent")]
    NegativeExponent { pos: usize },
    #[error("at {pos}: unknown variable '{name}'")]
    UnknownVariable { pos: usize, name: char },
    #[error("at {pos}: division by a non-constant or zero")]
    BadDivision { pos: usize },
    #[error("invalid field '{0}' (expected Q or F<p>)")]
    Field(String),
    #[error("invalid integer list '{0}'")]
    List(String),
}

/// Variable roles: x and y for curves, t (read as x) for parametrizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vars {
    Curve,
    Param,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<YPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<YPolynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = match d.coeffs() {
                        [s] if s.terms().len() == 1 && s.terms()[0].0 == 0 => s.terms()[0].1.clone(),
                        _ => return Err(ParseError::BadDivision { pos: at }),
                    };
                    let inv = c.inv().ok_or(ParseError::BadDivision { pos: at })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<YPolynomial, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<YPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'-') {
            return Err(ParseError::NegativeExponent { pos: self.pos });
        }
        let e = self.integer().ok_or_else(|| self.err("expected exponent"))?;
        let e: u64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<YPolynomial, ParseError> {
        let field = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().unwrap();
                Ok(YPolynomial::from_series(Series::constant(field.from_bigint(&n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let pos = self.pos;
                self.pos += 1;
                match (self.vars, c) {
                    (Vars::Curve, b'x') | (Vars::Param, b't') => Ok(YPolynomial::x(field)),
                    (Vars::Curve, b'y') => Ok(YPolynomial::y(field)),
                    _ => Err(ParseError::UnknownVariable { pos, name: c as char }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_with(text: &str, field: FieldSpec, vars: Vars) -> Result<YPolynomial, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
        vars,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// An exact polynomial in x and y with coefficients mapped into `field`.
pub fn parse_poly(text: &str, field: FieldSpec) -> Result<YPolynomial, ParseError> {
    parse_with(text, field, Vars::Curve)
}

/// A polynomial in t, as a series.
pub fn parse_series_t(text: &str, field: FieldSpec) -> Result<Series, ParseError> {
    let p = parse_with(text, field, Vars::Param)?;
    Ok(p.coeff(0))
}

/// Split on commas that are not inside parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// "Q" or "F<p>", e.g. "F7".
pub fn parse_field(text: &str) -> Result<FieldSpecRequest, ParseError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldSpecRequest::Rationals);
    }
    let rest = t
        .strip_prefix('F')
        .or_else(|| t.strip_prefix('f'))
        .ok_or_else(|| ParseError::Field(text.to_string()))?;
    let p: u64 = rest.parse().map_err(|_| ParseError::Field(text.to_string()))?;
    Ok(FieldSpecRequest::Prime(p))
}

/// A syntactically valid field name; primality is checked by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpecRequest {
    Rationals,
    Prime(u64),
}

/// "4,6,13" → [4, 6, 13].
pub fn parse_u64_list(text: &str) -> Result<Vec<u64>, ParseError> {
    text.split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ParseError::List(text.to_string()))
}

/// "-1,-4" → [-1, -4].
pub fn parse_i64_list(text: &str) -> Result<Vec<i64>, ParseError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ParseError::List(text.to_string()))
}
