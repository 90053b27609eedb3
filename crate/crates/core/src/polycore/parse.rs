use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{CoefficientDomain, PolyError, Polynomial, VariableContext};

/// Parse failure inside a polynomial: byte offset and what was expected there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl std::fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Arc<VariableContext>,
    domain: CoefficientDomain,
}

/// Parses the polynomial text syntax: identifiers, integer literals, `+ - * ^`,
/// parentheses, and division by a nonzero constant over a field.
/// `-` is rejected over the naturals.
pub fn parse_polynomial(
    text: &str,
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
) -> Result<Polynomial, PolyParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx, domain };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input", &["+", "-", "*", "^", "end of input"]));
    }
    Ok(r)
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str, expected: &[&str]) -> PolyParseError {
        PolyParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: msg.to_string(),
        }
    }

    fn lift(&self, e: PolyError) -> PolyParseError {
        PolyParseError { offset: self.pos, expected: vec![], message: e.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn reject_minus(&self) -> Result<(), PolyParseError> {
        if self.domain.has_negation() {
            Ok(())
        } else {
            Err(self.error("subtraction is not available over the naturals", &[]))
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.reject_minus()?;
            self.pos += 1;
            let t = self.term()?;
            t.try_neg().map_err(|e| self.lift(e))?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_add(&t).map_err(|e| self.lift(e))?;
                }
                Some(b'-') => {
                    self.reject_minus()?;
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_sub(&t).map_err(|e| self.lift(e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.try_mul(&f).map_err(|e| self.lift(e))?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let start = self.pos;
                    let f = self.power()?;
                    if !f.is_constant() || f.is_zero() {
                        self.pos = start;
                        return Err(self.error("division only by a nonzero constant", &["integer"]));
                    }
                    let inv = self
                        .domain
                        .inv(&f.constant_term())
                        .ok_or_else(|| self.error("constant is not invertible in this domain", &[]))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer().ok_or_else(|| self.error("expected exponent", &["integer"]))?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large", &[]))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Polynomial, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("unbalanced parenthesis", &[")"]));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit present");
                let c = self
                    .domain
                    .try_normalize(BigRational::from_integer(n))
                    .map_err(|e| self.lift(e))?;
                if c.is_zero() {
                    return Ok(Polynomial::zero(self.ctx, self.domain));
                }
                Ok(Polynomial::constant(self.ctx, self.domain, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' || c == b'@' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_'
                        || self.src[self.pos] == b'@'
                        || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ctx.index_of(name) {
                    Some(i) => Ok(Polynomial::var(self.ctx, self.domain, i)),
                    None => {
                        self.pos = start;
                        let mut expected: Vec<&str> = self.ctx.names().iter().map(String::as_str).collect();
                        expected.push("integer");
                        expected.push("(");
                        Err(self.error(&format!("unknown variable `{name}`"), &expected))
                    }
                }
            }
            _ => Err(self.error("expected a term", &["identifier", "integer", "("])),
        }
    }
}
