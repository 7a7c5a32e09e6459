//! Expression syntax for coefficients: integers, the domain's variables,
//! `+ - * /`, integer powers `^k` and parentheses, evaluated in the domain.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::domain::{Domain, FieldElement};
use crate::error::{Error, Result};

pub(crate) struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
    domain: &'a Domain,
    vars: Vec<String>,
}

pub fn parse_field_element(domain: &Domain, text: &str) -> Result<FieldElement> {
    parse_at(domain, text, 0)
}

/// Parses a full expression; reported positions are offset by `base`.
pub(crate) fn parse_at(domain: &Domain, text: &str, base: usize) -> Result<FieldElement> {
    let mut p = ExprParser { src: text.as_bytes(), pos: 0, base, domain, vars: domain.variable_names() };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(Error::parse(base, "empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.base + self.pos, msg)
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

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.domain.add(&acc, &t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.domain.sub(&acc, &t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.domain.mul(&acc, &t);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let t = self.unary()?;
                    acc = self
                        .domain
                        .div(&acc, &t)
                        .map_err(|_| Error::parse(self.base + at, "division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(self.domain.neg(&v))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.integer()?;
            let k: i64 = k.try_into().map_err(|_| Error::parse(self.base + at, "exponent too large"))?;
            let k = if neg { -k } else { k };
            return self
                .domain
                .pow(&base, k)
                .map_err(|_| Error::parse(self.base + at, "division by zero"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let n = self.integer()?;
                self.domain
                    .from_rational(&BigRational::from_integer(n))
                    .map_err(|e| Error::parse(self.base + at, e.to_string()))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => self.domain.variable(i),
                    None => Err(Error::parse(
                        self.base + start,
                        format!("unknown variable '{name}' in {}", self.domain.name()),
                    )),
                }
            }
            _ => Err(self.err("expected number, variable or '('")),
        }
    }
}
