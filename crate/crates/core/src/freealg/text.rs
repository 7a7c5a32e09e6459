//! Text syntax for group-algebra elements.
//!
//! A term is a product of factors joined by `*` or juxtaposition. A factor is
//! an integer or fraction (`3/2`), a bracketed coefficient expression
//! (`[1 + w]`, `[t^2 - 1]`), a parenthesized element with an optional
//! non-negative power, or a word chunk (`aB`, `a^-1b`). Terms are combined
//! with `+` and `-`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::element::GroupAlgebraElement;
use super::word::Word;
use crate::coeff::{Domain, FieldElement};
use crate::error::{Error, Result};

pub(crate) fn parse_element(text: &str, domain: &Domain, rank: usize) -> Result<GroupAlgebraElement> {
    let mut p = Parser { src: text.as_bytes(), text, pos: 0, domain, rank };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(Error::parse(0, "empty element"));
    }
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::parse(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(v)
}

/// Sign and body of a coefficient as it appears in canonical output;
/// coefficients that are not plain numbers come back bracketed.
pub(crate) fn coefficient_text(domain: &Domain, c: &FieldElement) -> (bool, String) {
    let s = domain.format(c);
    if domain.is_plain_rational(c) {
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("[{s}]"))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    domain: &'a Domain,
    rank: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn zero(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::zero(self.domain, self.rank)
    }

    fn sum(&mut self) -> Result<GroupAlgebraElement> {
        let mut acc = self.zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            acc = if neg { acc.sub(&t)? } else { acc.add(&t)? };
        }
        Ok(acc)
    }

    fn starts_factor(c: u8) -> bool {
        c.is_ascii_alphanumeric() || c == b'(' || c == b'['
    }

    fn product(&mut self) -> Result<GroupAlgebraElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                Some(c) if Self::starts_factor(c) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(self.pos, "expected integer"));
        }
        Ok(self.text[start..self.pos].parse().unwrap())
    }

    fn constant(&self, c: FieldElement) -> GroupAlgebraElement {
        GroupAlgebraElement::constant(self.domain, self.rank, c)
    }

    fn factor(&mut self) -> Result<GroupAlgebraElement> {
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.integer()?;
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let dpos = { self.skip_ws(); self.pos };
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Error::parse(dpos, "division by zero"));
                    }
                    q /= BigRational::from_integer(d);
                }
                let c = self.domain.from_rational(&q).map_err(|e| Error::parse(start, e.to_string()))?;
                Ok(self.constant(c))
            }
            Some(b'[') => {
                self.pos += 1;
                let start = self.pos;
                let close = self.text[start..]
                    .find(']')
                    .ok_or_else(|| Error::parse(at, "unclosed '['"))?;
                let inner = &self.text[start..start + close];
                let c = crate::coeff::parse_at(self.domain, inner, start)?;
                self.pos = start + close + 1;
                Ok(self.constant(c))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let epos = { self.skip_ws(); self.pos };
                    let k: u32 = self
                        .integer()?
                        .try_into()
                        .map_err(|_| Error::parse(epos, "exponent too large"))?;
                    let mut acc = GroupAlgebraElement::one(self.domain, self.rank);
                    for _ in 0..k {
                        acc = acc.mul(&inner)?;
                    }
                    return Ok(acc);
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_alphabetic() {
                        self.pos += 1;
                    } else if c == b'^' {
                        self.pos += 1;
                        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
                            self.pos += 1;
                        }
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                    } else {
                        break;
                    }
                }
                let chunk = &self.text[start..self.pos];
                let w = Word::parse(chunk, self.rank).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(start + pos, msg),
                    other => other,
                })?;
                Ok(GroupAlgebraElement::monomial(self.domain, self.rank, w, self.domain.one()))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_variants() {
        let q = Domain::rationals();
        let a = parse_element("3/2*a*b^-1 - a", &q, 2).unwrap();
        assert_eq!(a.to_string(), "-a + 3/2*aB");
        assert_eq!(parse_element("2 a B", &q, 2).unwrap(), parse_element("2*aB", &q, 2).unwrap());
        assert_eq!(parse_element("(1-a)^2", &q, 1).unwrap().to_string(), "1 - 2*a + aa");
        assert_eq!(parse_element("e + 0", &q, 2).unwrap().to_string(), "1");
        assert_eq!(parse_element("a - a", &q, 2).unwrap().to_string(), "0");
    }

    #[test]
    fn error_positions() {
        let q = Domain::rationals();
        match parse_element("1/0", &q, 1) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 2);
                assert!(msg.contains("division by zero"));
            }
            other => panic!("{other:?}"),
        }
        match parse_element("a + c", &q, 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_element("a +", &q, 2).is_err());
    }

    #[test]
    fn bracketed_coefficients() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let x = parse_element("[w]*a + [1/2]", &k, 1).unwrap();
        assert_eq!(x.to_string(), "1/2 + [w]*a");
        assert_eq!(parse_element(&x.to_string(), &k, 1).unwrap(), x);
        let r = Domain::fraction_field(&["t"]).unwrap();
        let y = parse_element("[t^2 - 1]*a + [t]*b", &r, 2).unwrap();
        assert_eq!(parse_element(&y.to_string(), &r, 2).unwrap(), y);
    }
}
