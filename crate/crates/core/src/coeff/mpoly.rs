//! Sparse multivariate polynomials over ℚ and their fraction field, used as
//! generic coefficients for specialization experiments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vectors are ordered lexicographically with variable 0 most
/// significant; the leading term is the largest key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient, or `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (le, lc) = other.leading()?;
        let (le, lc) = (le.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&le).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&le).map(|(a, b)| a - b).collect();
            let c = rc / &lc;
            let mut mono = Self::zero(self.nvars);
            mono.terms.insert(e.clone(), c.clone());
            rem = rem.sub(&mono.mul(other));
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / c;
                self.scale(&inv)
            }
        }
    }

    fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// Coefficients as a polynomial in variable `v`.
    fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    fn shift_var(&self, v: usize, k: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        gcd_rec(self, other, self.nvars)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

fn content_in(a: &MPoly, v: usize, nv: usize) -> MPoly {
    let mut g = MPoly::zero(a.nvars);
    for c in a.coeffs_in(v) {
        if !c.is_zero() {
            g = gcd_rec(&g, &c, nv);
            if g.as_constant().is_some() {
                break;
            }
        }
    }
    g
}

fn pseudo_rem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v).unwrap_or(0);
    let lb = b.coeffs_in(v).pop().unwrap();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap();
        if dr < db {
            break;
        }
        let lr = r.coeffs_in(v).pop().unwrap();
        r = r.mul(&lb).sub(&b.mul(&lr).shift_var(v, dr - db));
    }
    r
}

fn primitive_part(a: &MPoly, v: usize) -> MPoly {
    let c = content_in(a, v, v);
    if c.is_zero() {
        return a.clone();
    }
    integer_primitive(&a.div_exact(&c).expect("content divides polynomial"))
}

/// Scales to integer coefficients with gcd 1.
fn integer_primitive(a: &MPoly) -> MPoly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in a.terms.values() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return a.clone();
    }
    a.scale(&BigRational::new(den, num))
}

/// Recursive primitive-PRS gcd over variables `0..nv`; result is monic.
fn gcd_rec(a: &MPoly, b: &MPoly, nv: usize) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if nv == 0 || a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one(a.nvars);
    }
    let v = nv - 1;
    if !a.involves(v) && !b.involves(v) {
        return gcd_rec(a, b, v);
    }
    let ca = content_in(a, v, v);
    let cb = content_in(b, v, v);
    let c = gcd_rec(&ca, &cb, v);
    let mut pa = integer_primitive(&a.div_exact(&ca).expect("content divides"));
    let mut pb = integer_primitive(&b.div_exact(&cb).expect("content divides"));
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if !pb.involves(v) {
            return c.monic();
        }
        let r = pseudo_rem(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        pa = pb;
        pb = primitive_part(&r, v);
    }
    c.mul(&primitive_part(&pb, v)).monic()
}

/// Element of ℚ(t₁..t_l), kept as `num/den` with `gcd(num, den) = 1` and a
/// monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(MPoly::zero(den.nvars())));
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides");
        let mut d = den.div_exact(&g).expect("gcd divides");
        let lc = d.leading_coefficient();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let nv = p.nvars();
        RatFunc { num: p, den: MPoly::one(nv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.den.as_constant().is_some() {
            return self.num.display(names);
        }
        format!("({})/({})", self.num.display(names), self.den.display(names))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> MPoly {
        MPoly::var(2, 0)
    }
    fn s() -> MPoly {
        MPoly::var(2, 1)
    }
    fn c(x: i64) -> MPoly {
        MPoly::constant(2, rat(x, 1))
    }

    #[test]
    fn gcd_multivariate() {
        // (t + s)(t - 1) and (t + s)(s + 2)
        let common = t().add(&s());
        let a = common.mul(&t().sub(&c(1)));
        let b = common.mul(&s().add(&c(2)));
        assert_eq!(a.gcd(&b), common.monic());
        assert_eq!(t().gcd(&s()), MPoly::one(2));
    }

    #[test]
    fn gcd_univariate_powers() {
        let x = MPoly::var(1, 0);
        let one = MPoly::one(1);
        let a = x.pow(6).sub(&one);
        let b = x.pow(4).sub(&one);
        assert_eq!(a.gcd(&b), x.pow(2).sub(&one));
    }

    #[test]
    fn gcd_keeps_coefficients_small() {
        let x = MPoly::var(1, 0);
        let f = |k: i64| x.sub(&MPoly::constant(1, rat(k, 3)));
        let mut a = MPoly::one(1);
        let mut b = MPoly::one(1);
        for k in 1..=12 {
            a = a.mul(&f(k)).add(&MPoly::constant(1, rat(k, 7)));
            b = b.mul(&f(-k));
        }
        let common = x.pow(3).sub(&x.scale(&rat(5, 11))).add(&MPoly::one(1));
        let g = a.mul(&common).gcd(&b.mul(&common));
        assert_eq!(g, common);
    }

    #[test]
    fn ratfunc_canonical() {
        let x = MPoly::var(1, 0);
        let one = MPoly::one(1);
        let f = RatFunc::new(x.pow(2).sub(&one), x.sub(&one).scale(&rat(2, 1))).unwrap();
        assert_eq!(f.num, x.add(&one).scale(&rat(1, 2)));
        assert_eq!(f.den, one);
        let h = RatFunc::new(x.clone(), x.sub(&one).scale(&rat(2, 1))).unwrap();
        assert_eq!(h.den, x.sub(&one));
        assert_eq!(h.num, x.scale(&rat(1, 2)));
        let g = f.add(&f.neg());
        assert!(g.is_zero());
        assert_eq!(h.mul(&h.inv().unwrap()), RatFunc::from_poly(MPoly::one(1)));
    }

    #[test]
    fn exact_division() {
        let a = t().mul(&s()).add(&t());
        assert_eq!(a.div_exact(&t()), Some(s().add(&c(1))));
        assert_eq!(a.div_exact(&s()), None);
    }
}
