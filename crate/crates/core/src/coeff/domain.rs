//! Runtime coefficient domains.
//!
//! A [`Domain`] is a shared handle to a [`FieldDescriptor`]; elements are
//! plain [`FieldElement`] values in canonical form and every operation goes
//! through the domain, which owns moduli and minimal polynomials.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fp::{self, FpPoly};
use super::mpoly::{MPoly, RatFunc};
use super::qpoly::{self, QPoly};
use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
    modulus: QPoly,
    conjugation: Option<QPoly>,
}

impl NumberField {
    /// `minpoly` is little-endian, monic, irreducible over ℚ.
    /// `conjugation`, when given, is the image of `w` under a field involution.
    pub fn new(minpoly: Vec<BigInt>, conjugation: Option<Vec<BigRational>>) -> Result<Self> {
        let mut minpoly = minpoly;
        while minpoly.last().is_some_and(|c| c.is_zero()) {
            minpoly.pop();
        }
        if minpoly.len() < 2 {
            return Err(Error::InvalidField("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::InvalidField("minimal polynomial must be monic".into()));
        }
        if !qpoly::is_irreducible_over_q(&minpoly)? {
            return Err(Error::InvalidField(format!(
                "{} is reducible over Q",
                int_poly_string(&minpoly, "w")
            )));
        }
        let modulus = qpoly::from_ints(&minpoly);
        let conjugation = match conjugation {
            None => None,
            Some(mut c) => {
                qpoly::trim(&mut c);
                let c = qpoly::rem(&c, &modulus);
                // c must be a root of f, and applying the map twice gives back w
                let fc = compose_mod(&modulus, &c, &modulus);
                if !fc.is_empty() {
                    return Err(Error::InvalidField("conjugation image is not a root of the minimal polynomial".into()));
                }
                let twice = compose_mod(&c, &c, &modulus);
                let w: QPoly = qpoly::rem(&[BigRational::zero(), BigRational::one()], &modulus);
                if twice != w {
                    return Err(Error::InvalidField("conjugation is not an involution".into()));
                }
                if c == w {
                    None
                } else {
                    Some(c)
                }
            }
        };
        Ok(NumberField { minpoly, modulus, conjugation })
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn conjugation(&self) -> Option<&QPoly> {
        self.conjugation.as_ref()
    }

    pub(crate) fn modulus(&self) -> &QPoly {
        &self.modulus
    }
}

/// `a(c) mod m`
fn compose_mod(a: &[BigRational], c: &[BigRational], m: &[BigRational]) -> QPoly {
    let mut acc: QPoly = Vec::new();
    for coef in a.iter().rev() {
        acc = qpoly::rem(&qpoly::mul(&acc, c), m);
        acc = qpoly::add(&acc, std::slice::from_ref(coef));
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueField {
    p: u64,
    gbar: FpPoly,
}

impl ResidueField {
    /// `F_p[w]/(gbar)`; `gbar` must be monic and irreducible mod p.
    pub fn new(p: u64, gbar: FpPoly) -> Result<Self> {
        if !fp::is_prime(p) || p >= 1 << 62 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        let mut g: FpPoly = gbar.iter().map(|c| c % p).collect();
        fp::trim(&mut g);
        if g.last() != Some(&1) {
            return Err(Error::InvalidField("residue polynomial must be monic".into()));
        }
        if !fp::is_irreducible(&g, p) {
            return Err(Error::InvalidField(format!("residue polynomial not irreducible mod {p}")));
        }
        Ok(ResidueField { p, gbar: g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn gbar(&self) -> &FpPoly {
        &self.gbar
    }
    pub fn degree(&self) -> usize {
        self.gbar.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    NumberField(NumberField),
    PrimeField(u64),
    ResidueField(ResidueField),
    /// ℚ(t₁..t_l) with the given variable names.
    FractionField(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Q(BigRational),
    K(QPoly),
    Fp(u64),
    Fq(FpPoly),
    R(RatFunc),
}

#[derive(Clone)]
pub struct Domain(Arc<FieldDescriptor>);

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Domain {}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Domain({})", self.name())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn int_poly_string(c: &[BigInt], var: &str) -> String {
    let q: QPoly = c.iter().cloned().map(BigRational::from_integer).collect();
    rat_poly_string(&q, var)
}

fn rat_poly_string(c: &[BigRational], var: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    for (k, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let neg = a.is_negative();
        let abs = a.abs();
        if first {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        first = false;
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if first {
        "0".into()
    } else {
        out
    }
}

fn fp_poly_string(c: &[u64], var: &str) -> String {
    let q: QPoly = c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    rat_poly_string(&q, var)
}

pub const ALGEBRAIC_VAR: &str = "w";

impl Domain {
    pub fn new(desc: FieldDescriptor) -> Self {
        Domain(Arc::new(desc))
    }

    pub fn rationals() -> Self {
        Self::new(FieldDescriptor::Rationals)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !fp::is_prime(p) || p >= 1 << 62 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Self::new(FieldDescriptor::PrimeField(p)))
    }

    pub fn number_field(minpoly: &[i64]) -> Result<Self> {
        let c = minpoly.iter().map(|&x| BigInt::from(x)).collect();
        Ok(Self::new(FieldDescriptor::NumberField(NumberField::new(c, None)?)))
    }

    pub fn fraction_field(vars: &[&str]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidField("fraction field needs at least one variable".into()));
        }
        Ok(Self::new(FieldDescriptor::FractionField(
            vars.iter().map(|s| s.to_string()).collect(),
        )))
    }

    /// Residue field of `gbar` over `F_p`; degree one collapses to `F_p`.
    pub fn residue_field(p: u64, gbar: FpPoly) -> Result<Self> {
        let r = ResidueField::new(p, gbar)?;
        if r.degree() == 1 {
            Self::prime_field(p)
        } else {
            Ok(Self::new(FieldDescriptor::ResidueField(r)))
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn name(&self) -> String {
        match &*self.0 {
            FieldDescriptor::Rationals => "Q".into(),
            FieldDescriptor::NumberField(k) => {
                format!("Q[w]/({})", int_poly_string(&k.minpoly, ALGEBRAIC_VAR))
            }
            FieldDescriptor::PrimeField(p) => format!("F_{p}"),
            FieldDescriptor::ResidueField(r) => {
                format!("F_{}[w]/({})", r.p, fp_poly_string(&r.gbar, ALGEBRAIC_VAR))
            }
            FieldDescriptor::FractionField(v) => format!("Q({})", v.join(",")),
        }
    }

    pub fn variable_names(&self) -> Vec<String> {
        match &*self.0 {
            FieldDescriptor::NumberField(_) | FieldDescriptor::ResidueField(_) => {
                vec![ALGEBRAIC_VAR.to_string()]
            }
            FieldDescriptor::FractionField(v) => v.clone(),
            _ => vec![],
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::PrimeField(p) => *p,
            FieldDescriptor::ResidueField(r) => r.p,
            _ => 0,
        }
    }

    /// Number of elements for finite fields, as `p^d`.
    pub fn finite_size(&self) -> Option<(u64, usize)> {
        match &*self.0 {
            FieldDescriptor::PrimeField(p) => Some((*p, 1)),
            FieldDescriptor::ResidueField(r) => Some((r.p, r.degree())),
            _ => None,
        }
    }

    /// `[K:ℚ]` for ℚ and number fields.
    pub fn degree_over_q(&self) -> Option<usize> {
        match &*self.0 {
            FieldDescriptor::Rationals => Some(1),
            FieldDescriptor::NumberField(k) => Some(k.degree()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_size().is_some()
    }

    pub fn zero(&self) -> FieldElement {
        match &*self.0 {
            FieldDescriptor::Rationals => FieldElement::Q(BigRational::zero()),
            FieldDescriptor::NumberField(_) => FieldElement::K(Vec::new()),
            FieldDescriptor::PrimeField(_) => FieldElement::Fp(0),
            FieldDescriptor::ResidueField(_) => FieldElement::Fq(Vec::new()),
            FieldDescriptor::FractionField(v) => {
                FieldElement::R(RatFunc::from_poly(MPoly::zero(v.len())))
            }
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(&BigRational::from_integer(n.into()))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic p when p divides
    /// the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        Ok(match &*self.0 {
            FieldDescriptor::Rationals => FieldElement::Q(q.clone()),
            FieldDescriptor::NumberField(_) => {
                let mut v = vec![q.clone()];
                qpoly::trim(&mut v);
                FieldElement::K(v)
            }
            FieldDescriptor::PrimeField(p) => FieldElement::Fp(rational_mod(q, *p)?),
            FieldDescriptor::ResidueField(r) => {
                let mut v = vec![rational_mod(q, r.p)?];
                fp::trim(&mut v);
                FieldElement::Fq(v)
            }
            FieldDescriptor::FractionField(v) => {
                FieldElement::R(RatFunc::from_poly(MPoly::constant(v.len(), q.clone())))
            }
        })
    }

    /// The generator `w` (number/residue fields) or variable `t_i` (fraction fields).
    pub fn variable(&self, i: usize) -> Result<FieldElement> {
        match &*self.0 {
            FieldDescriptor::NumberField(k) if i == 0 => Ok(FieldElement::K(qpoly::rem(
                &[BigRational::zero(), BigRational::one()],
                &k.modulus,
            ))),
            FieldDescriptor::ResidueField(r) if i == 0 => {
                Ok(FieldElement::Fq(fp::poly_rem(&[0, 1], &r.gbar, r.p)))
            }
            FieldDescriptor::FractionField(v) if i < v.len() => {
                Ok(FieldElement::R(RatFunc::from_poly(MPoly::var(v.len(), i))))
            }
            _ => Err(Error::InvalidField(format!("{} has no variable #{i}", self.name()))),
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        matches!(
            (&*self.0, x),
            (FieldDescriptor::Rationals, FieldElement::Q(_))
                | (FieldDescriptor::NumberField(_), FieldElement::K(_))
                | (FieldDescriptor::PrimeField(_), FieldElement::Fp(_))
                | (FieldDescriptor::ResidueField(_), FieldElement::Fq(_))
                | (FieldDescriptor::FractionField(_), FieldElement::R(_))
        )
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Q(q) => q.is_zero(),
            FieldElement::K(v) => v.is_empty(),
            FieldElement::Fp(a) => *a == 0,
            FieldElement::Fq(v) => v.is_empty(),
            FieldElement::R(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        use FieldElement::*;
        match (x, y) {
            (Q(a), Q(b)) => Q(a + b),
            (K(a), K(b)) => K(qpoly::add(a, b)),
            (Fp(a), Fp(b)) => Fp(fp::add_mod(*a, *b, self.characteristic())),
            (Fq(a), Fq(b)) => Fq(fp::poly_add(a, b, self.characteristic())),
            (R(a), R(b)) => R(a.add(b)),
            _ => panic!("mixed coefficient domains in {}", self.name()),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        use FieldElement::*;
        match x {
            Q(a) => Q(-a),
            K(a) => K(qpoly::neg(a)),
            Fp(a) => Fp(fp::neg_mod(*a, self.characteristic())),
            Fq(a) => Fq(fp::poly_sub(&[], a, self.characteristic())),
            R(a) => R(a.neg()),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        use FieldElement::*;
        match (x, y, &*self.0) {
            (Q(a), Q(b), _) => Q(a * b),
            (K(a), K(b), FieldDescriptor::NumberField(k)) => {
                K(qpoly::rem(&qpoly::mul(a, b), &k.modulus))
            }
            (Fp(a), Fp(b), FieldDescriptor::PrimeField(p)) => Fp(fp::mul_mod(*a, *b, *p)),
            (Fq(a), Fq(b), FieldDescriptor::ResidueField(r)) => {
                Fq(fp::poly_mulmod(a, b, &r.gbar, r.p))
            }
            (R(a), R(b), _) => R(a.mul(b)),
            _ => panic!("mixed coefficient domains in {}", self.name()),
        }
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (x, &*self.0) {
            (Q(a), _) => Q(a.recip()),
            (K(a), FieldDescriptor::NumberField(k)) => {
                K(qpoly::inverse_mod(a, &k.modulus).ok_or(Error::DivisionByZero)?)
            }
            (Fp(a), FieldDescriptor::PrimeField(p)) => Fp(fp::inv_mod(*a, *p).unwrap()),
            (Fq(a), FieldDescriptor::ResidueField(r)) => {
                let (g, s) = fp::poly_xgcd(a, &r.gbar, r.p);
                if g.len() != 1 {
                    return Err(Error::DivisionByZero);
                }
                Fq(s)
            }
            (R(a), _) => R(a.inv()?),
            _ => panic!("mixed coefficient domains in {}", self.name()),
        })
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, k: i64) -> Result<FieldElement> {
        let base = if k < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = self.one();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// The configured involution: identity except on number fields that carry
    /// a conjugation map.
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        match (x, &*self.0) {
            (FieldElement::K(a), FieldDescriptor::NumberField(k)) => match &k.conjugation {
                Some(c) => FieldElement::K(compose_mod(a, c, &k.modulus)),
                None => x.clone(),
            },
            _ => x.clone(),
        }
    }

    pub fn has_nontrivial_conjugation(&self) -> bool {
        matches!(&*self.0, FieldDescriptor::NumberField(k) if k.conjugation.is_some())
    }

    pub fn to_rational(&self, x: &FieldElement) -> Option<BigRational> {
        match x {
            FieldElement::Q(q) => Some(q.clone()),
            FieldElement::K(v) if v.len() <= 1 => {
                Some(v.first().cloned().unwrap_or_else(BigRational::zero))
            }
            FieldElement::R(r) => {
                let n = r.num.as_constant()?;
                let d = r.den.as_constant()?;
                Some(n / d)
            }
            _ => None,
        }
    }

    /// `Tr_{K/ℚ}(x) / [K:ℚ]` for ℚ and number fields.
    pub fn normalized_trace(&self, x: &FieldElement) -> Option<BigRational> {
        match (x, &*self.0) {
            (FieldElement::Q(q), _) => Some(q.clone()),
            (FieldElement::K(a), FieldDescriptor::NumberField(k)) => {
                let sums = power_sums(&k.modulus, k.degree());
                let mut tr = BigRational::zero();
                for (c, s) in a.iter().zip(&sums) {
                    tr += c * s;
                }
                Some(tr / BigRational::from_integer(BigInt::from(k.degree())))
            }
            _ => None,
        }
    }

    pub fn format(&self, x: &FieldElement) -> String {
        match (x, &*self.0) {
            (FieldElement::Q(q), _) => q.to_string(),
            (FieldElement::K(a), _) => rat_poly_string(a, ALGEBRAIC_VAR),
            (FieldElement::Fp(a), _) => a.to_string(),
            (FieldElement::Fq(a), _) => fp_poly_string(a, ALGEBRAIC_VAR),
            (FieldElement::R(r), FieldDescriptor::FractionField(v)) => r.display(v),
            (FieldElement::R(r), _) => format!("{r:?}"),
        }
    }

    /// Whether the canonical text needs brackets inside a group-algebra term.
    pub fn is_plain_rational(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Q(_) | FieldElement::Fp(_) => true,
            FieldElement::K(v) => v.len() <= 1,
            FieldElement::Fq(v) => v.len() <= 1,
            FieldElement::R(r) => r.num.as_constant().is_some() && r.den.as_constant().is_some(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        super::parse::parse_field_element(self, text)
    }
}

/// Power sums `p_k = Σ θ_i^k`, `k = 0..d-1`, over the roots of a monic polynomial.
fn power_sums(f: &[BigRational], d: usize) -> Vec<BigRational> {
    // Newton: p_k + e-coefficients ... written with f = x^d + c_{d-1} x^{d-1} + ... + c_0
    let c = |i: usize| f[i].clone();
    let mut p = vec![BigRational::from_integer(BigInt::from(d))];
    for k in 1..d {
        let mut s = BigRational::from_integer(BigInt::from(k)) * c(d - k);
        for i in 1..k {
            s += c(d - i) * &p[k - i];
        }
        p.push(-s);
    }
    p
}

pub fn rational_mod(q: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64().unwrap();
    let inv = fp::inv_mod(d, p).ok_or(Error::PrimeDividesDenominator(p))?;
    let n = q.numer().mod_floor(&pb).to_u64().unwrap();
    Ok(fp::mul_mod(n, inv, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;

    #[test]
    fn rational_addition() {
        let q = Domain::rationals();
        let a = q.from_rational(&rat(2, 3)).unwrap();
        let b = q.from_rational(&rat(1, 6)).unwrap();
        assert_eq!(q.add(&a, &b), FieldElement::Q(rat(5, 6)));
    }

    #[test]
    fn f5_inverse() {
        let f5 = Domain::prime_field(5).unwrap();
        assert_eq!(f5.inv(&f5.from_int(2)).unwrap(), FieldElement::Fp(3));
        assert_eq!(f5.inv(&f5.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt2_squared() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let w = k.variable(0).unwrap();
        assert_eq!(k.mul(&w, &w), k.from_int(2));
        let inv = k.inv(&w).unwrap();
        assert_eq!(k.mul(&w, &inv), k.one());
        assert_eq!(k.format(&inv), "1/2*w");
    }

    #[test]
    fn reducible_minpoly_rejected() {
        assert!(matches!(Domain::number_field(&[-4, 0, 1]), Err(Error::InvalidField(_))));
        assert!(matches!(Domain::number_field(&[2, 0, 2]), Err(Error::InvalidField(_))));
    }

    #[test]
    fn conjugation_on_gaussian_rationals() {
        let nf = NumberField::new(
            vec![1.into(), 0.into(), 1.into()],
            Some(vec![rat(0, 1), rat(-1, 1)]),
        )
        .unwrap();
        let k = Domain::new(FieldDescriptor::NumberField(nf));
        let w = k.variable(0).unwrap();
        let x = k.add(&k.from_int(3), &w);
        let cx = k.conj(&x);
        assert_eq!(k.mul(&x, &cx), k.from_int(10));
        assert_eq!(k.conj(&cx), x);
        // w -> w + 1 is not a root of w^2 + 1
        assert!(NumberField::new(vec![1.into(), 0.into(), 1.into()], Some(vec![rat(1, 1), rat(1, 1)])).is_err());
    }

    #[test]
    fn normalized_trace() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let w = k.variable(0).unwrap();
        // Tr(3 + w) = 6, normalized 3; Tr(w^2) = 4 → 2
        let x = k.add(&k.from_int(3), &w);
        assert_eq!(k.normalized_trace(&x), Some(rat(3, 1)));
        assert_eq!(k.normalized_trace(&k.mul(&w, &w)), Some(rat(2, 1)));
        let k3 = Domain::number_field(&[-2, 0, 0, 1]).unwrap();
        let v = k3.variable(0).unwrap();
        let v3 = k3.mul(&v, &k3.mul(&v, &v));
        assert_eq!(k3.normalized_trace(&v3), Some(rat(2, 1)));
        assert_eq!(k3.normalized_trace(&v), Some(rat(0, 1)));
    }

    #[test]
    fn residue_field_arithmetic() {
        let f9 = Domain::residue_field(3, vec![1, 0, 1]).unwrap();
        assert_eq!(f9.finite_size(), Some((3, 2)));
        let w = f9.variable(0).unwrap();
        assert_eq!(f9.mul(&w, &w), f9.from_int(-1));
        let inv = f9.inv(&w).unwrap();
        assert_eq!(f9.mul(&inv, &w), f9.one());
        assert!(Domain::residue_field(5, vec![1, 0, 1]).is_err());
        assert_eq!(Domain::residue_field(7, vec![4, 1]).unwrap(), Domain::prime_field(7).unwrap());
    }
}
