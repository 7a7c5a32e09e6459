//! Finite-level operators `ρ_X(B)`, exact ranks over every supported field
//! and the modular discrepancy bound.

pub mod elim;
pub mod modular;
mod sparse;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::mpoly::MPoly;
use crate::coeff::{matrix_house, Domain, FieldDescriptor, FieldElement, PrimeIdeal};
use crate::error::{Error, Result};
use crate::freealg::GAMatrix;
use crate::sofic::FiniteFSet;

use elim::{eliminate, rank_of, DomainRing, PolyRing, PrimeRing, Row};
pub use modular::Certificate;
pub use sparse::{assemble_operator, SparseMatrix};

/// Exact rank of a sparse matrix over its field.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    rank_with_certificate(m).0
}

pub fn rank_with_certificate(m: &SparseMatrix) -> (usize, Option<Certificate>) {
    if m.rows() == 0 || m.cols() == 0 || m.nnz() == 0 {
        return (0, None);
    }
    let rows = m.row_lists();
    let ncols = m.cols();
    match m.domain().descriptor() {
        FieldDescriptor::Rationals => {
            let q: Vec<Row<BigRational>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|(c, v)| (c, as_rational(&v))).collect())
                .collect();
            let (r, cert) = modular::integer_rank(ncols, &elim::integer_rows(&q));
            (r, Some(cert))
        }
        FieldDescriptor::PrimeField(p) => {
            let rows: Vec<Row<u64>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|(c, v)| (c, as_fp(&v))).collect())
                .collect();
            (rank_of(&PrimeRing(*p), ncols, rows), None)
        }
        FieldDescriptor::FractionField(_) => (rank_of(&PolyRing, ncols, polynomial_rows(rows)), None),
        _ => {
            let d = m.domain();
            (rank_of(&DomainRing(d), ncols, rows), None)
        }
    }
}

fn as_rational(v: &FieldElement) -> BigRational {
    match v {
        FieldElement::Q(q) => q.clone(),
        _ => unreachable!("rational matrix holds rational entries"),
    }
}

fn as_fp(v: &FieldElement) -> u64 {
    match v {
        FieldElement::Fp(x) => *x,
        _ => unreachable!("prime-field matrix holds residues"),
    }
}

/// Clears the denominators of each row of rational functions.
fn polynomial_rows(rows: Vec<Row<FieldElement>>) -> Vec<Row<MPoly>> {
    rows.into_iter()
        .map(|r| {
            let fr: Vec<(u32, crate::coeff::mpoly::RatFunc)> = r
                .into_iter()
                .map(|(c, v)| match v {
                    FieldElement::R(f) => (c, f),
                    _ => unreachable!("fraction-field matrix holds rational functions"),
                })
                .collect();
            let mut l: Option<MPoly> = None;
            for (_, f) in &fr {
                l = Some(match l {
                    None => f.den.clone(),
                    Some(l) => {
                        let g = l.gcd(&f.den);
                        l.mul(&f.den).div_exact(&g).expect("gcd divides")
                    }
                });
            }
            fr.into_iter()
                .map(|(c, f)| {
                    let scale = l.as_ref().unwrap().div_exact(&f.den).expect("denominator divides lcm");
                    (c, f.num.mul(&scale))
                })
                .collect()
        })
        .collect()
}

/// Pivot structure of a prime-field matrix, for callers that need more than
/// the rank.
pub fn echelon_mod_p(m: &SparseMatrix) -> Result<elim::Echelon<u64>> {
    let FieldDescriptor::PrimeField(p) = m.domain().descriptor() else {
        return Err(Error::DomainMismatch(m.domain().name(), "a prime field".into()));
    };
    let rows: Vec<Row<u64>> = m
        .row_lists()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, as_fp(&v))).collect())
        .collect();
    Ok(eliminate(&PrimeRing(*p), m.cols(), rows, None).expect("free pivoting never fails"))
}

/// Normalized rank `rank ρ_X(B) / |X|` with its context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub set_size: usize,
    pub n: usize,
    pub m: usize,
    pub normalized: BigRational,
    pub field: String,
    pub certificate: Option<Certificate>,
    pub elapsed: Duration,
}

impl RankReport {
    fn new(rank: usize, x: &FiniteFSet, b: &GAMatrix, domain: &Domain, cert: Option<Certificate>, t: Instant) -> Self {
        RankReport {
            rank,
            set_size: x.size(),
            n: b.rows(),
            m: b.cols(),
            normalized: BigRational::new(BigInt::from(rank), BigInt::from(x.size())),
            field: domain.name(),
            certificate: cert,
            elapsed: t.elapsed(),
        }
    }
}

pub fn normalized_rank(b: &GAMatrix, x: &FiniteFSet) -> Result<RankReport> {
    let t = Instant::now();
    let m = assemble_operator(b, x)?;
    let (r, cert) = rank_with_certificate(&m);
    Ok(RankReport::new(r, x, b, b.domain(), cert, t))
}

/// Maps `B` over ℚ or a number field into the residue field of `ideal`.
pub fn reduce_matrix(b: &GAMatrix, ideal: &PrimeIdeal) -> Result<GAMatrix> {
    let src = b.domain().clone();
    b.map_coefficients(ideal.residue_field(), |v| crate::coeff::reduce_mod_prime(&src, v, ideal))
}

pub fn normalized_rank_mod(b: &GAMatrix, x: &FiniteFSet, ideal: &PrimeIdeal) -> Result<RankReport> {
    let t = Instant::now();
    let reduced = reduce_matrix(b, ideal)?;
    let m = assemble_operator(&reduced, x)?;
    let (r, cert) = rank_with_certificate(&m);
    Ok(RankReport::new(r, x, b, ideal.residue_field(), cert, t))
}

/// `C / log₂|F|` with `C = m·[K:ℚ]·log₂⌈B⌉`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyBound {
    /// Upper estimate of the bound; includes the house tolerance.
    pub value: f64,
    pub cols: usize,
    pub degree: usize,
    pub field_size: (u64, usize),
    /// `⌈B⌉` when it is rational.
    pub house_exact: Option<BigRational>,
    pub house_upper: f64,
    pub note: Option<String>,
}

impl DiscrepancyBound {
    /// Whether `gap ≤ bound`. Exact when the house is rational: with
    /// `gap = u/v`, `⌈B⌉ = a/b` and `e = m·[K:ℚ]`, this is
    /// `|F|^u · b^(e·v) ≤ a^(e·v)`.
    pub fn admits(&self, gap: &BigRational) -> bool {
        if gap <= &BigRational::zero() {
            return true;
        }
        if let Some(h) = &self.house_exact {
            if h <= &BigRational::one() {
                return false;
            }
            let (u, v) = (gap.numer(), gap.denom());
            let (Some(u), Some(v)) = (u.to_u32(), v.to_u32()) else { return false };
            let e = (self.cols * self.degree) as u32;
            let Some(ev) = e.checked_mul(v) else { return false };
            let (p, d) = self.field_size;
            let size = num_traits::pow(BigInt::from(p), d);
            let lhs = num_traits::pow(size, u as usize) * num_traits::pow(h.denom().clone(), ev as usize);
            let rhs = num_traits::pow(h.numer().clone(), ev as usize);
            return lhs <= rhs;
        }
        gap.to_f64().map_or(false, |g| g <= self.value)
    }
}

pub fn discrepancy_bound(b: &GAMatrix, ideal: &PrimeIdeal) -> Result<DiscrepancyBound> {
    let degree = b.domain().degree_over_q().ok_or_else(|| {
        Error::DomainMismatch(b.domain().name(), "ℚ or a number field".into())
    })?;
    let h = matrix_house(b)?;
    let upper = h.upper();
    let log_f = (ideal.p as f64).log2() * ideal.degree() as f64;
    let (value, note) = if upper <= 1.0 && h.exact.as_ref().map_or(true, |e| e <= &BigRational::one()) {
        (0.0, Some("house at most 1; bound is 0".to_string()))
    } else {
        let c = (b.cols() * degree) as f64 * upper.log2();
        // round up in the last place so the float never undercuts the exact bound
        let v = c / log_f;
        (v + v.abs() * 4.0 * f64::EPSILON, None)
    };
    Ok(DiscrepancyBound {
        value,
        cols: b.cols(),
        degree,
        field_size: (ideal.p, ideal.degree()),
        house_exact: h.exact,
        house_upper: upper,
        note,
    })
}

/// Scales `B` by the least common denominator of its rational coefficients,
/// which makes every coefficient an algebraic integer without changing any
/// rank at primes not dividing that denominator.
pub fn integral_scaling(b: &GAMatrix) -> Result<(GAMatrix, BigInt)> {
    let mut l = BigInt::one();
    for e in b.entries() {
        for (_, c) in e.terms() {
            match c {
                FieldElement::Q(q) => l = num_integer::Integer::lcm(&l, q.denom()),
                FieldElement::K(v) => {
                    for q in v {
                        l = num_integer::Integer::lcm(&l, q.denom());
                    }
                }
                _ => return Err(Error::DomainMismatch(b.domain().name(), "ℚ or a number field".into())),
            }
        }
    }
    let s = b.domain().from_rational(&BigRational::from_integer(l.clone()))?;
    Ok((b.scale(&s), l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;
    use crate::sofic::{zd_torus, DEFAULT_SIZE_CAP};

    fn q() -> Domain {
        Domain::rationals()
    }

    fn mat(s: &str, rank: usize) -> GAMatrix {
        GAMatrix::parse(&[vec![s]], &q(), rank).unwrap()
    }

    #[test]
    fn circulant_examples() {
        for m in 2..12 {
            let x = FiniteFSet::cyclic(m).unwrap();
            let r = normalized_rank(&mat("1 - a", 1), &x).unwrap();
            assert_eq!(r.normalized, rat(m as i64 - 1, m as i64));
            assert_eq!(normalized_rank(&mat("1", 1), &x).unwrap().normalized, rat(1, 1));
        }
    }

    #[test]
    fn torus_example() {
        let x = zd_torus(2, 6, DEFAULT_SIZE_CAP).unwrap();
        let r = normalized_rank(&mat("1 - a - b", 2), &x).unwrap();
        assert_eq!(r.normalized, rat(17, 18));
    }

    #[test]
    fn scalar_mod_p_and_bound() {
        let x = FiniteFSet::cyclic(4).unwrap();
        let b = mat("5", 1);
        let p5 = PrimeIdeal::rational(5).unwrap();
        assert_eq!(normalized_rank(&b, &x).unwrap().normalized, rat(1, 1));
        assert_eq!(normalized_rank_mod(&b, &x, &p5).unwrap().normalized, rat(0, 1));
        let bound = discrepancy_bound(&b, &p5).unwrap();
        assert!((bound.value - 1.0).abs() < 1e-12);
        assert!(bound.admits(&rat(1, 1)));
        assert!(!bound.admits(&rat(5, 4)));
        let p7 = PrimeIdeal::rational(7).unwrap();
        let c = mat("1 - a", 1);
        let x3 = FiniteFSet::cyclic(3).unwrap();
        assert_eq!(normalized_rank_mod(&c, &x3, &p7).unwrap().normalized, rat(2, 3));
    }

    #[test]
    fn bound_formula_and_unit_house() {
        let b = GAMatrix::parse(&[vec!["8", "0"]], &q(), 1).unwrap();
        let p = PrimeIdeal::rational(1031).unwrap();
        let bd = discrepancy_bound(&b, &p).unwrap();
        assert!((bd.value - 2.0 * 3.0 / 1031f64.log2()).abs() < 1e-9);
        let unit = mat("a", 1);
        let bd = discrepancy_bound(&unit, &p).unwrap();
        assert_eq!(bd.value, 0.0);
        assert!(bd.note.is_some());
        assert!(bd.admits(&rat(0, 1)));
        assert!(!bd.admits(&rat(1, 100)));
    }

    #[test]
    fn number_field_rank() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let b = GAMatrix::parse(&[vec!["[w] - a", "1"], vec!["2 - [w]*a", "[w]"]], &k, 1).unwrap();
        let x = FiniteFSet::cyclic(4).unwrap();
        // second row is w times the first
        assert_eq!(normalized_rank(&b, &x).unwrap().normalized, rat(1, 1));
    }

    #[test]
    fn fraction_field_rank() {
        let r = Domain::fraction_field(&["t"]).unwrap();
        let b = GAMatrix::parse(&[vec!["1 - [t]*a"]], &r, 1).unwrap();
        let x = FiniteFSet::cyclic(5).unwrap();
        assert_eq!(normalized_rank(&b, &x).unwrap().normalized, rat(1, 1));
        let c = GAMatrix::parse(&[vec!["[1/t] - a", "[1/(t+1)]"], vec!["[(t+1)/t] - [t+1]*a", "1"]], &r, 1).unwrap();
        assert_eq!(normalized_rank(&c, &x).unwrap().normalized, rat(1, 1));
    }

    #[test]
    fn empty_and_zero() {
        let x = FiniteFSet::cyclic(3).unwrap();
        assert_eq!(normalized_rank(&mat("0", 1), &x).unwrap().rank, 0);
    }
}
