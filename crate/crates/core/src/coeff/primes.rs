//! Prime ideals of ℤ[w] given as `(p, ḡ)` and reduction into their residue fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::domain::{rational_mod, Domain, FieldDescriptor, FieldElement};
use super::fp::{self, FpPoly};
use crate::error::{Error, Result};

/// A maximal ideal `(p, ḡ(w))`; for ℚ the polynomial is `w` and the residue
/// field is `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub gbar: FpPoly,
    residue: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIdealRecord {
    pub p: u64,
    pub gbar: Vec<u64>,
}

impl PrimeIdeal {
    /// Validates that `ḡ` is irreducible mod p and divides the minimal
    /// polynomial of `field` mod p.
    pub fn new(field: &Domain, p: u64, gbar: FpPoly) -> Result<Self> {
        let residue = Domain::residue_field(p, gbar.clone())?;
        let gbar = fp::make_monic(&gbar, p);
        match field.descriptor() {
            FieldDescriptor::Rationals => {
                if gbar.len() != 2 {
                    return Err(Error::InvalidField("primes of Q have degree-1 residue polynomial".into()));
                }
            }
            FieldDescriptor::NumberField(k) => {
                let f = reduce_int_poly(k.minpoly(), p);
                if !fp::poly_rem(&f, &gbar, p).is_empty() {
                    return Err(Error::InvalidField(format!(
                        "residue polynomial does not divide the minimal polynomial mod {p}"
                    )));
                }
            }
            _ => return Err(Error::DomainNotField(format!("{} has no prime ideals here", field.name()))),
        }
        Ok(PrimeIdeal { p, gbar, residue })
    }

    pub fn rational(p: u64) -> Result<Self> {
        Self::new(&Domain::rationals(), p, vec![0, 1])
    }

    pub fn residue_field(&self) -> &Domain {
        &self.residue
    }

    pub fn degree(&self) -> usize {
        self.gbar.len() - 1
    }

    /// `|F| = p^deg ḡ` as a float (only used in logarithms).
    pub fn field_size_f64(&self) -> f64 {
        (self.p as f64).powi(self.degree() as i32)
    }

    pub fn record(&self) -> PrimeIdealRecord {
        PrimeIdealRecord { p: self.p, gbar: self.gbar.clone() }
    }
}

fn reduce_int_poly(c: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut v: FpPoly = c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect();
    fp::trim(&mut v);
    v
}

/// Image of `x ∈ ℚ` or `x ∈ K` in the residue field of `ideal`. Fails with
/// `PrimeDividesDenominator` when some coefficient is not p-integral.
pub fn reduce_mod_prime(field: &Domain, x: &FieldElement, ideal: &PrimeIdeal) -> Result<FieldElement> {
    let p = ideal.p;
    let res = &ideal.residue;
    match x {
        FieldElement::Q(q) => res.from_rational(q),
        FieldElement::K(a) => {
            if !matches!(field.descriptor(), FieldDescriptor::NumberField(_)) {
                return Err(Error::DomainMismatch(field.name(), "number field element".into()));
            }
            let coeffs: Vec<u64> = a.iter().map(|c| rational_mod(c, p)).collect::<Result<_>>()?;
            if ideal.degree() == 1 {
                // ḡ = w - root
                let root = fp::neg_mod(ideal.gbar[0], p);
                let mut acc = 0u64;
                for &c in coeffs.iter().rev() {
                    acc = fp::add_mod(fp::mul_mod(acc, root, p), c, p);
                }
                Ok(FieldElement::Fp(acc))
            } else {
                Ok(FieldElement::Fq(fp::poly_rem(&coeffs, &ideal.gbar, p)))
            }
        }
        _ => Err(Error::DomainMismatch(field.name(), "reduction source must be Q or a number field".into())),
    }
}

fn linear_root(g: &FpPoly, p: u64) -> u64 {
    if g.len() == 2 {
        fp::neg_mod(g[0], p)
    } else {
        0
    }
}

/// Up to `count` prime ideals with `p ≥ min_p`, residue degree at most
/// `max_degree`, strictly increasing residue-field size, skipping primes that
/// divide the discriminant or any of `excluded`. Among factors of the
/// smallest degree the one with the smallest root (then lexicographically
/// smallest) is taken, so `w² - 2` mod 7 yields `w - 3`.
pub fn enumerate_primes(
    field: &Domain,
    count: usize,
    min_p: u64,
    max_degree: usize,
    excluded: &[BigInt],
) -> Result<Vec<PrimeIdeal>> {
    const SEARCH_CAP: u64 = 200_000;
    let mut out: Vec<PrimeIdeal> = Vec::with_capacity(count);
    let mut last_size = 0f64;
    let mut p = min_p.max(2);
    let mut candidates = 0u64;
    while out.len() < count {
        p = fp::next_prime(p);
        candidates += 1;
        if candidates > SEARCH_CAP {
            return Err(Error::PrimeSearchExhausted(candidates));
        }
        let cur = p;
        p += 1;
        if excluded.iter().any(|e| !e.is_zero() && (e % BigInt::from(cur)).is_zero()) {
            continue;
        }
        let ideal = match field.descriptor() {
            FieldDescriptor::Rationals => PrimeIdeal::rational(cur)?,
            FieldDescriptor::NumberField(k) => {
                let f = reduce_int_poly(k.minpoly(), cur);
                if !fp::is_squarefree(&f, cur) {
                    continue;
                }
                let mut factors = fp::factor_squarefree(&f, cur);
                factors.sort_by_key(|g| (g.len(), linear_root(g, cur), g.clone()));
                let best = factors.iter().find(|g| g.len() - 1 <= max_degree);
                match best {
                    Some(g) => PrimeIdeal::new(field, cur, g.clone())?,
                    None => continue,
                }
            }
            _ => return Err(Error::DomainNotField(format!("cannot enumerate primes of {}", field.name()))),
        };
        let size = ideal.field_size_f64();
        if size <= last_size {
            continue;
        }
        last_size = size;
        out.push(ideal);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;

    #[test]
    fn rational_reduction() {
        let q = Domain::rationals();
        let p5 = PrimeIdeal::rational(5).unwrap();
        let x = FieldElement::Q(rat(7, 3));
        assert_eq!(reduce_mod_prime(&q, &x, &p5).unwrap(), FieldElement::Fp(4));
        let y = FieldElement::Q(rat(1, 5));
        assert_eq!(reduce_mod_prime(&q, &y, &p5), Err(Error::PrimeDividesDenominator(5)));
    }

    #[test]
    fn sqrt2_mod_7() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let primes = enumerate_primes(&k, 2, 3, 1, &[]).unwrap();
        assert_eq!(primes[0].p, 7);
        assert_eq!(primes[0].gbar, vec![4, 1]); // w - 3
        assert_eq!(primes[1].p, 17);
        let w = k.variable(0).unwrap();
        assert_eq!(reduce_mod_prime(&k, &w, &primes[0]).unwrap(), FieldElement::Fp(3));
    }

    #[test]
    fn rational_primes_in_order() {
        let q = Domain::rationals();
        let ps: Vec<u64> = enumerate_primes(&q, 3, 2, 1, &[]).unwrap().iter().map(|i| i.p).collect();
        assert_eq!(ps, vec![2, 3, 5]);
        let ps: Vec<u64> = enumerate_primes(&q, 3, 2, 1, &[BigInt::from(6)]).unwrap().iter().map(|i| i.p).collect();
        assert_eq!(ps, vec![5, 7, 11]);
    }

    #[test]
    fn higher_degree_residues_increase() {
        let k = Domain::number_field(&[1, 0, 1]).unwrap();
        let ps = enumerate_primes(&k, 5, 2, 2, &[]).unwrap();
        // p = 2 ramifies; 3 is inert (size 9); 5 splits (5 < 9, skipped); 7 inert (49)
        assert_eq!(ps[0].p, 3);
        assert_eq!(ps[0].degree(), 2);
        let sizes: Vec<f64> = ps.iter().map(|i| i.field_size_f64()).collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_residue_polynomial_rejected() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        assert!(PrimeIdeal::new(&k, 7, vec![1, 1]).is_err());
    }
}
