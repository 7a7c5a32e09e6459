//! The house ⌈α⌉ of an algebraic number (largest modulus of a conjugate) and
//! its extension to group-algebra elements and matrices.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::domain::{Domain, FieldDescriptor, FieldElement};
use super::qpoly;
use crate::error::{Error, Result};
use crate::freealg::{GAMatrix, GroupAlgebraElement};

pub const HOUSE_TOLERANCE: f64 = 1e-9;

/// A house value with an absolute error bound; `exact` is set whenever the
/// value is rational (all coefficients rational).
#[derive(Debug, Clone, PartialEq)]
pub struct House {
    pub value: f64,
    pub tol: f64,
    pub exact: Option<BigRational>,
}

impl House {
    pub fn zero() -> Self {
        House { value: 0.0, tol: 0.0, exact: Some(BigRational::zero()) }
    }

    fn rational(q: BigRational) -> Self {
        House { value: qpoly::to_f64(&q), tol: 0.0, exact: Some(q) }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tol
    }

    fn plus(&self, o: &House) -> House {
        House {
            value: self.value + o.value,
            tol: self.tol + o.tol,
            exact: match (&self.exact, &o.exact) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    fn max(self, o: House) -> House {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => {
                if a >= b {
                    self
                } else {
                    o
                }
            }
            _ => {
                if self.upper() >= o.upper() {
                    House { exact: None, ..self }
                } else {
                    House { exact: None, ..o }
                }
            }
        }
    }
}

/// `⌈α⌉ = max |α_i|` over the conjugates of `α ∈ ℚ` or `α ∈ K`, certified to
/// within [`HOUSE_TOLERANCE`].
pub fn house(domain: &Domain, x: &FieldElement) -> Result<House> {
    match (x, domain.descriptor()) {
        (FieldElement::Q(q), _) => Ok(House::rational(q.abs())),
        (FieldElement::K(a), FieldDescriptor::NumberField(k)) => {
            if a.len() <= 1 {
                return Ok(House::rational(a.first().map(|c| c.abs()).unwrap_or_default()));
            }
            // conjugates of a(w) are a(θ) over the roots θ of the minimal polynomial
            let enc = qpoly::isolate_roots(k.modulus())?;
            let coeffs: Vec<f64> = a.iter().map(qpoly::to_f64).collect();
            let mut value = 0f64;
            let mut tol = 0f64;
            for (z, &rho) in enc.centers.iter().zip(&enc.radii) {
                let v = qpoly::eval_complex(&coeffs, *z).norm();
                let r = z.norm() + rho;
                let lipschitz: f64 = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| i as f64 * c.abs() * r.powi(i as i32 - 1))
                    .sum();
                let rounding: f64 = 4.0
                    * (coeffs.len() as f64 + 1.0)
                    * f64::EPSILON
                    * coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c.abs() * z.norm().powi(i as i32))
                        .sum::<f64>();
                let err = lipschitz * rho + rounding;
                value = value.max(v);
                tol = tol.max(err);
            }
            if tol > HOUSE_TOLERANCE {
                return Err(Error::RootIsolationFailed(format!(
                    "house error bound {tol:e} exceeds {HOUSE_TOLERANCE:e}"
                )));
            }
            Ok(House { value, tol, exact: None })
        }
        _ => Err(Error::DomainMismatch(domain.name(), "house needs Q or a number field".into())),
    }
}

/// `⌈b⌉ = Σ_h ⌈a_h⌉`.
pub fn element_house(b: &GroupAlgebraElement) -> Result<House> {
    let mut acc = House::zero();
    for (_, c) in b.terms() {
        acc = acc.plus(&house(b.domain(), c)?);
    }
    Ok(acc)
}

/// `⌈B⌉ = max_j Σ_i ⌈b_ij⌉`: column sums of entry houses, maximized over columns.
pub fn matrix_house(b: &GAMatrix) -> Result<House> {
    let mut best = House::zero();
    for j in 0..b.cols() {
        let mut col = House::zero();
        for i in 0..b.rows() {
            col = col.plus(&element_house(b.get(i, j))?);
        }
        best = best.max(col);
    }
    Ok(best)
}
