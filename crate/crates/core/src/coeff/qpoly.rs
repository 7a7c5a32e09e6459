//! Dense univariate polynomials over ℚ, plus the integer-polynomial helpers
//! needed to validate number-field minimal polynomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::fp;
use crate::error::{Error, Result};

pub type QPoly = Vec<BigRational>;

pub fn trim(a: &mut QPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn from_ints(c: &[BigInt]) -> QPoly {
    let mut out: QPoly = c.iter().cloned().map(BigRational::from_integer).collect();
    trim(&mut out);
    out
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    let mut out: QPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    let mut out: QPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut out);
    out
}

pub fn neg(a: &[BigRational]) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub fn scale(a: &[BigRational], c: &BigRational) -> QPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let lead = b.last().unwrap();
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    divrem(a, b).1
}

pub fn monic(a: &[BigRational]) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let l = l.clone();
            a.iter().map(|c| c / &l).collect()
        }
    }
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<QPoly> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m));
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::from_integer(1.into())]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = BigRational::from_integer(1.into()) / &r0[0];
    Some(rem(&scale(&s0, &inv), m))
}

pub fn derivative(a: &[BigRational]) -> QPoly {
    let mut out: QPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: go through scaled integers
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn eval_complex(a: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Approximate complex roots together with certified inclusion radii.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    pub centers: Vec<Complex64>,
    pub radii: Vec<f64>,
}

/// Simultaneous Aberth-Ehrlich iteration on a squarefree polynomial, followed
/// by a posteriori inclusion disks `n·|f(z)|/|f'(z)|` (inflated by a
/// floating-point evaluation bound). Fails unless the disks are pairwise
/// disjoint, so each disk holds exactly one root.
pub fn isolate_roots(f: &[BigRational]) -> Result<RootEnclosure> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Ok(RootEnclosure { centers: vec![], radii: vec![] });
    }
    let lead = to_f64(f.last().unwrap());
    let c: Vec<f64> = f.iter().map(|x| to_f64(x) / lead).collect();
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, &x)| x * i as f64).collect();
    let cauchy = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * cauchy, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let fz = eval_complex(&c, z[i]);
            let dfz = eval_complex(&dc, z[i]);
            if fz.norm() == 0.0 {
                continue;
            }
            let ratio = fz / dfz;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    // polish each root with a couple of Newton steps
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let step = eval_complex(&c, *zi) / eval_complex(&dc, *zi);
            if step.is_finite() {
                *zi -= step;
            }
        }
    }
    let eps = f64::EPSILON;
    let mut radii = Vec::with_capacity(n);
    for &zi in &z {
        let fz = eval_complex(&c, zi).norm();
        let abs_sum: f64 = c
            .iter()
            .enumerate()
            .map(|(k, x)| x.abs() * zi.norm().powi(k as i32))
            .sum();
        let err = 4.0 * (n as f64 + 1.0) * eps * abs_sum;
        let dfz = eval_complex(&dc, zi).norm();
        if dfz == 0.0 || !dfz.is_finite() {
            return Err(Error::RootIsolationFailed("vanishing derivative".into()));
        }
        radii.push(n as f64 * (fz + err) / dfz * (1.0 + 1e-6));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return Err(Error::RootIsolationFailed(
                    "inclusion disks overlap".to_string(),
                ));
            }
        }
    }
    Ok(RootEnclosure { centers: z, radii })
}

fn int_poly_divides(f: &[BigInt], g: &[BigInt]) -> bool {
    // g monic
    let mut rem: Vec<BigInt> = f.to_vec();
    while rem.len() >= g.len() {
        let shift = rem.len() - g.len();
        let c = rem.last().unwrap().clone();
        for (j, y) in g.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        rem.pop();
    }
    rem.iter().all(|c| c.is_zero())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Irreducibility over ℚ of a monic integer polynomial.
///
/// Squarefreeness first; then degree patterns of factorizations modulo
/// small good primes rule out factor degrees; any surviving degree `d` is
/// settled by rounding the coefficients of every `d`-subset of the complex
/// roots and testing exact division.
pub fn is_irreducible_over_q(f: &[BigInt]) -> Result<bool> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let fq = from_ints(f);
    if gcd(&fq, &derivative(&fq)).len() > 1 {
        return Ok(false);
    }
    // candidate proper factor degrees 1..=n/2
    let mut possible = vec![true; n / 2 + 1];
    possible[0] = false;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 40 && possible.iter().any(|&b| b) {
        p = fp::next_prime(p + 1);
        let fp_poly: fp::FpPoly = {
            let mut v: fp::FpPoly = f
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                .collect();
            fp::trim(&mut v);
            v
        };
        if fp_poly.len() != f.len() || !fp::is_squarefree(&fp_poly, p) {
            continue;
        }
        tried += 1;
        let degs: Vec<usize> = fp::factor_squarefree(&fp_poly, p)
            .iter()
            .map(|g| g.len() - 1)
            .collect();
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (d, ok) in possible.iter_mut().enumerate() {
            *ok = *ok && sums[d];
        }
    }
    let degrees: Vec<usize> = (1..=n / 2).filter(|&d| possible[d]).collect();
    if degrees.is_empty() {
        return Ok(true);
    }
    if n > 16 {
        return Err(Error::Unsupported(format!(
            "irreducibility of degree-{n} polynomial with ambiguous factor patterns"
        )));
    }
    let roots = isolate_roots(&fq)?;
    for d in degrees {
        let mut sets = Vec::new();
        subsets(n, d, 0, &mut Vec::new(), &mut sets);
        for s in sets {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            for &i in &s {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * roots.centers[i];
                }
                prod = next;
            }
            if prod.iter().any(|c| c.im.abs() > 0.25 || c.re.abs() > 1e12) {
                continue;
            }
            let g: Vec<BigInt> = prod.iter().map(|c| BigInt::from(c.re.round() as i64)).collect();
            if int_poly_divides(f, &g) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_squarefree_over_q(f: &[BigRational]) -> bool {
    gcd(f, &derivative(f)).len() <= 1
}

pub fn all_roots_real(f: &[BigRational]) -> Result<bool> {
    let enc = isolate_roots(f)?;
    Ok(enc
        .centers
        .iter()
        .zip(&enc.radii)
        .all(|(z, r)| z.im.abs() <= *r))
}

pub fn max_abs_int(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn irreducibility_checks() {
        assert!(is_irreducible_over_q(&ints(&[-2, 0, 1])).unwrap());
        assert!(!is_irreducible_over_q(&ints(&[-4, 0, 1])).unwrap());
        // x^4 + 1 is reducible modulo every prime but irreducible over Q
        assert!(is_irreducible_over_q(&ints(&[1, 0, 0, 0, 1])).unwrap());
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        assert!(!is_irreducible_over_q(&ints(&[4, 0, 0, 0, 1])).unwrap());
        // (x^2 - 2)(x^2 - 3)
        assert!(!is_irreducible_over_q(&ints(&[6, 0, -5, 0, 1])).unwrap());
        assert!(is_irreducible_over_q(&ints(&[-1, -1, 1])).unwrap());
    }

    #[test]
    fn inverse_modulo_minpoly() {
        let f = from_ints(&ints(&[-2, 0, 1]));
        let w = from_ints(&ints(&[0, 1]));
        let inv = inverse_mod(&w, &f).unwrap();
        let prod = rem(&mul(&w, &inv), &f);
        assert_eq!(prod, from_ints(&ints(&[1])));
    }

    #[test]
    fn root_isolation_sqrt2() {
        let f = from_ints(&ints(&[-2, 0, 1]));
        let enc = isolate_roots(&f).unwrap();
        let mut re: Vec<f64> = enc.centers.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!(enc.radii.iter().all(|&r| r < 1e-12));
        assert!(all_roots_real(&f).unwrap());
        assert!(!all_roots_real(&from_ints(&ints(&[1, 0, 1]))).unwrap());
    }
}
