//! Arithmetic in prime fields `F_p` (p < 2^63) and dense polynomials over them.
//!
//! Polynomials are little-endian coefficient vectors with no trailing zeros;
//! the zero polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FpPoly = Vec<u64>;

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        (a as u128 + p as u128 - b as u128) as u64
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(from: u64) -> u64 {
    let mut n = from.max(2);
    while !is_prime(n) {
        n += 1;
    }
    n
}

pub fn prev_prime(below: u64) -> u64 {
    let mut n = below - 1;
    while !is_prime(n) {
        n -= 1;
    }
    n
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn poly_add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn poly_scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let lead_inv = inv_mod(*b.last().unwrap(), p).expect("leading coefficient invertible");
    let mut rem: FpPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = mul_mod(*rem.last().unwrap(), lead_inv, p);
        quot[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            rem[shift + j] = sub_mod(rem[shift + j], mul_mod(c, y, p), p);
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    poly_divrem(a, b, p).1
}

pub fn make_monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => poly_scale(a, inv_mod(l, p).unwrap(), p),
    }
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s·a ≡ g (mod m)`.
pub fn poly_xgcd(a: &[u64], m: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (m.to_vec(), poly_rem(a, m, p));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let lead = *r0.last().unwrap_or(&1);
    let inv = inv_mod(lead, p).unwrap_or(1);
    (poly_scale(&r0, inv, p), poly_scale(&s0, inv, p))
}

pub fn poly_derivative(a: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, (i as u64) % p, p))
        .collect();
    trim(&mut out);
    out
}

pub fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    poly_rem(&poly_mul(a, b, p), m, p)
}

pub fn poly_powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = poly_rem(&[1], m, p);
    let b = poly_rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        acc = poly_mulmod(&acc, &acc, m, p);
        if exp.bit(i) {
            acc = poly_mulmod(&acc, &b, m, p);
        }
    }
    acc
}

fn frobenius_power(m: &[u64], p: u64, times: usize) -> FpPoly {
    let pe = BigUint::from(p);
    let mut h = poly_rem(&[0, 1], m, p);
    for _ in 0..times {
        h = poly_powmod(&h, &pe, m, p);
    }
    h
}

pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let d = poly_derivative(f, p);
    if d.is_empty() {
        return f.len() <= 1;
    }
    poly_gcd(f, &d, p).len() == 1
}

/// Rabin's irreducibility test.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let n = match degree(g) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let x: FpPoly = poly_rem(&[0, 1], g, p);
    if frobenius_power(g, p, n) != x {
        return false;
    }
    for q in prime_factors(n as u64) {
        let h = frobenius_power(g, p, n / q as usize);
        if poly_gcd(&poly_sub(&h, &x, p), g, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Monic irreducible factors of a squarefree polynomial, sorted by degree and
/// then lexicographically by coefficients (constant term first).
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<FpPoly> {
    let f = make_monic(f, p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = poly_rem(&[0, 1], &rest, p);
    let mut d = 0;
    let pe = BigUint::from(p);
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = poly_powmod(&h, &pe, &rest, p);
        let g = poly_gcd(&poly_sub(&h, &[0, 1], p), &rest, p);
        if g.len() > 1 {
            out.extend(equal_degree_split(&g, d, p));
            rest = poly_divrem(&rest, &g, p).0;
            h = poly_rem(&h, &rest, p);
        }
    }
    if rest.len() > 1 {
        out.push(make_monic(&rest, p));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn equal_degree_split(g: &[u64], d: usize, p: u64) -> Vec<FpPoly> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (p.wrapping_mul(31) + n as u64));
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1u32;
    loop {
        let a: FpPoly = {
            let mut v: FpPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut acc = Vec::new();
            let mut t = poly_rem(&a, g, p);
            for _ in 0..d {
                acc = poly_add(&acc, &t, p);
                t = poly_mulmod(&t, &t, g, p);
            }
            acc
        } else {
            poly_sub(&poly_powmod(&a, &exp, g, p), &[1], p)
        };
        let c = poly_gcd(&b, g, p);
        if c.len() > 1 && c.len() < g.len() {
            let other = poly_divrem(g, &c, p).0;
            let mut out = equal_degree_split(&c, d, p);
            out.extend(equal_degree_split(&make_monic(&other, p), d, p));
            return out;
        }
        if exp.is_zero() {
            unreachable!("degree split over F_2 with d = 0");
        }
    }
}
