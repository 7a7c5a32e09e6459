//! Oracles written independently of the library's elimination, assembly and
//! group-algebra code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use sofic_rank::coeff::{Domain, FieldElement};
use sofic_rank::freealg::{GAMatrix, Word};
use sofic_rank::sofic::FiniteFSet;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Row reduction over ℚ that skips zero entries.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        let prow: Vec<(usize, BigRational)> =
            (c..cols).filter(|&j| !m[rank][j].is_zero()).map(|j| (j, &m[rank][j] / &pivot)).collect();
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for (j, v) in &prow {
                let d = &f * v;
                m[r][j.to_owned()] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Row reduction over `F_p`.
pub fn dense_rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u128, a as u128, (p - 2) as u128);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r as u64
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in rank + 1..rows {
            if m[r][c] == 0 {
                continue;
            }
            let f = (m[r][c] as u128 * iv as u128 % p as u128) as u64;
            for j in c..cols {
                let sub = (f as u128 * m[rank][j] as u128 % p as u128) as u64;
                m[r][j] = (m[r][j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Image of a point under a word, applying one letter at a time from the
/// generator arrays.
pub fn walk(x: &FiniteFSet, mut pt: usize, w: &Word) -> usize {
    for &l in w.letters() {
        let g = l.unsigned_abs() as usize;
        let perm = x.generator(g);
        pt = if l > 0 {
            perm[pt] as usize
        } else {
            perm.iter().position(|&y| y as usize == pt).unwrap()
        };
    }
    pt
}

/// `ρ_X(B)` as a dense rational matrix, built directly from the definition.
pub fn dense_operator(b: &GAMatrix, x: &FiniteFSet) -> Vec<Vec<BigRational>> {
    let n = x.size();
    let d = b.domain();
    let mut out = vec![vec![BigRational::zero(); b.cols() * n]; b.rows() * n];
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            for (w, c) in b.get(i, j).terms() {
                let c = d.to_rational(c).expect("rational coefficient");
                for pt in 0..n {
                    out[i * n + pt][j * n + walk(x, pt, w)] += c.clone();
                }
            }
        }
    }
    out
}

pub fn dense_rank_of(b: &GAMatrix, x: &FiniteFSet) -> BigRational {
    q(dense_rank(dense_operator(b, x)) as i64, x.size() as i64)
}

/// Laurent polynomial `(2 - a - a⁻¹)^l` by repeated convolution; returns
/// the constant term.
pub fn laplacian_moment(l: usize) -> BigInt {
    let mut poly: BTreeMap<i64, BigInt> = BTreeMap::from([(0, BigInt::one())]);
    for _ in 0..l {
        let mut next: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in &poly {
            for (de, dc) in [(0i64, 2i64), (1, -1), (-1, -1)] {
                *next.entry(e + de).or_insert_with(BigInt::zero) += c * dc;
            }
        }
        poly = next;
    }
    poly.get(&0).cloned().unwrap_or_default()
}

/// Number of `(i, j)` with `ωⁱ + ωʲ = 1`, `ω = e^{2πi/m}`, evaluated in
/// floating point.
pub fn torus_kernel_count(m: usize) -> usize {
    let tau = std::f64::consts::TAU;
    let mut count = 0;
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (tau * i as f64 / m as f64, tau * j as f64 / m as f64);
            let re = a.cos() + b.cos() - 1.0;
            let im = a.sin() + b.sin();
            if re.abs() < 1e-9 && im.abs() < 1e-9 {
                count += 1;
            }
        }
    }
    count
}

pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<i64> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i64);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    sofic_rank::freealg::reduce_word(&letters, rank).unwrap()
}

/// Text of a random element with integer coefficients in `[-c, c]` and
/// support among words of length at most `max_len`.
pub fn random_element_text(rng: &mut impl Rng, rank: usize, terms: usize, c: i64, max_len: usize) -> String {
    let mut parts = Vec::new();
    for _ in 0..terms {
        let coef = rng.gen_range(-c..=c);
        let w = random_word(rng, rank, max_len);
        parts.push(format!("({coef})*{w}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn random_matrix(rng: &mut impl Rng, domain: &Domain, rank: usize, rows: usize, cols: usize, c: i64, max_len: usize) -> GAMatrix {
    let texts: Vec<Vec<String>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let terms = rng.gen_range(0..=3);
                    random_element_text(rng, rank, terms, c, max_len)
                })
                .collect()
        })
        .collect();
    let refs: Vec<Vec<&str>> = texts.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    GAMatrix::parse(&refs, domain, rank).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_fset(rng: &mut impl Rng, rank: usize, max_size: usize) -> FiniteFSet {
    let n = rng.gen_range(1..=max_size);
    FiniteFSet::new((0..rank).map(|_| random_perm(rng, n)).collect(), "random").unwrap()
}

pub fn abs_rational(x: &FieldElement, d: &Domain) -> BigRational {
    d.to_rational(x).unwrap().abs()
}

/// `ρ_X(B)` for integer coefficients as a dense `i64` matrix.
pub fn dense_operator_int(b: &GAMatrix, x: &FiniteFSet) -> Vec<Vec<i64>> {
    dense_operator(b, x)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    assert!(v.is_integer());
                    i64::try_from(v.to_integer()).unwrap()
                })
                .collect()
        })
        .collect()
}

pub fn reduce_rows(m: &[Vec<i64>], p: u64) -> Vec<Vec<u64>> {
    m.iter().map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()).collect()
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<BigRational>]) -> BigRational {
    if m.is_empty() {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<BigRational>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Positive semidefiniteness of the Hankel matrix through all principal
/// minors.
pub fn hankel_minors_nonnegative(mu: &[BigRational]) -> bool {
    let s = (mu.len() - 1) / 2 + 1;
    (1u32..1 << s).all(|mask| {
        let idx: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<BigRational>> = idx.iter().map(|&i| idx.iter().map(|&j| mu[i + j].clone()).collect()).collect();
        !det(&sub).is_negative()
    })
}
