//! Exact rank over ℚ by modular elimination with an exact certificate.
//!
//! The rank `r` modulo a prime is a lower bound for the rank over ℚ. When
//! `r` is not already maximal, the canonical kernel basis attached to the
//! pivot columns is computed modulo several primes by replaying the same
//! pivot sequence, lifted by Chinese remaindering and rational
//! reconstruction, and verified exactly. A verified kernel of dimension
//! `cols - r` proves the rank is at most `r`. If lifting does not succeed
//! the rank is computed by exact fraction-free elimination instead.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::elim::{eliminate, rank_of, Echelon, IntegerRing, PrimeRing, Row};
use crate::coeff::fp;

const PRIME_COUNT: usize = 48;

fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut p = 1u64 << 62;
        while out.len() < PRIME_COUNT {
            p = fp::prev_prime(p);
            out.push(p);
        }
        out
    })
}

fn reduce_rows(rows: &[Row<BigInt>], p: u64) -> Vec<Row<u64>> {
    let pb = BigInt::from(p);
    rows.iter()
        .map(|r| {
            r.iter()
                .filter_map(|(c, v)| {
                    let x = match v.to_i64() {
                        Some(s) => s.rem_euclid(p as i64) as u64,
                        None => v.mod_floor(&pb).to_u64().unwrap(),
                    };
                    (x != 0).then_some((*c, x))
                })
                .collect()
        })
        .collect()
}

fn transpose<E: Clone>(rows: &[Row<E>], ncols: usize) -> Vec<Row<E>> {
    let mut out: Vec<Row<E>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, v) in r {
            out[*c as usize].push((i as u32, v.clone()));
        }
    }
    out
}

/// How the rank was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Full rank modulo a prime.
    FullRankModP,
    /// A kernel basis lifted from modular images and verified over ℚ.
    VerifiedKernel { primes: usize },
    /// Exact fraction-free elimination over ℤ.
    ExactElimination,
}

/// Rank over ℚ of an integer matrix given by sparse rows.
pub fn integer_rank(ncols: usize, rows: &[Row<BigInt>]) -> (usize, Certificate) {
    let nrows = rows.len();
    if nrows == 0 || ncols == 0 {
        return (0, Certificate::FullRankModP);
    }
    let p0 = large_primes()[0];
    let e0 = eliminate(&PrimeRing(p0), ncols, reduce_rows(rows, p0), None).unwrap();
    let r = e0.rank();
    if r == nrows.min(ncols) {
        return (r, Certificate::FullRankModP);
    }
    let certified = if ncols - r <= nrows - r {
        certify_kernel(ncols, rows, e0)
    } else {
        let t = transpose(rows, ncols);
        let e = eliminate(&PrimeRing(p0), nrows, reduce_rows(&t, p0), None).unwrap();
        certify_kernel(nrows, &t, e)
    };
    match certified {
        Some(k) => (r, Certificate::VerifiedKernel { primes: k }),
        None => (rank_of(&IntegerRing, ncols, rows.to_vec()), Certificate::ExactElimination),
    }
}

/// Values of the pivot variables of every requested kernel vector modulo
/// `p`, one dense vector (indexed like `wanted`) per pivot.
fn kernel_mod_p(e: &Echelon<u64>, free_index: &[Option<usize>], wanted: &[usize], p: u64) -> Vec<Vec<u64>> {
    let r = e.rank();
    let w = wanted.len();
    let mut slot = vec![usize::MAX; free_index.len()];
    for (s, &f) in wanted.iter().enumerate() {
        slot[f] = s;
    }
    let mut pivot_of_col = vec![usize::MAX; free_index.len()];
    for (i, &(_, c)) in e.pivots.iter().enumerate() {
        pivot_of_col[c as usize] = i;
    }
    let mut x = vec![Vec::new(); r];
    for i in (0..r).rev() {
        let col = e.pivots[i].1;
        let mut acc = vec![0u64; w];
        for &(c, v) in &e.rows[i] {
            if c == col {
                continue;
            }
            let f = fp::neg_mod(v, p);
            let cu = c as usize;
            if free_index[cu].is_some() {
                let s = slot[cu];
                if s != usize::MAX {
                    acc[s] = fp::add_mod(acc[s], f, p);
                }
            } else {
                let xj: &Vec<u64> = &x[pivot_of_col[cu]];
                for (a, &b) in acc.iter_mut().zip(xj) {
                    if b != 0 {
                        *a = fp::add_mod(*a, fp::mul_mod(f, b, p), p);
                    }
                }
            }
        }
        x[i] = acc;
    }
    x
}

/// `a/b` with `|a|, b ≤ sqrt(m/2)` and `a ≡ b·u (mod m)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.sign() == Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

fn small_rows(rows: &[Row<BigInt>]) -> Option<Vec<Row<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|(c, v)| v.to_i64().map(|x| (*c, x))).collect::<Option<Vec<_>>>())
        .collect()
}

/// Exact test of `M·v = 0` for an integer vector `v` given densely.
fn annihilates(rows: &[Row<BigInt>], small: Option<&[Row<i64>]>, v: &[BigInt]) -> bool {
    let small_v: Option<Vec<i64>> = v.iter().map(|x| x.to_i64()).collect();
    if let (Some(sr), Some(sv)) = (small, small_v.as_ref()) {
        let mut overflow = false;
        for r in sr {
            let mut acc: i128 = 0;
            for &(c, a) in r {
                let b = sv[c as usize];
                if b == 0 {
                    continue;
                }
                match acc.checked_add(a as i128 * b as i128) {
                    Some(s) => acc = s,
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                break;
            }
            if acc != 0 {
                return false;
            }
        }
        if !overflow {
            return true;
        }
    }
    rows.iter().all(|r| {
        let mut acc = BigInt::zero();
        for (c, a) in r {
            let b = &v[*c as usize];
            if !b.is_zero() {
                acc += a * b;
            }
        }
        acc.is_zero()
    })
}

/// Tries to prove `rank ≤ e0.rank()` by exhibiting a verified kernel basis.
/// Returns the number of primes used.
fn certify_kernel(ncols: usize, rows: &[Row<BigInt>], e0: Echelon<u64>) -> Option<usize> {
    let primes = large_primes();
    let mut free_index: Vec<Option<usize>> = vec![Some(0); ncols];
    for &(_, c) in &e0.pivots {
        free_index[c as usize] = None;
    }
    let mut free_cols = Vec::new();
    for (c, f) in free_index.iter_mut().enumerate() {
        if f.is_some() {
            *f = Some(free_cols.len());
            free_cols.push(c);
        }
    }
    let pivot_cols: Vec<usize> = e0.pivots.iter().map(|&(_, c)| c as usize).collect();
    let order = e0.pivots.clone();
    let small = small_rows(rows);
    let mut pending: Vec<usize> = free_cols.clone();
    // CRT state per pending column: residues of the pivot variables
    let mut residues: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); pivot_cols.len()]; free_cols.len()];
    let mut modulus = BigInt::one();
    let mut echelon = Some(e0);
    for (j, &p) in primes.iter().enumerate() {
        let e = match echelon.take() {
            Some(e) => e,
            None => match eliminate(&PrimeRing(p), ncols, reduce_rows(rows, p), Some(&order)) {
                Some(e) => e,
                None => continue,
            },
        };
        let x = kernel_mod_p(&e, &free_index, &pending, p);
        let pb = BigInt::from(p);
        let inv_m = if modulus.is_one() {
            BigInt::zero()
        } else {
            BigInt::from(fp::inv_mod((&modulus % &pb).to_u64().unwrap(), p).unwrap())
        };
        let new_modulus = &modulus * &pb;
        for (s, &f) in pending.iter().enumerate() {
            let fi = free_index[f].unwrap();
            for (i, res) in residues[fi].iter_mut().enumerate() {
                let a = BigInt::from(x[i][s]);
                // x ≡ res (mod modulus), x ≡ a (mod p)
                let t = ((&a - &*res).mod_floor(&pb) * &inv_m).mod_floor(&pb);
                *res = if modulus.is_one() { a } else { &*res + &modulus * t };
            }
        }
        modulus = new_modulus;
        let mut still = Vec::new();
        for &f in &pending {
            let fi = free_index[f].unwrap();
            let guess: Option<Vec<(BigInt, BigInt)>> =
                residues[fi].iter().map(|u| rational_reconstruct(u, &modulus)).collect();
            if let Some(g) = &guess {
                let mut den = BigInt::one();
                for (_, b) in g {
                    den = den.lcm(b);
                }
                let mut v = vec![BigInt::zero(); ncols];
                v[f] = den.clone();
                for (i, (a, b)) in g.iter().enumerate() {
                    v[pivot_cols[i]] = a * (&den / b);
                }
                if annihilates(rows, small.as_deref(), &v) {
                    continue;
                }
            }
            still.push(f);
        }
        pending = still;
        if pending.is_empty() {
            return Some(j + 1);
        }
    }
    None
}
