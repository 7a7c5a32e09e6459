//! Sparse Gaussian elimination with a Markowitz-style pivot choice, generic
//! over the entry ring. Field rings normalize pivots; integral domains use
//! fraction-free row combinations followed by content removal.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::fp;
use crate::coeff::mpoly::MPoly;
use crate::coeff::{Domain, FieldElement};

pub type Row<E> = Vec<(u32, E)>;

pub trait EliminationRing {
    type E: Clone;
    fn is_zero(&self, x: &Self::E) -> bool;
    /// Called once on a row when it is chosen as pivot row for `col`.
    fn prepare_pivot(&self, _row: &mut Row<Self::E>, _col: u32) {}
    /// Combination of `target` and `pivot` with no entry in `col`.
    fn reduce(&self, target: &Row<Self::E>, pivot: &Row<Self::E>, col: u32) -> Row<Self::E>;
}

pub(crate) fn entry<E>(row: &Row<E>, col: u32) -> Option<&E> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Merges two sorted rows; `f` combines the entries present at one column
/// and returns `None` for a zero result.
pub(crate) fn merge<E, T>(a: &Row<E>, b: &Row<E>, mut f: impl FnMut(Option<&E>, Option<&E>) -> Option<T>) -> Row<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (c, x, y) = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, Some(&p.1), Some(&q.1))
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, Some(&p.1), None)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, Some(&p.1), None)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, None, Some(&q.1))
            }
            (None, None) => unreachable!(),
        };
        if let Some(v) = f(x, y) {
            out.push((c, v));
        }
    }
    out
}

/// `F_p` with `p < 2^63`.
pub struct PrimeRing(pub u64);

impl EliminationRing for PrimeRing {
    type E = u64;
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn prepare_pivot(&self, row: &mut Row<u64>, col: u32) {
        let p = self.0;
        let inv = fp::inv_mod(*entry(row, col).expect("pivot present"), p).expect("nonzero pivot");
        if inv != 1 {
            for e in row.iter_mut() {
                e.1 = fp::mul_mod(e.1, inv, p);
            }
        }
    }
    fn reduce(&self, target: &Row<u64>, pivot: &Row<u64>, col: u32) -> Row<u64> {
        let p = self.0;
        let f = fp::neg_mod(*entry(target, col).expect("target has column"), p);
        merge(target, pivot, |x, y| {
            let v = match (x, y) {
                (Some(&a), Some(&b)) => fp::add_mod(a, fp::mul_mod(f, b, p), p),
                (Some(&a), None) => a,
                (None, Some(&b)) => fp::mul_mod(f, b, p),
                (None, None) => 0,
            };
            (v != 0).then_some(v)
        })
    }
}

/// Any field given by a runtime [`Domain`].
pub struct DomainRing<'a>(pub &'a Domain);

impl EliminationRing for DomainRing<'_> {
    type E = FieldElement;
    fn is_zero(&self, x: &FieldElement) -> bool {
        self.0.is_zero(x)
    }
    fn prepare_pivot(&self, row: &mut Row<FieldElement>, col: u32) {
        let d = self.0;
        let inv = d.inv(entry(row, col).expect("pivot present")).expect("nonzero pivot");
        for e in row.iter_mut() {
            e.1 = d.mul(&e.1, &inv);
        }
    }
    fn reduce(&self, target: &Row<FieldElement>, pivot: &Row<FieldElement>, col: u32) -> Row<FieldElement> {
        let d = self.0;
        let f = d.neg(entry(target, col).expect("target has column"));
        merge(target, pivot, |x, y| {
            let v = match (x, y) {
                (Some(a), Some(b)) => d.add(a, &d.mul(&f, b)),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => d.mul(&f, b),
                (None, None) => d.zero(),
            };
            (!d.is_zero(&v)).then_some(v)
        })
    }
}

/// ℤ, fraction-free.
pub struct IntegerRing;

impl EliminationRing for IntegerRing {
    type E = BigInt;
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn reduce(&self, target: &Row<BigInt>, pivot: &Row<BigInt>, col: u32) -> Row<BigInt> {
        let a = entry(pivot, col).expect("pivot present");
        let b = entry(target, col).expect("target has column");
        let g = a.gcd(b);
        let (a, b) = (a / &g, b / &g);
        let mut row = merge(target, pivot, |x, y| {
            let v = match (x, y) {
                (Some(t), Some(q)) => &a * t - &b * q,
                (Some(t), None) => &a * t,
                (None, Some(q)) => -(&b * q),
                (None, None) => BigInt::zero(),
            };
            (!v.is_zero()).then_some(v)
        });
        let mut content = BigInt::zero();
        for e in &row {
            content = content.gcd(&e.1);
            if content.is_one() {
                return row;
            }
        }
        if !content.is_zero() {
            for e in row.iter_mut() {
                e.1 /= &content;
            }
        }
        row
    }
}

/// ℚ[t_1..t_l], fraction-free.
pub struct PolyRing;

impl EliminationRing for PolyRing {
    type E = MPoly;
    fn is_zero(&self, x: &MPoly) -> bool {
        x.is_zero()
    }
    fn reduce(&self, target: &Row<MPoly>, pivot: &Row<MPoly>, col: u32) -> Row<MPoly> {
        let a = entry(pivot, col).expect("pivot present");
        let b = entry(target, col).expect("target has column");
        let g = a.gcd(b);
        let a = a.div_exact(&g).expect("gcd divides");
        let b = b.div_exact(&g).expect("gcd divides");
        let row = merge(target, pivot, |x, y| {
            let v = match (x, y) {
                (Some(t), Some(q)) => a.mul(t).sub(&b.mul(q)),
                (Some(t), None) => a.mul(t),
                (None, Some(q)) => b.mul(q).neg(),
                (None, None) => MPoly::zero(a.nvars()),
            };
            (!v.is_zero()).then_some(v)
        });
        let mut content: Option<MPoly> = None;
        for e in &row {
            let c = match &content {
                None => e.1.clone(),
                Some(c) => c.gcd(&e.1),
            };
            if c.as_constant().is_some() {
                return row;
            }
            content = Some(c);
        }
        match content {
            Some(c) => row.into_iter().map(|(j, v)| (j, v.div_exact(&c).expect("content divides"))).collect(),
            None => row,
        }
    }
}

/// Result of elimination: pivots `(row, col)` in the order chosen, and the
/// pivot rows as they were when chosen (already reduced by earlier pivots).
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    pub pivots: Vec<(usize, u32)>,
    pub rows: Vec<Row<E>>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Eliminates `rows` (each sorted by column, no zeros) over `ring`. With
/// `order` given, replays that pivot sequence instead of choosing pivots and
/// returns `None` as soon as a prescribed pivot entry vanishes.
pub fn eliminate<R: EliminationRing>(
    ring: &R,
    ncols: usize,
    mut rows: Vec<Row<R::E>>,
    order: Option<&[(usize, u32)]>,
) -> Option<Echelon<R::E>> {
    let nrows = rows.len();
    let mut active = vec![true; nrows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count = vec![0usize; ncols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c as usize].push(i as u32);
            col_count[c as usize] += 1;
        }
    }
    let mut col_done = vec![false; ncols];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = BinaryHeap::new();
    if order.is_none() {
        for c in 0..ncols {
            if col_count[c] > 0 {
                heap.push(Reverse((col_count[c], c as u32)));
            }
        }
    }
    let mut pivots = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut mark = vec![u32::MAX; nrows];
    let mut step = 0usize;
    let mut holders: Vec<u32> = Vec::new();
    loop {
        let (forced_row, col) = match order {
            Some(o) => match o.get(step) {
                Some(&(r, c)) => (Some(r), c),
                None => break,
            },
            None => {
                let Some(Reverse((cnt, c))) = heap.pop() else { break };
                if col_done[c as usize] || cnt != col_count[c as usize] || cnt == 0 {
                    continue;
                }
                (None, c)
            }
        };
        step += 1;
        let cu = col as usize;
        holders.clear();
        for &r in &col_rows[cu] {
            let ru = r as usize;
            if active[ru] && mark[ru] != col && entry(&rows[ru], col).is_some() {
                mark[ru] = col;
                holders.push(r);
            }
        }
        col_rows[cu] = Vec::new();
        col_done[cu] = true;
        let prow = match forced_row {
            Some(r) => {
                if !active[r] || entry(&rows[r], col).is_none() {
                    return None;
                }
                r
            }
            None => match holders.iter().min_by_key(|&&r| (rows[r as usize].len(), r)) {
                Some(&r) => r as usize,
                None => continue,
            },
        };
        active[prow] = false;
        let mut pivot = std::mem::take(&mut rows[prow]);
        ring.prepare_pivot(&mut pivot, col);
        for &(c, _) in &pivot {
            let cu = c as usize;
            col_count[cu] -= 1;
            if order.is_none() && !col_done[cu] && col_count[cu] > 0 {
                heap.push(Reverse((col_count[cu], c)));
            }
        }
        for &t in &holders {
            let tu = t as usize;
            if tu == prow {
                continue;
            }
            let new = ring.reduce(&rows[tu], &pivot, col);
            for &(c, _) in &rows[tu] {
                col_count[c as usize] -= 1;
            }
            for &(c, _) in &new {
                let cu = c as usize;
                col_count[cu] += 1;
                if entry(&rows[tu], c).is_none() {
                    col_rows[cu].push(t);
                }
            }
            for &(c, _) in rows[tu].iter().chain(new.iter()) {
                let cu = c as usize;
                if order.is_none() && !col_done[cu] && col_count[cu] > 0 {
                    heap.push(Reverse((col_count[cu], c)));
                }
            }
            rows[tu] = new;
        }
        pivots.push((prow, col));
        pivot_rows.push(pivot);
    }
    Some(Echelon { pivots, rows: pivot_rows })
}

/// Rank via elimination without keeping pivot rows around longer than needed.
pub fn rank_of<R: EliminationRing>(ring: &R, ncols: usize, rows: Vec<Row<R::E>>) -> usize {
    eliminate(ring, ncols, rows, None).expect("free pivoting never fails").rank()
}

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Row<num_rational::BigRational>]) -> Vec<Row<BigInt>> {
    rows.iter()
        .map(|r| {
            let mut l = BigInt::one();
            for (_, q) in r {
                l = l.lcm(q.denom());
            }
            r.iter().map(|(c, q)| (*c, q.numer() * (&l / q.denom()))).collect()
        })
        .collect()
}

/// Dense fraction-free elimination used as a last resort over ℤ.
pub fn integer_rank_dense(nrows: usize, ncols: usize, rows: &[Row<BigInt>]) -> usize {
    let mut a = vec![vec![BigInt::zero(); ncols]; nrows];
    for (i, r) in rows.iter().enumerate() {
        for (c, v) in r {
            a[i][*c as usize] = v.clone();
        }
    }
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            if a[i][c].is_zero() {
                continue;
            }
            let (x, y) = (a[rank][c].clone(), a[i][c].clone());
            let g = x.gcd(&y);
            let (x, y) = (&x / &g, &y / &g);
            for j in c..ncols {
                let v = &x * &a[i][j] - &y * &a[rank][j];
                a[i][j] = v;
            }
            let mut content = BigInt::zero();
            for v in &a[i][c..] {
                content = content.gcd(v);
            }
            if content > BigInt::one() {
                for v in a[i][c..].iter_mut() {
                    *v /= &content;
                }
            }
        }
        rank += 1;
    }
    rank
}
