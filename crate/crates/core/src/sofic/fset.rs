use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coeff::{DenseMatrix, Domain};
use crate::error::{Error, Result};
use crate::freealg::{ball, Word};

pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// A finite right action of the free group of rank `r` on `{0..N-1}`, one
/// permutation per generator together with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFSet {
    rank: usize,
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
    label: String,
}

impl fmt::Debug for FiniteFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteFSet({}, size {}, rank {})", self.label, self.size(), self.rank)
    }
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

impl FiniteFSet {
    pub fn new(perms: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let rank = perms.len();
        if rank == 0 {
            return Err(Error::InvalidFSet("need at least one generator".into()));
        }
        let n = perms[0].len();
        if n == 0 {
            return Err(Error::InvalidFSet("empty point set".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidFSet("too many points".into()));
        }
        let mut forward = Vec::with_capacity(rank);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::InvalidFSet(format!("generator {} has {} images, expected {n}", g + 1, p.len())));
            }
            let mut seen = vec![false; n];
            for &y in p {
                if y >= n || seen[y] {
                    return Err(Error::InvalidFSet(format!("generator {} is not a permutation", g + 1)));
                }
                seen[y] = true;
            }
            forward.push(p.iter().map(|&y| y as u32).collect::<Vec<u32>>());
        }
        let backward = forward.iter().map(|p| invert(p)).collect();
        Ok(FiniteFSet { rank, forward, backward, label: label.into() })
    }

    /// The one-point set with every generator acting trivially.
    pub fn trivial(rank: usize) -> Self {
        Self::new(vec![vec![0]; rank], "trivial").expect("valid")
    }

    /// `ℤ/m` with the single generator acting by `x ↦ x + 1`.
    pub fn cyclic(m: usize) -> Result<Self> {
        Self::new(vec![(0..m).map(|x| (x + 1) % m).collect()], format!("Z/{m}"))
    }

    pub fn size(&self) -> usize {
        self.forward[0].len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Image of generator `g` (1-based), as a slice of point images.
    pub fn generator(&self, g: usize) -> &[u32] {
        &self.forward[g - 1]
    }

    #[inline]
    pub fn apply_letter(&self, x: usize, letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.forward[g][x] as usize
        } else {
            self.backward[g][x] as usize
        }
    }

    /// `x · w`, applying the letters of `w` left to right.
    pub fn act(&self, x: usize, w: &Word) -> Result<usize> {
        if x >= self.size() {
            return Err(Error::PointOutOfRange { point: x, size: self.size() });
        }
        if w.max_generator() > self.rank {
            return Err(Error::AlphabetMismatch(w.max_generator(), self.rank));
        }
        Ok(self.act_unchecked(x, w))
    }

    pub(crate) fn act_unchecked(&self, x: usize, w: &Word) -> usize {
        w.letters().iter().fold(x, |y, &l| self.apply_letter(y, l))
    }

    /// The permutation `x ↦ x·w` of all points.
    pub fn word_permutation(&self, w: &Word) -> Vec<u32> {
        let mut cur: Vec<u32> = (0..self.size() as u32).collect();
        for &l in w.letters() {
            let g = l.unsigned_abs() as usize - 1;
            let map = if l > 0 { &self.forward[g] } else { &self.backward[g] };
            for y in cur.iter_mut() {
                *y = map[*y as usize];
            }
        }
        cur
    }

    pub fn fixed_count(&self, w: &Word) -> usize {
        if w.is_identity() {
            return self.size();
        }
        (0..self.size()).filter(|&x| self.act_unchecked(x, w) == x).count()
    }

    pub fn fixed_ratio(&self, w: &Word) -> BigRational {
        BigRational::new(BigInt::from(self.fixed_count(w)), BigInt::from(self.size()))
    }

    /// Conjugates every generator by the relabeling `x ↦ relabel[x]`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<Self> {
        let n = self.size();
        if relabel.len() != n {
            return Err(Error::InvalidFSet("relabeling has wrong length".into()));
        }
        let perms = self
            .forward
            .iter()
            .map(|p| {
                let mut q = vec![0usize; n];
                for x in 0..n {
                    q[relabel[x]] = relabel[p[x] as usize];
                }
                q
            })
            .collect();
        Self::new(perms, self.label.clone())
    }

    /// Orbits ordered by smallest point, each in breadth-first order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut orbit = vec![s];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                i += 1;
                for g in 0..self.rank {
                    for y in [self.forward[g][x], self.backward[g][x]] {
                        let y = y as usize;
                        if !seen[y] {
                            seen[y] = true;
                            orbit.push(y);
                        }
                    }
                }
            }
            out.push(orbit);
        }
        out
    }

    /// Serializes as `fset N r` followed by one line of images per generator.
    pub fn to_text(&self) -> String {
        let mut s = format!("fset {} {}\n", self.size(), self.rank);
        for p in &self.forward {
            let line: Vec<String> = p.iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidFSet("empty file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "fset" {
            return Err(Error::InvalidFSet(format!("bad header '{header}'")));
        }
        let n: usize = h[1].parse().map_err(|_| Error::InvalidFSet("bad size".into()))?;
        let r: usize = h[2].parse().map_err(|_| Error::InvalidFSet("bad rank".into()))?;
        let mut perms = Vec::with_capacity(r);
        for g in 0..r {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidFSet(format!("missing line for generator {}", g + 1)))?;
            let p = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidFSet(format!("bad image '{t}'"))))
                .collect::<Result<Vec<_>>>()?;
            if p.len() != n {
                return Err(Error::InvalidFSet(format!("generator {} has {} images, expected {n}", g + 1, p.len())));
            }
            perms.push(p);
        }
        if lines.next().is_some() {
            return Err(Error::InvalidFSet("trailing lines".into()));
        }
        Self::new(perms, "file")
    }
}

/// Diagonal action on `X × Z`; the pair `(x, z)` has index `x·|Z| + z`.
pub fn product_action(x: &FiniteFSet, z: &FiniteFSet, cap: usize) -> Result<FiniteFSet> {
    if x.rank != z.rank {
        return Err(Error::AlphabetMismatch(x.rank, z.rank));
    }
    let (nx, nz) = (x.size(), z.size());
    match nx.checked_mul(nz) {
        Some(n) if n <= cap => {}
        _ => return Err(Error::ProductTooLarge(nx, nz, cap)),
    }
    let perms = (0..x.rank)
        .map(|g| {
            let mut p = Vec::with_capacity(nx * nz);
            for a in 0..nx {
                let ia = x.forward[g][a] as usize;
                for b in 0..nz {
                    p.push(ia * nz + z.forward[g][b] as usize);
                }
            }
            p
        })
        .collect();
    FiniteFSet::new(perms, format!("{} x {}", x.label, z.label))
}

/// The finite group generated by `gens` inside `GL_k` of a finite field,
/// acting on itself by right multiplication. Point 0 is the identity; the
/// rest are numbered in breadth-first order.
pub fn regular_action_of_matrices(domain: &Domain, gens: &[DenseMatrix], cap: usize) -> Result<FiniteFSet> {
    if !domain.is_finite() {
        return Err(Error::DomainMismatch(domain.name(), "a finite field".into()));
    }
    if gens.is_empty() {
        return Err(Error::InvalidFSet("need at least one generator".into()));
    }
    let k = gens[0].rows();
    let mut index: HashMap<DenseMatrix, usize> = HashMap::new();
    let mut elements = vec![DenseMatrix::identity(domain, k)];
    index.insert(elements[0].clone(), 0);
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (g, m) in gens.iter().enumerate() {
            let y = elements[x].mul(domain, m)?;
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ClosureTooLarge(cap));
                    }
                    let j = elements.len();
                    index.insert(y.clone(), j);
                    elements.push(y);
                    queue.push_back(j);
                    j
                }
            };
            if perms[g].len() <= x {
                perms[g].resize(x + 1, usize::MAX);
            }
            perms[g][x] = j;
        }
    }
    for p in &mut perms {
        p.resize(elements.len(), usize::MAX);
    }
    FiniteFSet::new(perms, format!("image in GL_{k}({})", domain.name()))
}

/// Membership predicate for the kernel `N` of `F → G`.
#[derive(Clone)]
pub enum MembershipOracle {
    /// `G = ℤ^d`: a word is trivial iff all exponent sums vanish.
    AllExponentSumsZero,
    /// `G = F`: only the empty word is trivial.
    Trivial,
    /// `G` is the image of `F` in a permutation group.
    ActsTriviallyOn(Arc<FiniteFSet>),
    Custom(Arc<dyn Fn(&Word) -> bool + Send + Sync>),
}

impl fmt::Debug for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipOracle::AllExponentSumsZero => f.write_str("AllExponentSumsZero"),
            MembershipOracle::Trivial => f.write_str("Trivial"),
            MembershipOracle::ActsTriviallyOn(x) => write!(f, "ActsTriviallyOn({x:?})"),
            MembershipOracle::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl MembershipOracle {
    pub fn contains(&self, w: &Word) -> bool {
        match self {
            MembershipOracle::AllExponentSumsZero => {
                w.exponent_sums(w.max_generator()).iter().all(|&s| s == 0)
            }
            MembershipOracle::Trivial => w.is_identity(),
            MembershipOracle::ActsTriviallyOn(x) => {
                x.word_permutation(w).iter().enumerate().all(|(i, &y)| i == y as usize)
            }
            MembershipOracle::Custom(f) => f(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectEntry {
    pub word: Word,
    pub ratio: BigRational,
    pub member: Option<bool>,
}

impl DefectEntry {
    /// `1 - ratio` for members of `N`, `ratio` otherwise.
    pub fn deviation(&self) -> Option<BigRational> {
        self.member.map(|m| if m { BigRational::one() - &self.ratio } else { self.ratio.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectProfile {
    pub radius: usize,
    pub entries: Vec<DefectEntry>,
}

impl DefectProfile {
    pub fn max_deviation(&self) -> Option<BigRational> {
        let mut best: Option<BigRational> = None;
        for e in &self.entries {
            let d = e.deviation()?;
            if best.as_ref().map_or(true, |b| d > *b) {
                best = Some(d);
            }
        }
        best.or_else(|| Some(BigRational::zero()))
    }
}

/// Fixed-point ratios of every word in the ball of radius `k`.
pub fn defect_profile(
    x: &FiniteFSet,
    k: usize,
    oracle: Option<&MembershipOracle>,
    ball_cap: u128,
) -> Result<DefectProfile> {
    let words = ball(k, x.rank, ball_cap)?;
    let entries = words
        .into_par_iter()
        .map(|w| DefectEntry {
            ratio: x.fixed_ratio(&w),
            member: oracle.map(|o| o.contains(&w)),
            word: w,
        })
        .collect();
    Ok(DefectProfile { radius: k, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;
    use crate::freealg::DEFAULT_BALL_CAP;

    fn word(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    #[test]
    fn cyclic_action() {
        let x = FiniteFSet::cyclic(4).unwrap();
        assert_eq!(x.act(1, &word("a", 1)).unwrap(), 2);
        assert_eq!(x.act(3, &word("a^2", 1)).unwrap(), 1);
        assert_eq!(x.act(2, &Word::identity()).unwrap(), 2);
        assert_eq!(x.act(4, &Word::identity()), Err(Error::PointOutOfRange { point: 4, size: 4 }));
        assert_eq!(x.fixed_ratio(&word("a^2", 1)), rat(0, 1));
        assert_eq!(x.fixed_ratio(&word("a^4", 1)), rat(1, 1));
        assert_eq!(x.fixed_ratio(&word("a", 1)), rat(0, 1));
    }

    #[test]
    fn invalid_permutations() {
        assert!(FiniteFSet::new(vec![vec![0, 0]], "x").is_err());
        assert!(FiniteFSet::new(vec![vec![0, 1], vec![0]], "x").is_err());
        assert!(FiniteFSet::new(vec![vec![]], "x").is_err());
    }

    #[test]
    fn regular_cyclic_defect_zero() {
        let x = FiniteFSet::cyclic(5).unwrap();
        let p = defect_profile(&x, 1, Some(&MembershipOracle::AllExponentSumsZero), DEFAULT_BALL_CAP).unwrap();
        assert_eq!(p.max_deviation(), Some(rat(0, 1)));
        let t = FiniteFSet::trivial(2);
        let p = defect_profile(&t, 2, Some(&MembershipOracle::Trivial), DEFAULT_BALL_CAP).unwrap();
        assert!(p.entries.iter().all(|e| e.ratio == rat(1, 1)));
        assert_eq!(p.max_deviation(), Some(rat(1, 1)));
    }

    #[test]
    fn product_sizes_and_ratios() {
        let x = FiniteFSet::cyclic(4).unwrap();
        let z = FiniteFSet::cyclic(3).unwrap();
        let y = product_action(&x, &z, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(y.size(), 12);
        for s in ["a", "a^2", "a^3", "a^4", "a^6", "a^12"] {
            let w = word(s, 1);
            assert_eq!(y.fixed_ratio(&w), x.fixed_ratio(&w) * z.fixed_ratio(&w));
        }
        assert!(matches!(product_action(&x, &z, 11), Err(Error::ProductTooLarge(4, 3, 11))));
    }

    #[test]
    fn matrix_group_closures() {
        let f5 = Domain::prime_field(5).unwrap();
        let two = DenseMatrix::from_rows(vec![vec![f5.from_int(2)]]).unwrap();
        assert_eq!(regular_action_of_matrices(&f5, &[two], 100).unwrap().size(), 4);
        let f3 = Domain::prime_field(3).unwrap();
        let u = DenseMatrix::from_rows(vec![vec![f3.one(), f3.one()], vec![f3.zero(), f3.one()]]).unwrap();
        assert_eq!(regular_action_of_matrices(&f3, &[u], 100).unwrap().size(), 3);
        let id = DenseMatrix::identity(&f3, 2);
        assert_eq!(regular_action_of_matrices(&f3, &[id.clone(), id], 100).unwrap().size(), 1);
        let q = Domain::rationals();
        assert!(regular_action_of_matrices(&q, &[DenseMatrix::identity(&q, 1)], 10).is_err());
    }

    #[test]
    fn closure_cap() {
        let f7 = Domain::prime_field(7).unwrap();
        let three = DenseMatrix::from_rows(vec![vec![f7.from_int(3)]]).unwrap();
        assert_eq!(regular_action_of_matrices(&f7, &[three], 5), Err(Error::ClosureTooLarge(5)));
    }

    #[test]
    fn text_format_roundtrip() {
        let x = FiniteFSet::new(vec![vec![1, 2, 0], vec![0, 2, 1]], "x").unwrap();
        let t = x.to_text();
        assert_eq!(t, "fset 3 2\n1 2 0\n0 2 1\n");
        let y = FiniteFSet::from_text(&t).unwrap();
        assert_eq!(y.to_text(), t);
        assert!(FiniteFSet::from_text("fset 3 1\n0 1\n").is_err());
    }

    #[test]
    fn orbits_partition() {
        let x = FiniteFSet::new(vec![vec![1, 0, 2, 4, 3]], "x").unwrap();
        let o = x.orbits();
        assert_eq!(o, vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
