use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Domain, FieldElement};
use crate::error::{Error, Result};

use super::word::Word;

/// A finitely supported element `Σ a_h h` of `D[F_r]`. Zero coefficients are
/// never stored; iteration follows shortlex word order.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    rank: usize,
    domain: Domain,
    terms: BTreeMap<Word, FieldElement>,
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupAlgebraElement({} over {}[F{}])", self, self.domain, self.rank)
    }
}

impl GroupAlgebraElement {
    pub fn zero(domain: &Domain, rank: usize) -> Self {
        GroupAlgebraElement { rank, domain: domain.clone(), terms: BTreeMap::new() }
    }

    pub fn one(domain: &Domain, rank: usize) -> Self {
        Self::monomial(domain, rank, Word::identity(), domain.one())
    }

    pub fn constant(domain: &Domain, rank: usize, c: FieldElement) -> Self {
        Self::monomial(domain, rank, Word::identity(), c)
    }

    pub fn monomial(domain: &Domain, rank: usize, w: Word, c: FieldElement) -> Self {
        let mut x = Self::zero(domain, rank);
        x.add_term(w, c);
        x
    }

    pub fn from_terms(
        domain: &Domain,
        rank: usize,
        terms: impl IntoIterator<Item = (Word, FieldElement)>,
    ) -> Result<Self> {
        let mut x = Self::zero(domain, rank);
        for (w, c) in terms {
            if w.max_generator() > rank {
                return Err(Error::AlphabetMismatch(w.max_generator(), rank));
            }
            if !domain.contains(&c) {
                return Err(Error::DomainMismatch(domain.name(), format!("{c:?}")));
            }
            x.add_term(w, c);
        }
        Ok(x)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElement)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> FieldElement {
        self.terms.get(w).cloned().unwrap_or_else(|| self.domain.zero())
    }

    /// Coefficient of the identity element; on the free group this is the
    /// canonical trace.
    pub fn identity_coefficient(&self) -> FieldElement {
        self.coefficient(&Word::identity())
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: FieldElement) {
        if self.domain.is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.domain.add(o.get(), &c);
                if self.domain.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.name(), other.domain.name()));
        }
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GroupAlgebraElement {
            rank: self.rank,
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), self.domain.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(&self.domain, self.rank);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), self.domain.mul(c, a));
        }
        out
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.domain, self.rank);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.mul(v), self.domain.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `Σ a_h h ↦ Σ conj(a_h) h⁻¹`.
    pub fn star(&self) -> Self {
        GroupAlgebraElement {
            rank: self.rank,
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.inv(), self.domain.conj(c))).collect(),
        }
    }

    /// Applies a coefficient map into another domain, dropping terms that vanish.
    pub fn map_coefficients(
        &self,
        target: &Domain,
        mut f: impl FnMut(&FieldElement) -> Result<FieldElement>,
    ) -> Result<Self> {
        let mut out = Self::zero(target, self.rank);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn parse(text: &str, domain: &Domain, rank: usize) -> Result<Self> {
        super::text::parse_element(text, domain, rank)
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (neg, body) = super::text::coefficient_text(&self.domain, c);
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (body.as_str(), w.is_identity()) {
                ("1", true) => f.write_str("1")?,
                ("1", false) => write!(f, "{w}")?,
                (b, true) => f.write_str(b)?,
                (b, false) => write!(f, "{b}*{w}")?,
            }
        }
        Ok(())
    }
}

/// A dense `n × m` matrix over `D[F_r]`.
#[derive(Clone, PartialEq, Eq)]
pub struct GAMatrix {
    rows: usize,
    cols: usize,
    rank: usize,
    domain: Domain,
    entries: Vec<GroupAlgebraElement>,
}

impl fmt::Debug for GAMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GAMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl GAMatrix {
    pub fn zeros(domain: &Domain, rank: usize, rows: usize, cols: usize) -> Self {
        GAMatrix {
            rows,
            cols,
            rank,
            domain: domain.clone(),
            entries: vec![GroupAlgebraElement::zero(domain, rank); rows * cols],
        }
    }

    pub fn identity(domain: &Domain, rank: usize, n: usize) -> Self {
        let mut m = Self::zeros(domain, rank, n, n);
        for i in 0..n {
            m.set(i, i, GroupAlgebraElement::one(domain, rank));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GroupAlgebraElement>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map(Vec::len).unwrap_or(0);
        if n == 0 || m == 0 {
            return Err(Error::ShapeMismatch("matrix needs at least one row and column".into()));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let first = rows[0][0].clone();
        let entries: Vec<GroupAlgebraElement> = rows.into_iter().flatten().collect();
        for e in &entries {
            first.check_compatible(e)?;
        }
        Ok(GAMatrix { rows: n, cols: m, rank: first.rank, domain: first.domain.clone(), entries })
    }

    pub fn single(x: GroupAlgebraElement) -> Self {
        GAMatrix { rows: 1, cols: 1, rank: x.rank, domain: x.domain.clone(), entries: vec![x] }
    }

    /// Parses a grid of element texts.
    pub fn parse(rows: &[Vec<&str>], domain: &Domain, rank: usize) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|t| GroupAlgebraElement::parse(t, domain, rank)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupAlgebraElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GroupAlgebraElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[GroupAlgebraElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupAlgebraElement::is_zero)
    }

    pub fn max_word_len(&self) -> usize {
        self.entries.iter().map(GroupAlgebraElement::max_word_len).max().unwrap_or(0)
    }

    pub fn total_terms(&self) -> usize {
        self.entries.iter().map(GroupAlgebraElement::support_len).sum()
    }

    pub fn mul(&self, other: &GAMatrix) -> Result<GAMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.name(), other.domain.name()));
        }
        let mut out = GAMatrix::zeros(&self.domain, self.rank, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupAlgebraElement::zero(&self.domain, self.rank);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GAMatrix) -> Result<GAMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("addition of different shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(GAMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &FieldElement) -> GAMatrix {
        GAMatrix { entries: self.entries.iter().map(|x| x.scale(c)).collect(), ..self.clone() }
    }

    /// Conjugate transpose: `(B*)_{ji} = (B_{ij})*`.
    pub fn star(&self) -> GAMatrix {
        let mut out = GAMatrix::zeros(&self.domain, self.rank, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).star());
            }
        }
        out
    }

    pub fn map_coefficients(
        &self,
        target: &Domain,
        mut f: impl FnMut(&FieldElement) -> Result<FieldElement>,
    ) -> Result<GAMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.map_coefficients(target, &mut f))
            .collect::<Result<Vec<_>>>()?;
        Ok(GAMatrix { rows: self.rows, cols: self.cols, rank: self.rank, domain: target.clone(), entries })
    }

    /// Row texts in canonical form.
    pub fn to_texts(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Domain {
        Domain::rationals()
    }

    fn el(s: &str) -> GroupAlgebraElement {
        GroupAlgebraElement::parse(s, &q(), 2).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(el("1 - a").mul(&el("1 + a")).unwrap(), el("1 - a^2"));
        let x = el("3/2*aB - b");
        assert_eq!(x.mul(&el("1")).unwrap(), x);
        assert_eq!(el("a + b").mul(&el("A")).unwrap(), el("1 + bA"));
    }

    #[test]
    fn star_and_trace_examples() {
        assert_eq!(el("1 - a").star(), el("1 - A"));
        assert_eq!(el("2a + 3B").star(), el("2A + 3b"));
        assert_eq!(el("1 - a").identity_coefficient(), q().from_int(1));
        assert_eq!(el("a + A").identity_coefficient(), q().zero());
        let t = el("1 - a").mul(&el("1 - A")).unwrap();
        assert_eq!(t, el("2 - a - A"));
        assert_eq!(t.identity_coefficient(), q().from_int(2));
    }

    #[test]
    fn domain_mismatch() {
        let f5 = Domain::prime_field(5).unwrap();
        let x = GroupAlgebraElement::one(&f5, 2);
        assert!(matches!(el("a").mul(&x), Err(Error::DomainMismatch(..))));
    }

    #[test]
    fn matrix_product_and_star() {
        let a = GAMatrix::parse(&[vec!["a", "1"], vec!["0", "b"]], &q(), 2).unwrap();
        let s = a.star();
        assert_eq!(s.get(1, 0), &el("1"));
        assert_eq!(s.get(0, 0), &el("A"));
        let p = a.mul(&s).unwrap();
        assert_eq!(p.get(0, 0), &el("2"));
        assert_eq!(p.get(0, 1), &el("B"));
    }

    fn arb_element() -> impl Strategy<Value = GroupAlgebraElement> {
        let term = (
            prop::collection::vec(prop_oneof![-2i64..=-1, 1i64..=2], 0..4),
            -4i64..=4,
        );
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            let d = q();
            GroupAlgebraElement::from_terms(
                &d,
                2,
                ts.into_iter().map(|(w, c)| (super::super::reduce_word(&w, 2).unwrap(), d.from_int(c))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(x in arb_element(), y in arb_element(), z in arb_element()) {
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().star(), y.star().mul(&x.star()).unwrap());
            prop_assert_eq!(x.star().star(), x.clone());
        }

        #[test]
        fn trace_of_x_xstar_is_sum_of_squares(x in arb_element()) {
            let t = x.mul(&x.star()).unwrap().identity_coefficient();
            let d = q();
            let mut sum = d.zero();
            for (_, c) in x.terms() {
                sum = d.add(&sum, &d.mul(c, c));
            }
            prop_assert_eq!(t, sum);
        }

        #[test]
        fn text_roundtrip(x in arb_element()) {
            prop_assert_eq!(GroupAlgebraElement::parse(&x.to_string(), &q(), 2).unwrap(), x);
        }
    }
}
