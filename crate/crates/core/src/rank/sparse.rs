use std::collections::HashMap;
use std::fmt::Write as _;

use crate::coeff::{reduce_mod_prime, Domain, FieldElement, PrimeIdeal};
use crate::error::{Error, Result};
use crate::freealg::{GAMatrix, Word};
use crate::sofic::FiniteFSet;

/// A sparse matrix over a field, stored as row-major sorted triples with
/// unique positions and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    domain: Domain,
    entries: Vec<(usize, usize, FieldElement)>,
}

impl SparseMatrix {
    /// Builds a matrix from triples; repeated positions are summed.
    pub fn from_triples(
        domain: &Domain,
        rows: usize,
        cols: usize,
        mut triples: Vec<(usize, usize, FieldElement)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = triples.iter().find(|t| t.0 >= rows || t.1 >= cols) {
            return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        triples.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut entries: Vec<(usize, usize, FieldElement)> = Vec::with_capacity(triples.len());
        for (r, c, v) in triples {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = domain.add(&last.2, &v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !domain.is_zero(&e.2));
        Ok(SparseMatrix { rows, cols, domain: domain.clone(), entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn entries(&self) -> &[(usize, usize, FieldElement)] {
        &self.entries
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(r, c))) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => self.domain.zero(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let t = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        SparseMatrix::from_triples(&self.domain, self.cols, self.rows, t).expect("in range")
    }

    /// Conjugate transpose at the field level.
    pub fn adjoint(&self) -> SparseMatrix {
        let t = self.entries.iter().map(|(r, c, v)| (*c, *r, self.domain.conj(v))).collect();
        SparseMatrix::from_triples(&self.domain, self.cols, self.rows, t).expect("in range")
    }

    /// Moves entry `(r, c)` to `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let t = self.entries.iter().map(|(r, c, v)| (row_perm[*r], col_perm[*c], v.clone())).collect();
        SparseMatrix::from_triples(&self.domain, self.rows, self.cols, t).expect("in range")
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("product of incompatible sparse matrices".into()));
        }
        let d = &self.domain;
        let mut by_row: Vec<Vec<(usize, &FieldElement)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut t = Vec::new();
        for (r, k, a) in &self.entries {
            for (c, b) in &by_row[*k] {
                t.push((*r, *c, d.mul(a, b)));
            }
        }
        SparseMatrix::from_triples(d, self.rows, other.cols, t)
    }

    pub fn trace(&self) -> FieldElement {
        let d = &self.domain;
        self.entries.iter().filter(|e| e.0 == e.1).fold(d.zero(), |acc, e| d.add(&acc, &e.2))
    }

    /// Entrywise image in another domain.
    pub fn map(&self, target: &Domain, mut f: impl FnMut(&FieldElement) -> Result<FieldElement>) -> Result<SparseMatrix> {
        let t = self
            .entries
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, f(v)?)))
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_triples(target, self.rows, self.cols, t)
    }

    /// Reduction of a matrix over ℚ or a number field modulo a prime ideal.
    pub fn reduce_mod(&self, ideal: &PrimeIdeal) -> Result<SparseMatrix> {
        let src = self.domain.clone();
        self.map(ideal.residue_field(), |v| reduce_mod_prime(&src, v, ideal))
    }

    /// Sparse rows, each sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(u32, FieldElement)>> {
        let mut out: Vec<Vec<(u32, FieldElement)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c as u32, v.clone()));
        }
        out
    }

    /// `smat rows cols k` followed by `r c value` lines.
    pub fn dump(&self) -> String {
        let mut s = format!("smat {} {} {}\n", self.rows, self.cols, self.entries.len());
        for (r, c, v) in &self.entries {
            let _ = writeln!(s, "{r} {c} {}", self.domain.format(v));
        }
        s
    }

    pub fn parse_dump(domain: &Domain, text: &str) -> Result<SparseMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
        let bad = |m: &str| Error::ShapeMismatch(format!("sparse dump: {m}"));
        if header.len() != 4 || header[0] != "smat" {
            return Err(bad("bad header"));
        }
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad("bad number"));
        let (rows, cols, k) = (num(header[1])?, num(header[2])?, num(header[3])?);
        let mut t = Vec::with_capacity(k);
        for line in lines {
            let mut parts = line.trim().splitn(3, ' ');
            let r = num(parts.next().unwrap_or(""))?;
            let c = num(parts.next().unwrap_or(""))?;
            let v = domain.parse(parts.next().ok_or_else(|| bad("missing value"))?)?;
            t.push((r, c, v));
        }
        if t.len() != k {
            return Err(bad("entry count does not match header"));
        }
        SparseMatrix::from_triples(domain, rows, cols, t)
    }
}

/// The matrix of `ρ_X(B)`: row `i·|X| + x`, column `j·|X| + x·h` collects the
/// coefficient of `h` in `B_ij`.
pub fn assemble_operator(b: &GAMatrix, x: &FiniteFSet) -> Result<SparseMatrix> {
    if b.rank() > x.rank() {
        return Err(Error::AlphabetMismatch(b.rank(), x.rank()));
    }
    let n = x.size();
    let mut perms: HashMap<&Word, Vec<u32>> = HashMap::new();
    let mut t = Vec::new();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            for (w, a) in b.get(i, j).terms() {
                let p = perms.entry(w).or_insert_with(|| x.word_permutation(w));
                for (pt, &img) in p.iter().enumerate() {
                    t.push((i * n + pt, j * n + img as usize, a.clone()));
                }
            }
        }
    }
    SparseMatrix::from_triples(b.domain(), b.rows() * n, b.cols() * n, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_assembly() {
        let q = Domain::rationals();
        let b = GAMatrix::parse(&[vec!["1 - a"]], &q, 1).unwrap();
        let x = FiniteFSet::cyclic(3).unwrap();
        let m = assemble_operator(&b, &x).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 1 } else if c == (r + 1) % 3 { -1 } else { 0 };
                assert_eq!(m.get(r, c), q.from_int(expect));
            }
        }
        let zero = GAMatrix::parse(&[vec!["0"]], &q, 1).unwrap();
        assert_eq!(assemble_operator(&zero, &x).unwrap().nnz(), 0);
        let c = GAMatrix::parse(&[vec!["7/2"]], &q, 1).unwrap();
        let m = assemble_operator(&c, &x).unwrap();
        assert_eq!(m.nnz(), 3);
        assert!((0..3).all(|i| m.get(i, i) == q.parse("7/2").unwrap()));
    }

    #[test]
    fn dump_roundtrip() {
        let q = Domain::rationals();
        let b = GAMatrix::parse(&[vec!["1 - 1/2*a", "b"]], &q, 2).unwrap();
        let x = crate::sofic::zd_torus(2, 2, 100).unwrap();
        let m = assemble_operator(&b, &x).unwrap();
        let text = m.dump();
        assert!(text.starts_with("smat 4 8 "));
        assert_eq!(SparseMatrix::parse_dump(&q, &text).unwrap(), m);
    }
}
