//! Representations of the free group by invertible matrices and the twist
//! `σ̃ : g ↦ σ(g)·g` on group-algebra matrices.

use std::collections::{HashMap, VecDeque};

use crate::coeff::{reduce_mod_prime, DenseMatrix, Domain, FieldElement, PrimeIdeal};
use crate::error::{Error, Result};
use crate::freealg::{GAMatrix, GroupAlgebraElement, Word};
use crate::sofic::FiniteFSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    k: usize,
    domain: Domain,
    gens: Vec<DenseMatrix>,
    invs: Vec<DenseMatrix>,
}

impl Representation {
    /// One invertible `k × k` matrix per free generator; inverses are
    /// computed exactly.
    pub fn new(domain: &Domain, gens: Vec<DenseMatrix>) -> Result<Self> {
        let k = gens.first().map(DenseMatrix::rows).ok_or_else(|| {
            Error::ShapeMismatch("representation needs at least one generator".into())
        })?;
        if k == 0 || gens.iter().any(|g| g.rows() != k || g.cols() != k) {
            return Err(Error::ShapeMismatch(format!("generator matrices must all be {k}x{k}")));
        }
        if gens.iter().flat_map(|g| g.entries()).any(|x| !domain.contains(x)) {
            return Err(Error::DomainMismatch(domain.name(), "representation entry".into()));
        }
        let invs = gens.iter().map(|g| g.inverse(domain)).collect::<Result<Vec<_>>>()?;
        Ok(Representation { k, domain: domain.clone(), gens, invs })
    }

    pub fn trivial(domain: &Domain, rank: usize, k: usize) -> Self {
        Self::new(domain, vec![DenseMatrix::identity(domain, k); rank]).expect("identity is invertible")
    }

    /// Parses one matrix of coefficient texts per generator.
    pub fn parse(domain: &Domain, gens: &[Vec<Vec<String>>]) -> Result<Self> {
        let mats = gens.iter().map(|g| DenseMatrix::parse(domain, g)).collect::<Result<Vec<_>>>()?;
        Self::new(domain, mats)
    }

    pub fn dim(&self) -> usize {
        self.k
    }
    pub fn rank(&self) -> usize {
        self.gens.len()
    }
    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn generators(&self) -> &[DenseMatrix] {
        &self.gens
    }

    pub fn letter(&self, l: i32) -> &DenseMatrix {
        let g = l.unsigned_abs() as usize - 1;
        if l > 0 {
            &self.gens[g]
        } else {
            &self.invs[g]
        }
    }

    /// `σ(w)` as the product of generator matrices along `w`.
    pub fn extend(&self, w: &Word) -> Result<DenseMatrix> {
        if w.max_generator() > self.rank() {
            return Err(Error::AlphabetMismatch(w.max_generator(), self.rank()));
        }
        let mut acc = DenseMatrix::identity(&self.domain, self.k);
        for &l in w.letters() {
            acc = acc.mul(&self.domain, self.letter(l))?;
        }
        Ok(acc)
    }

    /// Relators whose image is not the identity.
    pub fn validate(&self, relators: &[Word]) -> Result<Vec<Word>> {
        let mut bad = Vec::new();
        for r in relators {
            if !self.extend(r)?.is_identity(&self.domain) {
                bad.push(r.clone());
            }
        }
        Ok(bad)
    }

    /// Entrywise reduction into the residue field of `ideal`.
    pub fn reduce_mod(&self, ideal: &PrimeIdeal) -> Result<Representation> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.map(|x| reduce_mod_prime(&self.domain, x, ideal)))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(ideal.residue_field(), gens)
    }

    /// Whether every point stabilizer of `x` maps to the identity.
    ///
    /// Walks a spanning tree of each orbit from its smallest point, assigning
    /// `T_y = σ(t_y)` for the tree word `t_y`; the stabilizer of the root is
    /// generated by the words `t_y g t_z⁻¹` along non-tree edges, so it is
    /// enough that `T_y σ(g) = T_z` on every edge. Returns a stabilizer word
    /// with nontrivial image when there is one.
    pub fn stabilizer_witness(&self, x: &FiniteFSet) -> Result<Option<(usize, Word)>> {
        if x.rank() != self.rank() {
            return Err(Error::AlphabetMismatch(x.rank(), self.rank()));
        }
        let n = x.size();
        let mut image: Vec<Option<DenseMatrix>> = vec![None; n];
        let mut parent: Vec<(usize, i32)> = vec![(usize::MAX, 0); n];
        let tree_word = |parent: &[(usize, i32)], mut y: usize| {
            let mut letters = Vec::new();
            while parent[y].0 != usize::MAX {
                letters.push(parent[y].1 as i64);
                y = parent[y].0;
            }
            letters.reverse();
            crate::freealg::reduce_word(&letters, self.rank()).expect("letters in range")
        };
        for root in 0..n {
            if image[root].is_some() {
                continue;
            }
            image[root] = Some(DenseMatrix::identity(&self.domain, self.k));
            let mut queue = VecDeque::from([root]);
            while let Some(y) = queue.pop_front() {
                let ty = image[y].clone().expect("visited");
                for g in 1..=self.rank() as i32 {
                    for l in [g, -g] {
                        let z = x.apply_letter(y, l);
                        let tz = ty.mul(&self.domain, self.letter(l))?;
                        match &image[z] {
                            None => {
                                image[z] = Some(tz);
                                parent[z] = (y, l);
                                queue.push_back(z);
                            }
                            Some(existing) => {
                                if *existing != tz {
                                    let w = tree_word(&parent, y)
                                        .mul(&Word::generator(g as usize).pow(l.signum() as i64))
                                        .mul(&tree_word(&parent, z).inv());
                                    return Ok(Some((root, w)));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn stabilizers_act_trivially(&self, x: &FiniteFSet) -> Result<bool> {
        Ok(self.stabilizer_witness(x)?.is_none())
    }
}

/// `σ̃(A)`: block `(i, j)` of size `k × k` has `(s, t)` entry
/// `Σ_h a_h σ(h)_{st} h`; rows and columns are indexed `i·k + s`.
pub fn twist_matrix(a: &GAMatrix, sigma: &Representation) -> Result<GAMatrix> {
    if a.domain() != sigma.domain() {
        return Err(Error::DomainMismatch(a.domain().name(), sigma.domain().name()));
    }
    if a.rank() != sigma.rank() {
        return Err(Error::AlphabetMismatch(a.rank(), sigma.rank()));
    }
    let d = a.domain();
    let k = sigma.dim();
    let mut cache: HashMap<Word, DenseMatrix> = HashMap::new();
    let mut out = GAMatrix::zeros(d, a.rank(), a.rows() * k, a.cols() * k);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let mut blocks: Vec<Vec<(Word, FieldElement)>> = vec![Vec::new(); k * k];
            for (h, c) in a.get(i, j).terms() {
                if !cache.contains_key(h) {
                    cache.insert(h.clone(), sigma.extend(h)?);
                }
                let m = &cache[h];
                for s in 0..k {
                    for t in 0..k {
                        let v = m.get(s, t);
                        if !d.is_zero(v) {
                            blocks[s * k + t].push((h.clone(), d.mul(c, v)));
                        }
                    }
                }
            }
            for (idx, terms) in blocks.into_iter().enumerate() {
                let (s, t) = (idx / k, idx % k);
                out.set(i * k + s, j * k + t, GroupAlgebraElement::from_terms(d, a.rank(), terms)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sofic::{product_action, zd_torus, DEFAULT_SIZE_CAP};

    fn q() -> Domain {
        Domain::rationals()
    }

    fn m(rows: &[&[i64]]) -> DenseMatrix {
        let d = q();
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| d.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn extension_examples() {
        let s = Representation::new(&q(), vec![m(&[&[0, 1], &[-1, 0]])]).unwrap();
        assert!(s.extend(&Word::identity()).unwrap().is_identity(&q()));
        assert!(s.extend(&Word::parse("aA", 1).unwrap()).unwrap().is_identity(&q()));
        assert_eq!(s.extend(&Word::parse("aa", 1).unwrap()).unwrap(), m(&[&[-1, 0], &[0, -1]]));
        assert!(Representation::new(&q(), vec![m(&[&[1, 2], &[2, 4]])]).is_err());
    }

    #[test]
    fn relator_validation() {
        let comm = Word::parse("abAB", 2).unwrap();
        let diag = Representation::new(&q(), vec![m(&[&[2, 0], &[0, 3]]), m(&[&[5, 0], &[0, 7]])]).unwrap();
        assert!(diag.validate(&[comm.clone()]).unwrap().is_empty());
        assert!(diag.validate(&[]).unwrap().is_empty());
        let skew = Representation::new(&q(), vec![m(&[&[1, 1], &[0, 1]]), m(&[&[1, 0], &[1, 1]])]).unwrap();
        assert_eq!(skew.validate(&[comm.clone()]).unwrap(), vec![comm]);
    }

    #[test]
    fn twist_examples() {
        let d = q();
        let a = GAMatrix::parse(&[vec!["1 - a"]], &d, 1).unwrap();
        let lam = Representation::new(&d, vec![m(&[&[3]])]).unwrap();
        assert_eq!(twist_matrix(&a, &lam).unwrap(), GAMatrix::parse(&[vec!["1 - 3a"]], &d, 1).unwrap());
        let swap = Representation::new(&d, vec![m(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(
            twist_matrix(&a, &swap).unwrap(),
            GAMatrix::parse(&[vec!["1", "-a"], vec!["-a", "1"]], &d, 1).unwrap()
        );
        let triv = Representation::trivial(&d, 1, 2);
        assert_eq!(
            twist_matrix(&a, &triv).unwrap(),
            GAMatrix::parse(&[vec!["1 - a", "0"], vec!["0", "1 - a"]], &d, 1).unwrap()
        );
    }

    #[test]
    fn stabilizer_check() {
        let d = q();
        let minus = Representation::new(&d, vec![m(&[&[-1]])]).unwrap();
        // on Z/3 the stabilizer is generated by a^3, which maps to -1
        let x3 = FiniteFSet::cyclic(3).unwrap();
        let (_, w) = minus.stabilizer_witness(&x3).unwrap().unwrap();
        assert_eq!(x3.act(0, &w).unwrap(), 0);
        assert!(!minus.extend(&w).unwrap().is_identity(&d));
        assert!(minus.stabilizers_act_trivially(&FiniteFSet::cyclic(4).unwrap()).unwrap());
        // a^3 stabilizes every point of (Z/3)^2
        let x = zd_torus(2, 3, DEFAULT_SIZE_CAP).unwrap();
        let any = Representation::new(&d, vec![m(&[&[1, 1], &[0, 1]]), m(&[&[2, 0], &[0, 1]])]).unwrap();
        assert!(!any.stabilizers_act_trivially(&x).unwrap());
        let f3 = Domain::prime_field(3).unwrap();
        let one = f3.one();
        let u = DenseMatrix::from_rows(vec![vec![one.clone(), one.clone()], vec![f3.zero(), one.clone()]]).unwrap();
        let sig = Representation::new(&f3, vec![u.clone(), DenseMatrix::identity(&f3, 2)]).unwrap();
        let y = product_action(&x, &zd_torus(2, 1, DEFAULT_SIZE_CAP).unwrap(), DEFAULT_SIZE_CAP).unwrap();
        assert!(sig.stabilizers_act_trivially(&y).unwrap());
    }
}
