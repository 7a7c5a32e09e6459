//! Small dense matrices over a [`Domain`], used for representation matrices.

use std::fmt;

use super::domain::{Domain, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix{}x{}{:?}", self.rows, self.cols, self.data)
    }
}

impl DenseMatrix {
    pub fn zeros(domain: &Domain, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![domain.zero(); rows * cols] }
    }

    pub fn identity(domain: &Domain, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m.set(i, i, domain.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn parse(domain: &Domain, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|t| domain.parse(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn mul(&self, domain: &Domain, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(domain, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if domain.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if domain.is_zero(b) {
                        continue;
                    }
                    let s = domain.add(out.get(i, j), &domain.mul(a, b));
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        DenseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_identity(&self, domain: &Domain) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        domain.is_one(x)
                    } else {
                        domain.is_zero(x)
                    }
                })
            })
    }

    /// Gauss–Jordan inverse over a field.
    pub fn inverse(&self, domain: &Domain) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(domain, n);
        for c in 0..n {
            let piv = (c..n).find(|&r| !domain.is_zero(a.get(r, c))).ok_or(Error::NotInvertible)?;
            if piv != c {
                for j in 0..n {
                    a.data.swap(piv * n + j, c * n + j);
                    inv.data.swap(piv * n + j, c * n + j);
                }
            }
            let s = domain.inv(a.get(c, c))?;
            for j in 0..n {
                let x = domain.mul(a.get(c, j), &s);
                a.set(c, j, x);
                let y = domain.mul(inv.get(c, j), &s);
                inv.set(c, j, y);
            }
            for r in 0..n {
                if r == c || domain.is_zero(a.get(r, c)) {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let x = domain.sub(a.get(r, j), &domain.mul(&f, a.get(c, j)));
                    a.set(r, j, x);
                    let y = domain.sub(inv.get(r, j), &domain.mul(&f, inv.get(c, j)));
                    inv.set(r, j, y);
                }
            }
        }
        Ok(inv)
    }

    pub fn map(&self, mut f: impl FnMut(&FieldElement) -> Result<FieldElement>) -> Result<DenseMatrix> {
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }

    pub fn to_texts(&self, domain: &Domain) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| domain.format(self.get(i, j))).collect()).collect()
    }
}
