use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::IntMatrix;

/// Row-sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    pub(crate) entries: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(r < self.rows && c < self.cols, "sparse index out of range");
        let e = self.entries[r].entry(c).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries[r].iter().map(|(&c, v)| (c, v))
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "sparse product shape mismatch");
        let mut out = SparseIntMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&k, a) in row {
                for (&j, b) in &other.entries[k] {
                    out.add_at(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}

impl From<&IntMatrix> for SparseIntMatrix {
    fn from(m: &IntMatrix) -> Self {
        let entries = (0..m.rows())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect())
            .collect();
        SparseIntMatrix { rows: m.rows(), cols: m.cols(), entries }
    }
}
