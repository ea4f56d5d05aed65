//! Exact sparse rational matrices and incremental row-echelon spans.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{q, Q};

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<BTreeMap<usize, Q>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.cols[i].insert(i, q(1));
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<BTreeMap<usize, Q>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.keys().all(|&r| r < rows)));
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.retain(|_, v| !v.is_zero());
                c
            })
            .collect();
        Self { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, Q> {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.cols[c].get(&r).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let e = self.cols[c].entry(r).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.cols[c].remove(&r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// `(row, col, value)` sorted by column then row.
    pub fn triplets(&self) -> Vec<(usize, usize, Q)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v.clone())))
            .collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols() != other.rows {
            return Err(Error::Grading(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let cols = other
            .cols
            .iter()
            .map(|bcol| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, bv) in bcol {
                    for (r, av) in &self.cols[*k] {
                        *acc.entry(*r).or_insert_with(Q::zero) += av * bv;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols,
        })
    }

    pub fn scaled(&self, s: &Q) -> SparseMatrix {
        if s.is_zero() {
            return Self::zero(self.rows, self.cols());
        }
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, v * s)).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn add_scaled(&self, other: &SparseMatrix, s: &Q) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols() != other.cols() {
            return Err(Error::Grading(format!(
                "shape {}x{} vs {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let mut out = self.clone();
        for (c, col) in other.cols.iter().enumerate() {
            for (r, v) in col {
                out.add_entry(*r, c, v * s);
            }
        }
        Ok(out)
    }

    pub fn plus(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(other, &q(1))
    }

    pub fn minus(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(other, &q(-1))
    }

    /// First column where the two matrices differ.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<usize> {
        (0..self.cols().max(other.cols())).find(|&c| self.cols.get(c) != other.cols.get(c))
    }

    pub fn rank(&self) -> usize {
        let mut span = Span::default();
        for col in &self.cols {
            span.insert(col.clone());
        }
        span.dim()
    }

    /// Entries flattened to a vector keyed by `col * rows + row`.
    pub fn flatten(&self) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out.insert(c * self.rows + r, v.clone());
            }
        }
        out
    }

    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let row_pos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cols = cols
            .iter()
            .map(|&c| {
                self.cols[c]
                    .iter()
                    .filter_map(|(r, v)| row_pos.get(r).map(|&i| (i, v.clone())))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols,
        }
    }
}

/// Row-echelon basis of a subspace of `Q^∞` (sparse vectors).
#[derive(Clone, Debug, Default)]
pub struct Span {
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl Span {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the span.
    pub fn reduce(&self, mut v: BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0usize;
        loop {
            let Some((&k, x)) = v.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)) else {
                return v;
            };
            let x = x.clone();
            for (i, y) in &self.pivots[&k] {
                let e = v.entry(*i).or_insert_with(Q::zero);
                *e -= &x * y;
                if e.is_zero() {
                    v.remove(i);
                }
            }
            cursor = k + 1;
        }
    }

    pub fn contains(&self, v: &BTreeMap<usize, Q>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: BTreeMap<usize, Q>) -> bool {
        let v = self.reduce(v);
        let Some((&lead, x)) = v.iter().next() else {
            return false;
        };
        let inv = x.recip();
        let v: BTreeMap<usize, Q> = v.iter().map(|(i, y)| (*i, y * &inv)).collect();
        // keep the basis fully reduced on the new pivot
        for other in self.pivots.values_mut() {
            if let Some(f) = other.get(&lead).cloned() {
                for (i, y) in &v {
                    let e = other.entry(*i).or_insert_with(Q::zero);
                    *e -= &f * y;
                    if e.is_zero() {
                        other.remove(i);
                    }
                }
            }
        }
        self.pivots.insert(lead, v);
        true
    }
}
