//! Dense exact matrices, fraction-free elimination and nullspaces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseVector;
use crate::scalar::Scalar;

/// A rectangular row-major matrix of [`Scalar`] entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    /// The `rows × cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Overwrites the entry at `(r, c)`.
    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    /// One row as a slice.
    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix–vector product with a dense vector.
    pub fn mul_dense(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Matrix–vector product with a sparse vector indexed by column.
    pub fn mul_sparse(&self, v: &SparseVector<usize>) -> Result<Vec<Scalar>> {
        if let Some(&max) = v.keys().next_back() {
            if max >= self.cols {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    found: max + 1,
                });
            }
        }
        Ok((0..self.rows)
            .map(|r| v.iter().map(|(&c, x)| self.get(r, c) * x).sum())
            .collect())
    }

    /// Reduced row echelon form and pivot columns.
    ///
    /// The forward pass is fraction-free (Bareiss): each update is
    /// `(p·a − f·b) / previous_pivot`, with the pivot taken as the first
    /// nonzero entry of the column. The backward pass normalizes pivots to one,
    /// which makes the result canonical.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let pivot = m.get(r, col).clone();
            for i in r + 1..m.rows {
                let f = m.get(i, col).clone();
                for j in col + 1..m.cols {
                    let x = &(&pivot * m.get(i, j)) - &(&f * m.get(r, j));
                    let x = x.checked_div(&prev).expect("Bareiss pivots are nonzero");
                    m.set(i, j, x);
                }
                m.set(i, col, Scalar::zero());
            }
            prev = pivot;
            pivots.push(col);
            r += 1;
        }
        // Backward pass: unit pivots and zeros above them.
        for (row, &col) in pivots.iter().enumerate().rev() {
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let x = m.get(row, j) * &inv;
                m.set(row, j, x);
            }
            for above in 0..row {
                let f = m.get(above, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let x = m.get(above, j) - &(&f * m.get(row, j));
                    m.set(above, j, x);
                }
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank over ℚ(√2).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the kernel: one vector per free column `f`, with
    /// coefficient one at `f` and zero at every other free column.
    pub fn nullspace(&self) -> Vec<SparseVector<usize>> {
        let (r, pivots) = self.rref();
        let rows: Vec<(usize, SparseVector<usize>)> = pivots
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let row = r
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()));
                (p, SparseVector::from_terms(row))
            })
            .collect();
        kernel_from_rref(self.cols, &rows)
    }
}

fn kernel_from_rref(cols: usize, rows: &[(usize, SparseVector<usize>)]) -> Vec<SparseVector<usize>> {
    let pivot_cols: std::collections::BTreeSet<usize> = rows.iter().map(|(p, _)| *p).collect();
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = SparseVector::basis(free);
            for (p, row) in rows {
                let x = row.coeff(&free);
                if !x.is_zero() {
                    v.add_term(*p, -x);
                }
            }
            v
        })
        .collect()
}

/// Incremental sparse row reduction over ℚ(√2).
///
/// Rows are inserted one at a time and reduced against the stored pivot rows,
/// so memory stays bounded by the number of columns regardless of how many
/// constraint rows are fed in. [`RowReducer::nullspace`] returns the same
/// canonical basis as [`ExactMatrix::nullspace`] on the stacked rows.
#[derive(Clone, Debug, Default)]
pub struct RowReducer {
    cols: usize,
    pivots: BTreeMap<usize, SparseVector<usize>>,
}

impl RowReducer {
    /// A reducer for vectors with `cols` coordinates.
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    /// Number of coordinates.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Current rank of the inserted rows.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots and keeps it if independent.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, mut row: SparseVector<usize>) -> Result<bool> {
        if let Some(&max) = row.keys().next_back() {
            if max >= self.cols {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    found: max + 1,
                });
            }
        }
        loop {
            let Some((&lead, c)) = row.iter().next() else {
                return Ok(false);
            };
            let c = c.clone();
            match self.pivots.get(&lead) {
                Some(p) => row.add_scaled(p, &-c),
                None => {
                    let unit = row.scale(&c.inv()?);
                    self.pivots.insert(lead, unit);
                    return Ok(true);
                }
            }
        }
    }

    /// Canonical kernel basis of all inserted rows.
    pub fn nullspace(&self) -> Vec<SparseVector<usize>> {
        // Back-substitute so every pivot column is zero in the other rows.
        let mut rows: Vec<(usize, SparseVector<usize>)> = self.pivots.iter().map(|(p, r)| (*p, r.clone())).collect();
        for i in (0..rows.len()).rev() {
            let (p, pr) = rows[i].clone();
            for (_, r) in rows.iter_mut().take(i) {
                let f = r.coeff(&p);
                if !f.is_zero() {
                    r.add_scaled(&pr, &-f);
                }
            }
        }
        kernel_from_rref(self.cols, &rows)
    }
}
