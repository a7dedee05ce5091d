//! Bit-packed matrices over F₂.

use std::fmt;

use super::bitvec::BitVec;
use crate::error::{Error, Result};

/// A dense matrix over F₂ stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Self { rows, cols }
    }

    /// Builds a `rows × columns.len()` matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Convenience constructor from 0/1 literals, mostly for tests.
    pub fn from_dense(entries: &[&[u8]]) -> Self {
        let cols = entries.first().map_or(0, |r| r.len());
        let rows = entries
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                BitVec::from_indices(cols, r.iter().enumerate().filter(|(_, &x)| x & 1 == 1).map(|(j, _)| j))
            })
            .collect();
        Self { rows, cols }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitVec::count_ones).sum()
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows(), "dimension mismatch in mul");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        F2Matrix {
            rows,
            cols: other.cols,
        }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows(), self.cols), (other.rows(), other.cols), "dimension mismatch in add");
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &F2Matrix) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> F2Matrix {
        F2Matrix {
            rows: rows.iter().map(|&i| self.rows[i].select(cols)).collect(),
            cols: cols.len(),
        }
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`,
    /// adding (XOR) onto existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &F2Matrix) {
        for (i, r) in block.rows.iter().enumerate() {
            for j in r.ones() {
                self.flip(r0 + i, c0 + j);
            }
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &F2Matrix) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows() + other.rows(), self.cols + other.cols);
        out.add_block(0, 0, self);
        out.add_block(self.rows(), self.cols, other);
        out
    }

    /// Rank over F₂ by elimination on packed rows.
    pub fn rank(&self) -> usize {
        // Work on whichever orientation has fewer words per row.
        if self.cols > self.rows() * 2 {
            return self.transpose().rank();
        }
        let mut basis: Vec<BitVec> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for r in &self.rows {
            let mut v = r.clone();
            for (b, &p) in basis.iter().zip(&pivots) {
                if v.get(p) {
                    v.xor_assign_from(b, p >> 6);
                }
            }
            if let Some(p) = v.first_one() {
                let at = pivots.partition_point(|&q| q < p);
                pivots.insert(at, p);
                basis.insert(at, v);
            }
        }
        basis.len()
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    /// Pivots are taken as the first usable row in column order.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign_from(&pivot_row, c >> 6);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            F2Matrix {
                rows,
                cols: self.cols,
            },
            pivots,
        )
    }

    /// Basis of the null space `{v : self · v = 0}`, one vector per free column
    /// in increasing column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (i, &p) in pivots.iter().enumerate() {
                    if red.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, or `Error::Singular`.
    pub fn inverse(&self) -> Result<F2Matrix> {
        let n = self.rows();
        if n != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                n, self.cols
            )));
        }
        let mut a = self.rows.clone();
        let mut inv = F2Matrix::identity(n).rows;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i].get(c)) else {
                return Err(Error::Singular);
            };
            a.swap(c, p);
            inv.swap(c, p);
            let (pa, pi) = (a[c].clone(), inv[c].clone());
            for i in 0..n {
                if i != c && a[i].get(c) {
                    a[i].xor_assign(&pa);
                    inv[i].xor_assign(&pi);
                }
            }
        }
        Ok(F2Matrix { rows: inv, cols: n })
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", if r.get(j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_examples() {
        assert_eq!(F2Matrix::zeros(3, 3).rank(), 0);
        assert_eq!(F2Matrix::identity(4).rank(), 4);
        assert_eq!(F2Matrix::from_dense(&[&[1, 1, 0], &[0, 1, 1]]).rank(), 2);
        // rows sum to zero mod 2
        assert_eq!(F2Matrix::from_dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(F2Matrix::identity(3).kernel_basis().is_empty());
        assert_eq!(F2Matrix::zeros(2, 2).kernel_basis().len(), 2);
        let k = F2Matrix::from_dense(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![BitVec::from_indices(2, [0, 1])]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = F2Matrix::from_dense(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), F2Matrix::identity(3));
        let singular = F2Matrix::from_dense(&[&[1, 1], &[1, 1]]);
        assert!(matches!(singular.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn wide_matrix_rank_uses_transpose() {
        let mut m = F2Matrix::zeros(2, 200);
        m.set(0, 150, true);
        m.set(1, 150, true);
        m.set(1, 7, true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
    }
}
