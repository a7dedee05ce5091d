//! Integer matrices: exact rank over Q and Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

use super::f2::F2Matrix;

/// Dense matrix with arbitrary-precision integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows, cols);
        for (i, r) in entries.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix literal");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Entrywise reduction mod 2.
    pub fn mod2(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j).is_odd() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Rank over Q by fraction-free sparse elimination.
    ///
    /// Runs in `i128` and restarts with big integers if an intermediate
    /// entry overflows.
    pub fn rank_q(&self) -> usize {
        let (vectors, len) = if self.rows <= self.cols {
            (self.sparse_rows(), self.cols)
        } else {
            (self.transpose().sparse_rows(), self.rows)
        };
        let small: Option<Vec<SparseRow<i128>>> = vectors
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(j, v)| i128::try_from(v).ok().map(|x| (*j, x)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        if let Some(rows) = small {
            if let Some(r) = sparse_rank(rows, len) {
                return r;
            }
        }
        sparse_rank(vectors, len).expect("big-integer elimination cannot overflow")
    }

    fn sparse_rows(&self) -> Vec<SparseRow<BigInt>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter_map(|j| {
                        let v = self.get(i, j);
                        (!v.is_zero()).then(|| (j as u32, v.clone()))
                    })
                    .collect()
            })
            .collect()
    }
}

type SparseRow<T> = Vec<(u32, T)>;

/// Rank over Q of the matrix whose rows are given sparsely as sorted
/// `(column, value)` lists of length-`len` vectors.
pub fn sparse_rank_q(rows: Vec<Vec<(u32, i64)>>, len: usize) -> usize {
    let wide: Vec<SparseRow<i128>> = rows
        .iter()
        .map(|r| r.iter().filter(|(_, v)| *v != 0).map(|(j, v)| (*j, *v as i128)).collect())
        .collect();
    if let Some(r) = sparse_rank(wide, len) {
        return r;
    }
    let big: Vec<SparseRow<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| *v != 0).map(|(j, v)| (j, BigInt::from(v))).collect())
        .collect();
    sparse_rank(big, len).expect("big-integer elimination cannot overflow")
}

trait ExactInt: Clone + Zero + One + Integer + Signed + CheckedMul + CheckedSub {}
impl<T: Clone + Zero + One + Integer + Signed + CheckedMul + CheckedSub> ExactInt for T {}

/// `a·v − b·w`, sorted-merge over sparse rows. `None` on overflow.
fn combine<T: ExactInt>(a: &T, v: &[(u32, T)], b: &T, w: &[(u32, T)]) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut k) = (0, 0);
    while i < v.len() || k < w.len() {
        let take_v = k == w.len() || (i < v.len() && v[i].0 < w[k].0);
        let take_w = i == v.len() || (k < w.len() && w[k].0 < v[i].0);
        if take_v {
            out.push((v[i].0, a.checked_mul(&v[i].1)?));
            i += 1;
        } else if take_w {
            out.push((w[k].0, T::zero().checked_sub(&b.checked_mul(&w[k].1)?)?));
            k += 1;
        } else {
            let x = a.checked_mul(&v[i].1)?.checked_sub(&b.checked_mul(&w[k].1)?)?;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            k += 1;
        }
    }
    Some(out)
}

fn make_primitive<T: ExactInt>(v: &mut SparseRow<T>) {
    let mut g = T::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
}

fn sparse_rank<T: ExactInt>(vectors: Vec<SparseRow<T>>, len: usize) -> Option<usize> {
    let cap = vectors.len().min(len);
    // basis rows sorted by leading column; no entries left of the lead
    let mut basis: Vec<SparseRow<T>> = Vec::new();
    for mut v in vectors {
        if basis.len() == cap {
            break;
        }
        let mut idx = 0;
        while idx < basis.len() && !v.is_empty() {
            let b = &basis[idx];
            let lead = b[0].0;
            if let Ok(pos) = v.binary_search_by_key(&lead, |e| e.0) {
                let (a, c) = (b[0].1.clone(), v[pos].1.clone());
                let g = a.gcd(&c);
                let (a, c) = (a.div_floor(&g), c.div_floor(&g));
                v = combine(&a, &v, &c, b)?;
                make_primitive(&mut v);
            }
            // skip basis rows whose lead is left of v's current lead
            let first = v.first().map_or(u32::MAX, |e| e.0);
            idx += 1;
            while idx < basis.len() && basis[idx][0].0 < first {
                idx += 1;
            }
        }
        if !v.is_empty() {
            let lead = v[0].0;
            let at = basis.partition_point(|r| r[0].0 < lead);
            basis.insert(at, v);
        }
    }
    Some(basis.len())
}

/// Smith normal form `left · M · right = diag(d₁, d₂, …)` with `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonnegative diagonal entries, length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Rank over Q: the number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors that are even and nonzero; each contributes a
    /// 2-torsion summand to the cokernel.
    pub fn even_factors(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero() && d.is_even()).count()
    }

    /// Diagonal matrix of the same shape as the input.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut left, t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut right, t, pj);

            let pivot = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    add_row_multiple(&mut a, i, t, &-&q);
                    add_row_multiple(&mut left, i, t, &-&q);
                }
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    add_col_multiple(&mut a, j, t, &-&q);
                    add_col_multiple(&mut right, j, t, &-&q);
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut a, t, i, &BigInt::one());
                    add_row_multiple(&mut left, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut left, t);
        }
    }
    let diagonal = (0..n).map(|i| a.get(i, i).clone()).collect();
    SmithForm {
        diagonal,
        left,
        right,
    }
}

fn swap_rows(m: &mut IntMatrix, i: usize, k: usize) {
    if i != k {
        for j in 0..m.cols {
            m.data.swap(i * m.cols + j, k * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut IntMatrix, j: usize, k: usize) {
    if j != k {
        for i in 0..m.rows {
            m.data.swap(i * m.cols + j, i * m.cols + k);
        }
    }
}

/// row_i += c · row_k
fn add_row_multiple(m: &mut IntMatrix, i: usize, k: usize, c: &BigInt) {
    for j in 0..m.cols {
        let x = m.get(k, j);
        if !x.is_zero() {
            let d = c * x;
            m.data[i * m.cols + j] += d;
        }
    }
}

/// col_j += c · col_k
fn add_col_multiple(m: &mut IntMatrix, j: usize, k: usize, c: &BigInt) {
    for i in 0..m.rows {
        let x = m.get(i, k);
        if !x.is_zero() {
            let d = c * x;
            m.data[i * m.cols + j] += d;
        }
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols {
        let x = -m.get(i, j);
        m.set(i, j, x);
    }
}
