//! Polynomials over F₂ and matrices over the Laurent ring F₂[U, U⁻¹].
//!
//! Ranks are taken over the fraction field F₂(U), which computes the
//! dimension over Laurent series F₂((U)) for finitely generated complexes.

use std::collections::{BTreeMap, BTreeSet};

use super::f2::F2Matrix;

/// Polynomial over F₂; bit `k` of the packed words is the coefficient of `U^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl F2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Self { words }
    }

    fn trim(mut self) -> Self {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn add(&self, other: &F2Poly) -> F2Poly {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0))
            .collect();
        F2Poly { words }.trim()
    }

    fn shifted(&self, k: usize) -> F2Poly {
        if self.is_zero() {
            return F2Poly::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        F2Poly { words }.trim()
    }

    pub fn mul(&self, other: &F2Poly) -> F2Poly {
        let mut acc = F2Poly::zero();
        let Some(d) = other.degree() else {
            return acc;
        };
        for k in 0..=d {
            if other.coeff(k) {
                acc = acc.add(&self.shifted(k));
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &F2Poly) -> (F2Poly, F2Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = F2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let k = rd - dd;
            quot = quot.add(&F2Poly::monomial(k));
            rem = rem.add(&divisor.shifted(k));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &F2Poly) -> F2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

/// Sparse matrix over F₂[U, U⁻¹]; each entry is a set of exponents whose
/// monomials are summed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    terms: BTreeMap<(usize, usize), BTreeSet<i64>>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `U^exponent` to entry `(i, j)` (mod 2).
    pub fn add_monomial(&mut self, i: usize, j: usize, exponent: i64) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of range");
        let set = self.terms.entry((i, j)).or_default();
        if !set.remove(&exponent) {
            set.insert(exponent);
        }
        if set.is_empty() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Vec<i64> {
        self.terms.get(&(i, j)).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Specialization at `U = 1`.
    pub fn at_one(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rows, self.cols);
        for (&(i, j), e) in &self.terms {
            if e.len() % 2 == 1 {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut by_row: BTreeMap<usize, Vec<(usize, &BTreeSet<i64>)>> = BTreeMap::new();
        for (&(k, j), e) in &other.terms {
            by_row.entry(k).or_default().push((j, e));
        }
        let mut out = LaurentMatrix::zeros(self.rows, other.cols);
        for (&(i, k), ea) in &self.terms {
            if let Some(list) = by_row.get(&k) {
                for &(j, eb) in list {
                    for a in ea {
                        for b in eb {
                            out.add_monomial(i, j, a + b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Rank over F₂(U).
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<(usize, F2Poly)>> = vec![Vec::new(); self.rows];
        let mut min_exp = vec![i64::MAX; self.rows];
        for (&(i, _), e) in &self.terms {
            min_exp[i] = min_exp[i].min(*e.first().expect("nonempty term"));
        }
        for (&(i, j), e) in &self.terms {
            let mut p = F2Poly::zero();
            for &x in e {
                p = p.add(&F2Poly::monomial((x - min_exp[i]) as usize));
            }
            if !p.is_zero() {
                rows[i].push((j, p));
            }
        }
        poly_rank(rows)
    }
}

fn combine(a: &F2Poly, v: &[(usize, F2Poly)], b: &F2Poly, w: &[(usize, F2Poly)]) -> Vec<(usize, F2Poly)> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut k) = (0, 0);
    while i < v.len() || k < w.len() {
        if k == w.len() || (i < v.len() && v[i].0 < w[k].0) {
            out.push((v[i].0, a.mul(&v[i].1)));
            i += 1;
        } else if i == v.len() || w[k].0 < v[i].0 {
            out.push((w[k].0, b.mul(&w[k].1)));
            k += 1;
        } else {
            let x = a.mul(&v[i].1).add(&b.mul(&w[k].1));
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

fn make_primitive(v: &mut [(usize, F2Poly)]) {
    let mut g = F2Poly::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for (_, x) in v.iter_mut() {
            *x = x.div_rem(&g).0;
        }
    }
}

/// Fraction-free elimination over F₂[U]; rows must be sorted by column.
fn poly_rank(rows: Vec<Vec<(usize, F2Poly)>>) -> usize {
    let mut basis: Vec<Vec<(usize, F2Poly)>> = Vec::new();
    for mut v in rows {
        v.sort_by_key(|e| e.0);
        for b in &basis {
            if v.is_empty() {
                break;
            }
            let lead = b[0].0;
            if let Ok(pos) = v.binary_search_by_key(&lead, |e| e.0) {
                let g = b[0].1.gcd(&v[pos].1);
                let a = b[0].1.div_rem(&g).0;
                let c = v[pos].1.div_rem(&g).0;
                v = combine(&a, &v, &c, b);
                make_primitive(&mut v);
            }
        }
        if !v.is_empty() {
            let lead = v[0].0;
            let at = basis.partition_point(|r| r[0].0 < lead);
            basis.insert(at, v);
        }
    }
    basis.len()
}
