//! Hyperboxes of chain complexes over F₂.
//!
//! A hyperbox of size `d = (d₁, …, dₙ)` has a based complex `C^ε` at every
//! lattice point `ε ∈ E(d) = Π [0, d_i]` and maps
//! `D^{ε′}_ε : C^ε → C^{ε+ε′}` for `ε′ ∈ {0,1}ⁿ`, with `D⁰` the internal
//! differential. Directions `ε′` are stored as bitmasks, axis `a` at bit `a`.

mod cone;
mod json;
mod random;
mod total;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use cone::{cone_homology_dim, cone_rank, gluing_reduce, glued_ranks, MappingCone};
pub use json::{HypercubeFile, VertexEntry};
pub use random::{random_complex, random_hyperbox, random_invertible, random_matrix};
pub use total::{cancel_acyclic_edge, face_complex, Block, Cancellation, Face, Subquotient, TotalComplex};

use crate::error::{Error, Result};
use crate::linalg::{ChainComplex, F2Matrix};

/// A failed hyperbox relation at vertex `ε` in direction `ε′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: Vec<usize>,
    pub direction: Vec<u8>,
    /// Nonzero `(row, col)` entries of `Σ_γ D^{ε′−γ}_{ε+γ} D^γ_ε`.
    pub entries: Vec<(usize, usize)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: String = self.vertex.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let d: String = self.direction.iter().map(|c| c.to_string()).collect();
        write!(f, "(ε=({v}), ε′={d}): {} nonzero entries", self.entries.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperboxComplex {
    size: Vec<usize>,
    dims: Vec<usize>,
    gradings: Vec<Vec<i64>>,
    maps: BTreeMap<(usize, u32), F2Matrix>,
}

impl HyperboxComplex {
    /// All complexes and maps zero; `dim_at` gives the rank of each `C^ε`.
    pub fn new(size: Vec<usize>, dim_at: impl Fn(&[usize]) -> usize) -> Result<Self> {
        if size.len() > 31 {
            return Err(Error::InvalidHypercube(format!("{} axes exceed the supported 31", size.len())));
        }
        let mut h = Self {
            size,
            dims: Vec::new(),
            gradings: Vec::new(),
            maps: BTreeMap::new(),
        };
        let dims: Vec<usize> = h.vertices().map(|v| dim_at(&v)).collect();
        h.gradings = dims.iter().map(|&k| vec![0; k]).collect();
        h.dims = dims;
        Ok(h)
    }

    pub fn hypercube(n: usize, dim_at: impl Fn(&[usize]) -> usize) -> Result<Self> {
        Self::new(vec![1; n], dim_at)
    }

    pub fn size(&self) -> &[usize] {
        &self.size
    }

    pub fn n(&self) -> usize {
        self.size.len()
    }

    pub fn is_hypercube(&self) -> bool {
        self.size.iter().all(|&d| d == 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.size.iter().map(|d| d + 1).product()
    }

    /// Lattice points in lexicographic order, axis 0 most significant.
    pub fn vertices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex_at(i))
    }

    pub fn vertex_index(&self, v: &[usize]) -> Option<usize> {
        if v.len() != self.n() {
            return None;
        }
        let mut idx = 0;
        for (a, &c) in v.iter().enumerate() {
            if c > self.size[a] {
                return None;
            }
            idx = idx * (self.size[a] + 1) + c;
        }
        Some(idx)
    }

    pub fn vertex_at(&self, mut idx: usize) -> Vec<usize> {
        let mut v = vec![0; self.n()];
        for a in (0..self.n()).rev() {
            v[a] = idx % (self.size[a] + 1);
            idx /= self.size[a] + 1;
        }
        v
    }

    /// `ε + ε′`, or `None` if it leaves the box.
    pub fn shift(&self, v: &[usize], mask: u32) -> Option<Vec<usize>> {
        let mut w = v.to_vec();
        for (a, c) in w.iter_mut().enumerate() {
            if mask >> a & 1 == 1 {
                *c += 1;
                if *c > self.size[a] {
                    return None;
                }
            }
        }
        Some(w)
    }

    pub fn dim(&self, v: &[usize]) -> usize {
        self.vertex_index(v).map_or(0, |i| self.dims[i])
    }

    pub fn gradings(&self, v: &[usize]) -> &[i64] {
        &self.gradings[self.vertex_index(v).expect("vertex in box")]
    }

    pub fn set_gradings(&mut self, v: &[usize], g: Vec<i64>) -> Result<()> {
        let i = self.checked_index(v)?;
        if g.len() != self.dims[i] {
            return Err(Error::DimensionMismatch(format!("{} gradings for a rank-{} complex", g.len(), self.dims[i])));
        }
        self.gradings[i] = g;
        Ok(())
    }

    fn checked_index(&self, v: &[usize]) -> Result<usize> {
        self.vertex_index(v)
            .ok_or_else(|| Error::InvalidHypercube(format!("vertex {v:?} outside box of size {:?}", self.size)))
    }

    /// `D^{ε′}_ε`, if nonzero.
    pub fn map(&self, v: &[usize], mask: u32) -> Option<&F2Matrix> {
        self.vertex_index(v).and_then(|i| self.maps.get(&(i, mask)))
    }

    /// `D^{ε′}_ε` as a matrix, zero when absent.
    pub fn map_or_zero(&self, v: &[usize], mask: u32) -> F2Matrix {
        match (self.map(v, mask), self.shift(v, mask)) {
            (Some(m), _) => m.clone(),
            (None, Some(w)) => F2Matrix::zeros(self.dim(&w), self.dim(v)),
            (None, None) => F2Matrix::zeros(0, self.dim(v)),
        }
    }

    pub fn set_map(&mut self, v: &[usize], mask: u32, m: F2Matrix) -> Result<()> {
        let i = self.checked_index(v)?;
        if mask >> self.n() != 0 {
            return Err(Error::InvalidHypercube(format!("direction mask {mask:#b} has more than {} axes", self.n())));
        }
        let w = self
            .shift(v, mask)
            .ok_or_else(|| Error::InvalidHypercube(format!("direction {mask:#b} leaves the box at {v:?}")))?;
        let (rows, cols) = (self.dim(&w), self.dims[i]);
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "map at {v:?} in direction {mask:#b} must be {rows}x{cols}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.is_zero() {
            self.maps.remove(&(i, mask));
        } else {
            self.maps.insert((i, mask), m);
        }
        Ok(())
    }

    /// Adds `m` to `D^{ε′}_ε`.
    pub fn add_to_map(&mut self, v: &[usize], mask: u32, m: &F2Matrix) -> Result<()> {
        let cur = self.map_or_zero(v, mask);
        if cur.rows() != m.rows() || cur.cols() != m.cols() {
            return Err(Error::DimensionMismatch(format!("cannot add a {}x{} block at {v:?}", m.rows(), m.cols())));
        }
        self.set_map(v, mask, cur.add(m))
    }

    /// Nonzero maps as `(vertex, direction mask, matrix)`.
    pub fn maps(&self) -> impl Iterator<Item = (Vec<usize>, u32, &F2Matrix)> + '_ {
        self.maps.iter().map(|((i, m), mat)| (self.vertex_at(*i), *m, mat))
    }

    pub fn mask_bits(&self, mask: u32) -> Vec<u8> {
        (0..self.n()).map(|a| (mask >> a & 1) as u8).collect()
    }

    /// Every failed relation `Σ_{γ ≤ ε′} D^{ε′−γ}_{ε+γ} ∘ D^γ_ε = 0`.
    pub fn check_relations(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        for v in self.vertices() {
            for mask in 0..1u32 << n {
                let Some(w) = self.shift(&v, mask) else { continue };
                let mut sum = F2Matrix::zeros(self.dim(&w), self.dim(&v));
                let mut any = false;
                let mut gamma = mask;
                loop {
                    if let (Some(first), Some(mid)) = (self.map(&v, gamma), self.shift(&v, gamma)) {
                        if let Some(second) = self.map(&mid, mask & !gamma) {
                            sum.add_assign(&second.mul(first));
                            any = true;
                        }
                    }
                    if gamma == 0 {
                        break;
                    }
                    gamma = (gamma - 1) & mask;
                }
                if any && !sum.is_zero() {
                    let entries = (0..sum.rows())
                        .flat_map(|r| sum.row(r).ones().map(move |c| (r, c)).collect::<Vec<_>>())
                        .collect();
                    out.push(Violation {
                        vertex: v.clone(),
                        direction: self.mask_bits(mask),
                        entries,
                    });
                }
            }
        }
        out
    }

    pub fn ensure_relations(&self) -> Result<()> {
        let v = self.check_relations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::RelationFailure(v))
        }
    }

    /// Total complex `⊕_ε C^ε` with differential `Σ D`; hypercubes only.
    pub fn total_complex(&self) -> Result<TotalComplex> {
        if !self.is_hypercube() {
            return Err(Error::InvalidHypercube(format!(
                "total complex needs a hypercube, size is {:?}; compress first",
                self.size
            )));
        }
        self.ensure_relations()?;
        let blocks: Vec<(Vec<i64>, Vec<u8>, usize)> = self
            .vertices()
            .map(|v| (Vec::new(), v.iter().map(|&c| c as u8).collect(), self.dim(&v)))
            .collect();
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0;
        for b in &blocks {
            offsets.push(total);
            total += b.2;
        }
        let mut d = F2Matrix::zeros(total, total);
        for ((i, mask), m) in &self.maps {
            let v = self.vertex_at(*i);
            let w = self.shift(&v, *mask).expect("stored maps stay in the box");
            let j = self.vertex_index(&w).expect("in box");
            d.add_block(offsets[j], offsets[*i], m);
        }
        let gradings = self.gradings.iter().flatten().copied().collect();
        TotalComplex::new(blocks, d, gradings)
    }

    /// Exchanges two axes.
    pub fn swap_axes(&self, a: usize, b: usize) -> HyperboxComplex {
        let mut size = self.size.clone();
        size.swap(a, b);
        let swap_v = |v: &[usize]| {
            let mut w = v.to_vec();
            w.swap(a, b);
            w
        };
        let swap_m = |m: u32| {
            let (x, y) = (m >> a & 1, m >> b & 1);
            (m & !(1 << a) & !(1 << b)) | (x << b) | (y << a)
        };
        let mut out = HyperboxComplex::new(size, |w| self.dim(&swap_v(w))).expect("same axis count");
        for v in self.vertices() {
            let w = swap_v(&v);
            out.set_gradings(&w, self.gradings(&v).to_vec()).expect("same ranks");
        }
        for (v, m, mat) in self.maps() {
            out.set_map(&swap_v(&v), swap_m(m), mat.clone()).expect("same shapes");
        }
        out
    }

    /// Compression to a hypercube with the corner complexes, for `n ≤ 2`.
    ///
    /// Along an axis of length `d` the edge map is the composite of the `d`
    /// edges. For size `(d, 1)` the diagonal is
    /// `Σ_a (top edges after a) ∘ D^{11}_{(a,0)} ∘ (bottom edges before a)`.
    /// Size `(d₁, d₂)` compresses axis 0 first, then axis 1.
    pub fn compress(&self) -> Result<HyperboxComplex> {
        if self.n() > 2 {
            return Err(Error::OutOfScope(format!(
                "general compression out of scope: {} axes, at most 2 supported",
                self.n()
            )));
        }
        self.ensure_relations()?;
        let mut h = self.clone();
        for axis in 0..self.n() {
            if h.size[axis] > 1 {
                h = h.compress_axis(axis);
            }
        }
        debug_assert!(h.check_relations().is_empty());
        Ok(h)
    }

    fn compress_axis(&self, axis: usize) -> HyperboxComplex {
        let d = self.size[axis];
        let bit = 1u32 << axis;
        let mut size = self.size.clone();
        size[axis] = 1;
        let old_of = |v: &[usize]| {
            let mut w = v.to_vec();
            w[axis] *= d;
            w
        };
        let mut out = HyperboxComplex::new(size, |v| self.dim(&old_of(v))).expect("axis count unchanged");
        let at = |v: &[usize], a: usize| {
            let mut w = v.to_vec();
            w[axis] = a;
            w
        };
        // composite of axis edges from position `from` to `to` along the row of `v`
        let run = |v: &[usize], from: usize, to: usize| -> F2Matrix {
            let mut acc = F2Matrix::identity(self.dim(&at(v, from)));
            for a in from..to {
                acc = self.map_or_zero(&at(v, a), bit).mul(&acc);
            }
            acc
        };
        let new_vertices: Vec<Vec<usize>> = out.vertices().collect();
        for v in &new_vertices {
            let old = old_of(v);
            out.set_gradings(v, self.gradings(&old).to_vec()).expect("same ranks");
            for mask in 0..1u32 << self.n() {
                let Some(_) = out.shift(v, mask) else { continue };
                let m = if mask & bit == 0 {
                    self.map_or_zero(&old, mask)
                } else if mask == bit {
                    run(&old, 0, d)
                } else {
                    let other = mask & !bit;
                    let top = self.shift(&old, other).expect("other axis in range");
                    let mut sum = F2Matrix::zeros(self.dim(&at(&top, d)), self.dim(&old));
                    for a in 0..d {
                        let diag = self.map_or_zero(&at(&old, a), mask);
                        let term = run(&top, a + 1, d).mul(&diag).mul(&run(&old, 0, a));
                        sum.add_assign(&term);
                    }
                    sum
                };
                out.set_map(v, mask, m).expect("compressed shapes agree");
            }
        }
        out
    }

    /// Cone of the composite `F_{d−1} ∘ … ∘ F_0 : X_0 → X_d` for boxes of
    /// size `(d)` or `(d, 1)`, where `X_a` is the column at position `a`
    /// and `F_a = [[D^{10}, 0], [D^{11}, D^{10}]]` is the step to the next
    /// column. Its homology is the homology of the compressed cube.
    pub fn composite_cone(&self) -> Result<MappingCone> {
        if !(self.n() == 1 || (self.n() == 2 && self.size[1] == 1)) {
            return Err(Error::OutOfScope(format!("composite cone needs size (d) or (d, 1), got {:?}", self.size)));
        }
        self.ensure_relations()?;
        let d = self.size[0];
        let column = |a: usize| -> Vec<Vec<usize>> {
            if self.n() == 1 {
                vec![vec![a]]
            } else {
                vec![vec![a, 0], vec![a, 1]]
            }
        };
        let block = |a: usize, f: &dyn Fn(&[usize], &[usize]) -> F2Matrix| -> F2Matrix {
            let (src, tgt) = (column(a), column(a + 1));
            let rows: usize = tgt.iter().map(|v| self.dim(v)).sum();
            let cols: usize = src.iter().map(|v| self.dim(v)).sum();
            let mut m = F2Matrix::zeros(rows, cols);
            let mut c0 = 0;
            for s in &src {
                let mut r0 = 0;
                for t in &tgt {
                    m.add_block(r0, c0, &f(s, t));
                    r0 += self.dim(t);
                }
                c0 += self.dim(s);
            }
            m
        };
        // map from vertex `s` to vertex `t`, zero when `t` is not `s + ε′`
        let piece = |s: &[usize], t: &[usize]| -> F2Matrix {
            let mask = s.iter().zip(t).enumerate().try_fold(0u32, |m, (a, (&x, &y))| match y.checked_sub(x) {
                Some(0) => Some(m),
                Some(1) => Some(m | 1 << a),
                _ => None,
            });
            match mask {
                Some(mask) => self.map_or_zero(s, mask),
                None => F2Matrix::zeros(self.dim(t), self.dim(s)),
            }
        };
        let internal = |a: usize| -> Result<ChainComplex> {
            let vs = column(a);
            let n: usize = vs.iter().map(|v| self.dim(v)).sum();
            let mut m = F2Matrix::zeros(n, n);
            let mut c0 = 0;
            for s in &vs {
                let mut r0 = 0;
                for t in &vs {
                    m.add_block(r0, c0, &piece(s, t));
                    r0 += self.dim(t);
                }
                c0 += self.dim(s);
            }
            ChainComplex::new(m)
        };
        let mut f = F2Matrix::identity(internal(0)?.dim());
        for a in 0..d {
            f = block(a, &piece).mul(&f);
        }
        MappingCone::new(internal(0)?, internal(d)?, f)
    }
}

/// Parses an `ε` bit-string such as `"0110"`.
pub fn parse_bits(s: &str, n: usize) -> Result<Vec<usize>> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidHypercube(format!("'{s}' is not a {n}-bit string")));
    }
    Ok(s.chars().map(|c| (c == '1') as usize).collect())
}

pub fn bits_to_mask(bits: &[usize]) -> u32 {
    bits.iter().enumerate().fold(0, |m, (a, &b)| m | ((b as u32) << a))
}

pub fn format_bits(bits: &[usize]) -> String {
    bits.iter().map(|b| b.to_string()).collect()
}
