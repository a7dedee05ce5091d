//! Spectral sequences of finite filtered complexes over F₂.
//!
//! With `F_p` spanned by the basis elements of filtration `≤ p`, the pages
//! are `E_r^p = Z_r^p / (Z_{r−1}^{p−1} + d Z_{r−1}^{p+r−1})` where
//! `Z_r^p = {x ∈ F_p : dx ∈ F_{p−r}}`, and `d_r : E_r^p → E_r^{p−r}` is
//! induced by `d`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cupform::ThreeForm;
use crate::error::{Error, Result};
use crate::exterior::{contraction_matrix_f2, GradedPiece};
use crate::hypercube::TotalComplex;
use crate::linalg::{BitVec, F2Matrix, QuotientSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    differential: F2Matrix,
    filtration: Vec<i64>,
    gradings: Vec<i64>,
    vertices: Option<Vec<Vec<u8>>>,
}

impl FilteredComplex {
    pub fn new(differential: F2Matrix, filtration: Vec<i64>, gradings: Vec<i64>) -> Result<Self> {
        let n = differential.rows();
        if differential.cols() != n || filtration.len() != n || gradings.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "differential {}x{}, {} filtration values, {} gradings",
                n,
                differential.cols(),
                filtration.len(),
                gradings.len()
            )));
        }
        if !differential.mul(&differential).is_zero() {
            return Err(Error::NotAComplex);
        }
        for i in 0..n {
            for j in differential.row(i).ones() {
                if filtration[i] > filtration[j] {
                    return Err(Error::Mismatch(format!(
                        "differential raises filtration from {} to {} (entry {i}, {j})",
                        filtration[j], filtration[i]
                    )));
                }
            }
        }
        Ok(Self {
            differential,
            filtration,
            gradings,
            vertices: None,
        })
    }

    /// `F(x) = ℓ − ‖ε‖` on the total complex of an `ℓ`-dimensional cube.
    pub fn from_hypercube(t: &TotalComplex) -> Result<Self> {
        let mut filtration = Vec::with_capacity(t.dim());
        let mut vertices = Vec::with_capacity(t.dim());
        for b in t.blocks() {
            let f = b.vertex.len() as i64 - b.weight() as i64;
            for _ in 0..b.dim {
                filtration.push(f);
                vertices.push(b.vertex.clone());
            }
        }
        let mut fc = Self::new(t.differential().clone(), filtration, t.gradings().to_vec())?;
        fc.vertices = Some(vertices);
        Ok(fc)
    }

    pub fn dim(&self) -> usize {
        self.filtration.len()
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn filtration(&self) -> &[i64] {
        &self.filtration
    }

    pub fn gradings(&self) -> &[i64] {
        &self.gradings
    }

    /// Cube vertex of each basis element, when built from a hypercube.
    pub fn vertices(&self) -> Option<&[Vec<u8>]> {
        self.vertices.as_deref()
    }

    /// `(min, max)` filtration, `(0, 0)` when empty.
    pub fn range(&self) -> (i64, i64) {
        let lo = self.filtration.iter().copied().min().unwrap_or(0);
        let hi = self.filtration.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    pub fn depth(&self) -> usize {
        let (lo, hi) = self.range();
        (hi - lo) as usize
    }

    pub fn homology_dim(&self) -> usize {
        self.dim() - 2 * self.differential.rank()
    }

    /// Basis of `Z_r^p` in full coordinates.
    fn cycles(&self, r: i64, p: i64) -> Vec<BitVec> {
        let cols: Vec<usize> = (0..self.dim()).filter(|&i| self.filtration[i] <= p).collect();
        let rows: Vec<usize> = (0..self.dim()).filter(|&i| self.filtration[i] > p - r).collect();
        let m = self.differential.submatrix(&rows, &cols);
        m.kernel_basis().into_iter().map(|k| k.scatter(&cols, self.dim())).collect()
    }

    fn level(&self, r: usize, p: i64) -> QuotientSpace {
        let r = r as i64;
        let z = self.cycles(r, p);
        let mut sub = self.cycles(r - 1, p - 1);
        sub.extend(self.cycles(r - 1, p + r - 1).iter().map(|x| self.differential.mul_vec(x)));
        QuotientSpace::new(self.dim(), &sub, &z)
    }
}

/// `E_r` with explicit coset representatives and the differential `d_r`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    levels: BTreeMap<i64, QuotientSpace>,
    /// `d_r` from level `p` to level `p − r`, for `p − r` within range.
    differentials: BTreeMap<i64, F2Matrix>,
}

impl Page {
    pub fn levels(&self) -> impl Iterator<Item = (i64, &QuotientSpace)> {
        self.levels.iter().map(|(p, q)| (*p, q))
    }

    pub fn dim_at(&self, p: i64) -> usize {
        self.levels.get(&p).map_or(0, |q| q.dim())
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.levels.iter().map(|(p, q)| (*p, q.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.levels.values().map(|q| q.dim()).sum()
    }

    pub fn differential(&self, p: i64) -> Option<&F2Matrix> {
        self.differentials.get(&p)
    }

    pub fn differentials(&self) -> impl Iterator<Item = (i64, &F2Matrix)> {
        self.differentials.iter().map(|(p, d)| (*p, d))
    }

    pub fn d_rank(&self) -> usize {
        self.differentials.values().map(|d| d.rank()).sum()
    }

    pub fn d_is_zero(&self) -> bool {
        self.differentials.values().all(|d| d.is_zero())
    }

    /// Coordinates in `E_r^p` of a vector of `Z_r^p`.
    pub fn coords(&self, p: i64, v: &BitVec) -> Result<BitVec> {
        self.levels.get(&p).ok_or(Error::NotInSubspace)?.coords(v)
    }
}

/// The page `E_r` for `r ≥ 1`.
pub fn page(fc: &FilteredComplex, r: usize) -> Result<Page> {
    if r == 0 {
        return Err(Error::DimensionMismatch("pages start at r = 1".into()));
    }
    let (lo, hi) = fc.range();
    let levels: BTreeMap<i64, QuotientSpace> = (lo..=hi).map(|p| (p, fc.level(r, p))).collect();
    let mut differentials = BTreeMap::new();
    for (&p, src) in &levels {
        let Some(tgt) = levels.get(&(p - r as i64)) else { continue };
        let cols = src
            .reps()
            .iter()
            .map(|x| tgt.coords(&fc.differential.mul_vec(x)))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Inconsistent(format!("d_{r} image at level {p} is not a cycle of the target level")))?;
        differentials.insert(p, F2Matrix::from_columns(tgt.dim(), &cols));
    }
    Ok(Page { r, levels, differentials })
}

/// Pages `E_1, …, E_R`.
pub fn pages(fc: &FilteredComplex, up_to: usize) -> Result<Vec<Page>> {
    (1..=up_to).map(|r| page(fc, r)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    /// `d_k = 0` for every `k ≥ r`.
    pub collapses: bool,
    /// Smallest page from which every differential vanishes.
    pub collapse_page: usize,
    /// Ranks of `d_k` for `k = 1, …, depth`.
    pub d_ranks: Vec<usize>,
    pub e_infinity: usize,
    pub total_homology: usize,
}

/// Checks `d_k = 0` for all `k ≥ r`. `E_∞` is `E_{depth+1}`; its total
/// dimension is asserted to equal the homology of the complex.
pub fn collapse_check(fc: &FilteredComplex, r: usize) -> Result<CollapseReport> {
    let depth = fc.depth();
    let all = pages(fc, depth + 1)?;
    let d_ranks: Vec<usize> = all[..depth].iter().map(|p| p.d_rank()).collect();
    let collapse_page = d_ranks.iter().rposition(|&k| k > 0).map_or(1, |k| k + 2);
    let e_infinity = all[depth].total_dim();
    let total_homology = fc.homology_dim();
    if e_infinity != total_homology {
        return Err(Error::Inconsistent(format!(
            "E_∞ has dimension {e_infinity} but the complex has homology {total_homology}"
        )));
    }
    Ok(CollapseReport {
        collapses: collapse_page <= r.max(1),
        collapse_page,
        d_ranks,
        e_infinity,
        total_homology,
    })
}

/// Comparison of `d₃` on a cup-model cube with `ι_μ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E3Identification {
    /// `E₃^p ≅ Λ^p` via the vertex generators, at every level.
    pub bijective: bool,
    /// `d₃ Φ_p = Φ_{p−3} ι_μ` at every level.
    pub matches: bool,
    pub d1_zero: bool,
    pub d2_zero: bool,
    pub d3_rank: usize,
    /// Levels `p` where `d₃` and `ι_μ` disagree.
    pub mismatched_levels: Vec<i64>,
}

/// Matches `E₃^p` with `Λ^p`: the generator at vertex `ε` corresponds to
/// `e_S` with `S = {i : ε_i = 0}`, and checks that `d₃` becomes `ι_μ`.
pub fn identify_e3_with_exterior(fc: &FilteredComplex, mu: &ThreeForm) -> Result<E3Identification> {
    let ell = mu.ell();
    let vertices = fc
        .vertices()
        .ok_or_else(|| Error::InvalidHypercube("filtered complex does not come from a hypercube".into()))?;
    if fc.dim() != 1 << ell || vertices.iter().any(|v| v.len() != ell) {
        return Err(Error::InvalidHypercube(format!(
            "not a cup-model cube: {} generators for ell = {ell}",
            fc.dim()
        )));
    }
    let mut by_mask = vec![usize::MAX; 1 << ell];
    for (i, v) in vertices.iter().enumerate() {
        let mask = v.iter().enumerate().fold(0usize, |m, (a, &c)| if c == 0 { m | 1 << a } else { m });
        if by_mask[mask] != usize::MAX {
            return Err(Error::InvalidHypercube(format!("vertex {v:?} carries more than one generator")));
        }
        by_mask[mask] = i;
    }
    let e1 = page(fc, 1)?;
    let e2 = page(fc, 2)?;
    let e3 = page(fc, 3)?;
    // Φ_p: Λ^p basis → E₃^p coordinates
    let mut phi: BTreeMap<i64, F2Matrix> = BTreeMap::new();
    let mut bijective = true;
    for p in 0..=ell {
        let piece = GradedPiece::new(ell, p);
        let target_dim = e3.dim_at(p as i64);
        let cols = piece
            .basis
            .iter()
            .map(|&s| e3.coords(p as i64, &BitVec::unit(fc.dim(), by_mask[s as usize])))
            .collect::<Result<Vec<_>>>();
        match cols {
            Ok(cols) => {
                let m = F2Matrix::from_columns(target_dim, &cols);
                if m.rows() != m.cols() || m.rank() != m.cols() {
                    bijective = false;
                }
                phi.insert(p as i64, m);
            }
            Err(_) => bijective = false,
        }
    }
    let mut mismatched = Vec::new();
    if bijective {
        for p in 3..=ell {
            let d3 = e3.differential(p as i64).expect("level p − 3 is in range");
            let lhs = d3.mul(&phi[&(p as i64)]);
            let rhs = phi[&(p as i64 - 3)].mul(&contraction_matrix_f2(mu, p));
            if lhs != rhs {
                mismatched.push(p as i64);
            }
        }
    }
    Ok(E3Identification {
        bijective,
        matches: bijective && mismatched.is_empty(),
        d1_zero: e1.d_is_zero(),
        d2_zero: e2.d_is_zero(),
        d3_rank: e3.d_rank(),
        mismatched_levels: mismatched,
    })
}
