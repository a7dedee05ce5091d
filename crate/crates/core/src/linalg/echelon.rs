//! Subspaces, quotients and induced maps on homology over F₂.
//!
//! Everything here is built on one structure: an echelon basis whose rows
//! are kept sorted by their lowest set bit, each carrying a tag vector that
//! records which quotient representatives it is congruent to.

use super::bitvec::BitVec;
use super::f2::F2Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    vec: BitVec,
    tag: BitVec,
}

/// Echelon basis with per-row tags.
#[derive(Clone, Debug)]
pub struct TaggedEchelon {
    len: usize,
    tag_len: usize,
    rows: Vec<Row>,
}

impl TaggedEchelon {
    pub fn new(len: usize, tag_len: usize) -> Self {
        Self {
            len,
            tag_len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows, returning the residual and the
    /// accumulated tag of the rows used.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_len);
        for row in &self.rows {
            if v.get(row.pivot) {
                v.xor_assign_from(&row.vec, row.pivot >> 6);
                tag.xor_assign(&row.tag);
            }
        }
        (v, tag)
    }

    /// Inserts `v` with the given tag if it is independent of the stored rows;
    /// returns the new pivot. On dependence nothing is stored.
    pub fn insert(&mut self, v: &BitVec, tag: &BitVec) -> Option<usize> {
        let (res, acc) = self.reduce(v);
        let pivot = res.first_one()?;
        let mut t = acc;
        t.xor_assign(tag);
        let at = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(
            at,
            Row {
                pivot,
                vec: res,
                tag: t,
            },
        );
        Some(pivot)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Rank of a list of vectors.
pub fn span_dim(len: usize, vectors: &[BitVec]) -> usize {
    let mut e = TaggedEchelon::new(len, 0);
    let zero = BitVec::zeros(0);
    vectors.iter().filter(|v| e.insert(v, &zero).is_some()).count()
}

/// Basis (in echelon form) of the span of `vectors`.
pub fn span_basis(len: usize, vectors: &[BitVec]) -> Vec<BitVec> {
    let mut e = TaggedEchelon::new(len, 0);
    let zero = BitVec::zeros(0);
    for v in vectors {
        e.insert(v, &zero);
    }
    e.rows.into_iter().map(|r| r.vec).collect()
}

/// The quotient `(sub + ambient) / sub` with explicit representatives.
///
/// Representatives are taken from `ambient` in the order given: a vector
/// becomes a representative exactly when it is independent of `sub` and of
/// the representatives chosen before it.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    echelon: TaggedEchelon,
    reps: Vec<BitVec>,
    sub_dim: usize,
}

impl QuotientSpace {
    pub fn new(len: usize, sub: &[BitVec], ambient: &[BitVec]) -> Self {
        let mut echelon = TaggedEchelon::new(len, ambient.len());
        let zero = BitVec::zeros(ambient.len());
        let mut sub_dim = 0;
        for s in sub {
            if echelon.insert(s, &zero).is_some() {
                sub_dim += 1;
            }
        }
        let mut reps = Vec::new();
        for a in ambient {
            let tag = BitVec::unit(ambient.len(), reps.len());
            if echelon.insert(a, &tag).is_some() {
                reps.push(a.clone());
            }
        }
        Self {
            echelon,
            reps,
            sub_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn sub_dim(&self) -> usize {
        self.sub_dim
    }

    pub fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis.
    /// Fails if `v` is not in `sub + ambient`.
    pub fn coords(&self, v: &BitVec) -> Result<BitVec> {
        let (res, tag) = self.echelon.reduce(v);
        if !res.is_zero() {
            return Err(Error::NotInSubspace);
        }
        Ok(tag.select(&(0..self.reps.len()).collect::<Vec<_>>()))
    }

    /// True when `v` lies in `sub`.
    pub fn is_trivial_class(&self, v: &BitVec) -> bool {
        matches!(self.coords(v), Ok(c) if c.is_zero())
    }
}

/// Homology `ker(d_out) / im(d_in)` of a space with explicit representatives.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    quotient: QuotientSpace,
    len: usize,
}

impl HomologyBasis {
    /// `d_in` maps into the space, `d_out` maps out of it. Fails when
    /// `d_out ∘ d_in ≠ 0`.
    pub fn new(d_in: &F2Matrix, d_out: &F2Matrix) -> Result<Self> {
        let len = d_out.cols();
        if d_in.rows() != len {
            return Err(Error::DimensionMismatch(format!(
                "incoming map has {} rows, outgoing map has {} columns",
                d_in.rows(),
                len
            )));
        }
        if !d_out.mul(d_in).is_zero() {
            return Err(Error::NotAComplex);
        }
        let boundaries = d_in.columns();
        let cycles = d_out.kernel_basis();
        Ok(Self {
            quotient: QuotientSpace::new(len, &boundaries, &cycles),
            len,
        })
    }

    /// Homology of a single square differential with `d ∘ d = 0`.
    pub fn of_differential(d: &F2Matrix) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn reps(&self) -> &[BitVec] {
        self.quotient.reps()
    }

    /// Coordinates of the homology class of a cycle.
    pub fn coords(&self, cycle: &BitVec) -> Result<BitVec> {
        self.quotient.coords(cycle)
    }

    /// Chain-level vector representing the class with the given coordinates.
    pub fn lift(&self, coords: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.len);
        for k in coords.ones() {
            v.xor_assign(&self.quotient.reps()[k]);
        }
        v
    }
}

/// Matrix of the map induced on homology by a chain map `f`.
/// Fails if `f` does not send cycles to cycles.
pub fn induced_map(source: &HomologyBasis, target: &HomologyBasis, f: &F2Matrix) -> Result<F2Matrix> {
    if f.cols() != source.ambient_dim() || f.rows() != target.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, homology ambients are {} -> {}",
            f.rows(),
            f.cols(),
            source.ambient_dim(),
            target.ambient_dim()
        )));
    }
    let cols = source
        .reps()
        .iter()
        .map(|z| target.coords(&f.mul_vec(z)).map_err(|_| Error::NotAChainMap))
        .collect::<Result<Vec<_>>>()?;
    Ok(F2Matrix::from_columns(target.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_coordinates() {
        // ambient F₂³ modulo span{(1,1,0)}
        let sub = [BitVec::from_indices(3, [0, 1])];
        let amb: Vec<_> = (0..3).map(|i| BitVec::unit(3, i)).collect();
        let q = QuotientSpace::new(3, &sub, &amb);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.reps()[0], BitVec::unit(3, 0));
        assert_eq!(q.reps()[1], BitVec::unit(3, 2));
        // e1 ≡ e0
        assert_eq!(q.coords(&BitVec::unit(3, 1)).unwrap(), BitVec::from_indices(2, [0]));
        assert!(q.is_trivial_class(&BitVec::from_indices(3, [0, 1])));
    }

    #[test]
    fn homology_of_small_complex() {
        // d: e0 -> e1, e2 free
        let mut d = F2Matrix::zeros(3, 3);
        d.set(1, 0, true);
        let h = HomologyBasis::of_differential(&d).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.reps()[0], BitVec::unit(3, 2));
    }

    #[test]
    fn not_a_complex_rejected() {
        let d = F2Matrix::from_dense(&[&[0, 1], &[1, 0]]);
        assert!(matches!(HomologyBasis::of_differential(&d), Err(Error::NotAComplex)));
    }

    #[test]
    fn induced_identity_is_identity() {
        let d = F2Matrix::zeros(3, 3);
        let h = HomologyBasis::of_differential(&d).unwrap();
        let m = induced_map(&h, &h, &F2Matrix::identity(3)).unwrap();
        assert_eq!(m, F2Matrix::identity(3));
    }
}
