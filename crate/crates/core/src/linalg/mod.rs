//! Exact linear algebra over F₂, Q and Z.

mod bitvec;
mod echelon;
mod f2;
mod int;
mod modp;
mod poly;

pub use bitvec::BitVec;
pub use echelon::{induced_map, span_basis, span_dim, HomologyBasis, QuotientSpace, TaggedEchelon};
pub use f2::F2Matrix;
pub use int::{smith_normal_form, sparse_rank_q, IntMatrix, SmithForm};
pub use modp::sparse_rank_mod_p;
pub use poly::{F2Poly, LaurentMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field for rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    F2,
    Q,
}

pub fn rank_f2(m: &F2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &F2Matrix) -> Vec<BitVec> {
    m.kernel_basis()
}

/// `dim ker(boundary_out) − rank(boundary_in)` over the chosen field.
///
/// `boundary_in` maps into the middle space, `boundary_out` maps out of it.
pub fn homology_rank(boundary_in: &IntMatrix, boundary_out: &IntMatrix, ring: Ring) -> Result<usize> {
    if boundary_in.rows() != boundary_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "boundary_in has {} rows but boundary_out has {} columns",
            boundary_in.rows(),
            boundary_out.cols()
        )));
    }
    let n = boundary_out.cols();
    match ring {
        Ring::F2 => {
            let (a, b) = (boundary_in.mod2(), boundary_out.mod2());
            if !b.mul(&a).is_zero() {
                return Err(Error::NotAComplex);
            }
            Ok(n - b.rank() - a.rank())
        }
        Ring::Q => {
            if !boundary_out.mul(boundary_in).is_zero() {
                return Err(Error::NotAComplex);
            }
            Ok(n - boundary_out.rank_q() - boundary_in.rank_q())
        }
    }
}

/// A finite chain complex over F₂ given by one square differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    differential: F2Matrix,
}

impl ChainComplex {
    pub fn new(differential: F2Matrix) -> Result<Self> {
        if differential.rows() != differential.cols() {
            return Err(Error::DimensionMismatch("differential must be square".into()));
        }
        if !differential.mul(&differential).is_zero() {
            return Err(Error::NotAComplex);
        }
        Ok(Self { differential })
    }

    /// Complex with zero differential.
    pub fn trivial(dim: usize) -> Self {
        Self {
            differential: F2Matrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.differential.rows()
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn homology_dim(&self) -> usize {
        self.dim() - 2 * self.differential.rank()
    }

    pub fn homology(&self) -> HomologyBasis {
        HomologyBasis::of_differential(&self.differential).expect("differential squares to zero")
    }

    pub fn is_chain_map(&self, target: &ChainComplex, f: &F2Matrix) -> bool {
        f.rows() == target.dim()
            && f.cols() == self.dim()
            && f.mul(&self.differential) == target.differential.mul(f)
    }
}
