//! Mapping cones and the gluing reduction.

use crate::error::{Error, Result};
use crate::linalg::{induced_map, ChainComplex, F2Matrix};

/// `M(f : V → W)` with differential `[[∂_V, 0], [f, ∂_W]]` on `V ⊕ W`.
#[derive(Clone, Debug)]
pub struct MappingCone {
    source: ChainComplex,
    target: ChainComplex,
    map: F2Matrix,
}

impl MappingCone {
    pub fn new(source: ChainComplex, target: ChainComplex, map: F2Matrix) -> Result<Self> {
        if map.cols() != source.dim() || map.rows() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{} between complexes of rank {} and {}",
                map.rows(),
                map.cols(),
                source.dim(),
                target.dim()
            )));
        }
        if !source.is_chain_map(&target, &map) {
            return Err(Error::NotAChainMap);
        }
        Ok(Self { source, target, map })
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn map(&self) -> &F2Matrix {
        &self.map
    }

    pub fn differential(&self) -> F2Matrix {
        let (n, m) = (self.source.dim(), self.target.dim());
        let mut d = F2Matrix::zeros(n + m, n + m);
        d.add_block(0, 0, self.source.differential());
        d.add_block(n, 0, &self.map);
        d.add_block(n, n, self.target.differential());
        d
    }

    pub fn complex(&self) -> ChainComplex {
        ChainComplex::new(self.differential()).expect("cone of a chain map is a complex")
    }

    /// Rank of `f_*` on homology.
    pub fn induced_rank(&self) -> usize {
        let hs = self.source.homology();
        let ht = self.target.homology();
        induced_map(&hs, &ht, &self.map).expect("checked chain map").rank()
    }
}

/// Homology dimension of the cone computed directly.
pub fn cone_homology_dim(m: &MappingCone) -> usize {
    m.complex().homology_dim()
}

/// `dim H(M(f)) = 2 dim H(V) − 2 rk f_*` when `H(V) ≅ H(W)`, otherwise
/// `dim H(V) + dim H(W) − 2 rk f_*` from the long exact sequence. Checked
/// against the direct computation.
pub fn cone_rank(m: &MappingCone) -> Result<usize> {
    let hv = m.source.homology_dim();
    let hw = m.target.homology_dim();
    let rk = m.induced_rank();
    let formula = if hv == hw { 2 * hv - 2 * rk } else { hv + hw - 2 * rk };
    let direct = cone_homology_dim(m);
    if formula != direct {
        return Err(Error::Inconsistent(format!("cone formula gives {formula}, direct homology {direct}")));
    }
    Ok(formula)
}

/// `F + G J⁻¹ K` for `Θ = [[F, G], [K, J]]` with `J` invertible.
pub fn gluing_reduce(f: &F2Matrix, g: &F2Matrix, j: &F2Matrix, k: &F2Matrix) -> Result<F2Matrix> {
    let ok = g.rows() == f.rows() && k.cols() == f.cols() && j.rows() == k.rows() && j.cols() == g.cols();
    if !ok {
        return Err(Error::DimensionMismatch(format!(
            "F {}x{}, G {}x{}, J {}x{}, K {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols(),
            j.rows(),
            j.cols(),
            k.rows(),
            k.cols()
        )));
    }
    let j_inv = j.inverse()?;
    Ok(f.add(&g.mul(&j_inv).mul(k)))
}

/// Homology dimensions of `M(Θ)` and `M(F + G J⁻¹ K)` for maps between
/// complexes with zero differential.
pub fn glued_ranks(f: &F2Matrix, g: &F2Matrix, j: &F2Matrix, k: &F2Matrix) -> Result<(usize, usize)> {
    let reduced = gluing_reduce(f, g, j, k)?;
    let (a, a2) = (f.cols(), g.cols());
    let (b, c) = (f.rows(), k.rows());
    let mut theta = F2Matrix::zeros(b + c, a + a2);
    theta.add_block(0, 0, f);
    theta.add_block(0, a, g);
    theta.add_block(b, 0, k);
    theta.add_block(b, a, j);
    let full = MappingCone::new(ChainComplex::trivial(a + a2), ChainComplex::trivial(b + c), theta)?;
    let small = MappingCone::new(ChainComplex::trivial(a), ChainComplex::trivial(b), reduced)?;
    Ok((cone_homology_dim(&full), cone_homology_dim(&small)))
}
