//! Total complexes split into blocks, their faces, and cancellation of
//! acyclic pieces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{induced_map, ChainComplex, F2Matrix, HomologyBasis};

/// One summand `C^ε` of a total complex, optionally tagged by a position
/// in an auxiliary lattice (empty for a plain hypercube).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub position: Vec<i64>,
    pub vertex: Vec<u8>,
    pub offset: usize,
    pub dim: usize,
}

impl Block {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }

    pub fn weight(&self) -> usize {
        self.vertex.iter().map(|&c| c as usize).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalComplex {
    blocks: Vec<Block>,
    differential: F2Matrix,
    gradings: Vec<i64>,
}

impl TotalComplex {
    /// Blocks are `(position, vertex, rank)` laid out in order. Fails unless
    /// the differential squares to zero.
    pub fn new(blocks: Vec<(Vec<i64>, Vec<u8>, usize)>, differential: F2Matrix, gradings: Vec<i64>) -> Result<Self> {
        let mut offset = 0;
        let blocks: Vec<Block> = blocks
            .into_iter()
            .map(|(position, vertex, dim)| {
                let b = Block {
                    position,
                    vertex,
                    offset,
                    dim,
                };
                offset += dim;
                b
            })
            .collect();
        if differential.rows() != offset || differential.cols() != offset {
            return Err(Error::DimensionMismatch(format!(
                "blocks total {offset} but the differential is {}x{}",
                differential.rows(),
                differential.cols()
            )));
        }
        if gradings.len() != offset {
            return Err(Error::DimensionMismatch(format!("{} gradings for {offset} generators", gradings.len())));
        }
        if !differential.mul(&differential).is_zero() {
            return Err(Error::NotAComplex);
        }
        Ok(Self {
            blocks,
            differential,
            gradings,
        })
    }

    pub fn dim(&self) -> usize {
        self.differential.rows()
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn gradings(&self) -> &[i64] {
        &self.gradings
    }

    /// Index of the block containing basis element `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.partition_point(|b| b.offset + b.dim <= i)
    }

    pub fn find_block(&self, position: &[i64], vertex: &[u8]) -> Option<usize> {
        self.blocks.iter().position(|b| b.position == position && b.vertex == vertex)
    }

    /// `‖ε‖` for each basis element.
    pub fn weights(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.weight(), b.dim)).collect()
    }

    /// Component of the differential from block `from` to block `to`.
    pub fn block_map(&self, from: usize, to: usize) -> F2Matrix {
        let rows: Vec<usize> = self.blocks[to].range().collect();
        let cols: Vec<usize> = self.blocks[from].range().collect();
        self.differential.submatrix(&rows, &cols)
    }

    pub fn block_complex(&self, b: usize) -> ChainComplex {
        ChainComplex::new(self.block_map(b, b)).expect("diagonal blocks of a filtered complex square to zero")
    }

    pub fn homology_dim(&self) -> usize {
        self.dim() - 2 * self.differential.rank()
    }

    pub fn as_chain_complex(&self) -> ChainComplex {
        ChainComplex::new(self.differential.clone()).expect("checked at construction")
    }

    /// The complex spanned by the given blocks, rebuilt with fresh offsets.
    pub fn restrict_blocks(&self, keep: &[usize]) -> Result<TotalComplex> {
        let indices: Vec<usize> = keep.iter().flat_map(|&b| self.blocks[b].range()).collect();
        let blocks = keep
            .iter()
            .map(|&b| (self.blocks[b].position.clone(), self.blocks[b].vertex.clone(), self.blocks[b].dim))
            .collect();
        let gradings = indices.iter().map(|&i| self.gradings[i]).collect();
        TotalComplex::new(blocks, self.differential.submatrix(&indices, &indices), gradings)
    }
}

/// A face of the cube: each axis fixed to 0 or 1, or free (`*`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub pattern: Vec<Option<u8>>,
}

impl Face {
    pub fn full(n: usize) -> Self {
        Self { pattern: vec![None; n] }
    }

    pub fn vertex(v: &[u8]) -> Self {
        Self {
            pattern: v.iter().map(|&c| Some(c)).collect(),
        }
    }

    /// Parses patterns such as `"1*0"`.
    pub fn parse(s: &str) -> Result<Self> {
        let pattern = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(0)),
                '1' => Ok(Some(1)),
                '*' => Ok(None),
                _ => Err(Error::InvalidHypercube(format!("bad face pattern '{s}'"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { pattern })
    }

    pub fn contains(&self, vertex: &[u8]) -> bool {
        self.pattern.len() == vertex.len() && self.pattern.iter().zip(vertex).all(|(p, &c)| p.is_none_or(|p| p == c))
    }
}

/// Basis indices of a total complex spanning a subquotient complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub indices: Vec<usize>,
}

impl Subquotient {
    pub fn differential(&self, t: &TotalComplex) -> F2Matrix {
        t.differential.submatrix(&self.indices, &self.indices)
    }

    pub fn complex(&self, t: &TotalComplex) -> Result<ChainComplex> {
        ChainComplex::new(self.differential(t))
    }

    pub fn homology_dim(&self, t: &TotalComplex) -> Result<usize> {
        Ok(self.complex(t)?.homology_dim())
    }
}

/// Restriction of the total differential to the blocks lying on a face.
///
/// Faces are intervals of the cube order, so the restriction is a
/// subquotient complex.
pub fn face_complex(t: &TotalComplex, face: &Face) -> Result<Subquotient> {
    if let Some(b) = t.blocks.iter().find(|b| b.vertex.len() != face.pattern.len()) {
        return Err(Error::DimensionMismatch(format!(
            "face has {} axes, block vertex {:?} has {}",
            face.pattern.len(),
            b.vertex,
            b.vertex.len()
        )));
    }
    let indices = t.blocks.iter().filter(|b| face.contains(&b.vertex)).flat_map(|b| b.range()).collect();
    let sq = Subquotient { indices };
    sq.complex(t)?;
    Ok(sq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    /// The removed piece was a subcomplex; the result is the quotient.
    Sub,
    /// The removed piece was a quotient complex; the result is a subcomplex.
    Quotient,
}

#[derive(Clone, Debug)]
pub struct Cancellation {
    pub complex: TotalComplex,
    pub removed_blocks: Vec<usize>,
    pub kind: PieceKind,
    pub homology_dim: usize,
}

/// Removes the blocks joined by quasi-isomorphic edges along `axis`.
///
/// Source blocks are those with `ε_axis = 0` accepted by `select`; each
/// must have exactly one nonzero edge along `axis` to a block at the same
/// lattice position, and that edge must be a quasi-isomorphism of the block
/// complexes. The removed piece must be a subcomplex or a quotient complex
/// and acyclic, and total homology is checked to be unchanged.
pub fn cancel_acyclic_edge(
    t: &TotalComplex,
    axis: usize,
    select: impl Fn(&Block) -> bool,
) -> Result<Cancellation> {
    let mut removed = Vec::new();
    for (i, b) in t.blocks.iter().enumerate() {
        if b.vertex.get(axis) != Some(&0) || !select(b) {
            continue;
        }
        let mut up = b.vertex.clone();
        up[axis] = 1;
        let targets: Vec<usize> = (0..t.blocks.len())
            .filter(|&j| t.blocks[j].vertex == up && t.blocks[j].position == b.position && !t.block_map(i, j).is_zero())
            .collect();
        let describe = |j: Option<usize>| match j {
            Some(j) => format!(
                "edge {:?}{:?} -> {:?}{:?}",
                b.position, b.vertex, t.blocks[j].position, t.blocks[j].vertex
            ),
            None => format!("block {:?}{:?}", b.position, b.vertex),
        };
        let [j] = targets[..] else {
            return Err(Error::NotQuasiIso(format!(
                "{} has {} nonzero edges along axis {axis}",
                describe(None),
                targets.len()
            )));
        };
        let src = t.block_complex(i);
        let tgt = t.block_complex(j);
        let f = t.block_map(i, j);
        let hs = HomologyBasis::of_differential(src.differential())?;
        let ht = HomologyBasis::of_differential(tgt.differential())?;
        let fstar = induced_map(&hs, &ht, &f).map_err(|_| Error::NotQuasiIso(format!("{} is not a chain map", describe(Some(j)))))?;
        if hs.dim() != ht.dim() || fstar.rank() != hs.dim() {
            return Err(Error::NotQuasiIso(format!(
                "{} has rank {} on homology of dimensions {} and {}",
                describe(Some(j)),
                fstar.rank(),
                hs.dim(),
                ht.dim()
            )));
        }
        removed.push(i);
        removed.push(j);
    }
    removed.sort_unstable();
    removed.dedup();
    let kept: Vec<usize> = (0..t.blocks.len()).filter(|b| removed.binary_search(b).is_err()).collect();
    let rem_idx: Vec<usize> = removed.iter().flat_map(|&b| t.blocks[b].range()).collect();
    let kept_idx: Vec<usize> = kept.iter().flat_map(|&b| t.blocks[b].range()).collect();
    let into_removed = t.differential.submatrix(&rem_idx, &kept_idx);
    let out_of_removed = t.differential.submatrix(&kept_idx, &rem_idx);
    let kind = if out_of_removed.is_zero() {
        PieceKind::Sub
    } else if into_removed.is_zero() {
        PieceKind::Quotient
    } else {
        return Err(Error::InvalidHypercube(
            "selected piece is neither a subcomplex nor a quotient complex".into(),
        ));
    };
    let piece = Subquotient { indices: rem_idx };
    if piece.homology_dim(t)? != 0 {
        return Err(Error::NotQuasiIso("removed piece is not acyclic".into()));
    }
    let complex = t.restrict_blocks(&kept)?;
    let before = t.homology_dim();
    let after = complex.homology_dim();
    if before != after {
        return Err(Error::Inconsistent(format!("cancellation changed homology from {before} to {after}")));
    }
    Ok(Cancellation {
        complex,
        removed_blocks: removed,
        kind,
        homology_dim: after,
    })
}
