//! JSON form of a hypercube of chain complexes.
//!
//! ```json
//! {"dim": 2,
//!  "vertices": {
//!    "00": {"size": 1, "gradings": [0], "maps": {"10": [[0, 0]]}},
//!    ...}}
//! ```
//!
//! Vertex keys are `ε` bit-strings, map keys are `ε′` bit-strings (`"00…0"`
//! is the internal differential), and each entry `[row, col]` is a 1 in the
//! matrix from `C^ε` to `C^{ε+ε′}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{bits_to_mask, format_bits, parse_bits, HyperboxComplex};
use crate::error::{Error, Result};
use crate::linalg::F2Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypercubeFile {
    pub dim: usize,
    pub vertices: BTreeMap<String, VertexEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub size: usize,
    pub gradings: Vec<i64>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<[usize; 2]>>,
}

impl HypercubeFile {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Builds the hypercube. Every vertex must be listed exactly once and
    /// every entry must be in range and unique. Relations are not checked.
    pub fn to_hypercube(&self) -> Result<HyperboxComplex> {
        let n = self.dim;
        if n > 20 {
            return Err(Error::InvalidHypercube(format!("dim {n} is too large")));
        }
        let mut sizes = BTreeMap::new();
        for (key, entry) in &self.vertices {
            let v = parse_bits(key, n)?;
            if entry.gradings.len() != entry.size {
                return Err(Error::InvalidHypercube(format!(
                    "vertex {key}: {} gradings for size {}",
                    entry.gradings.len(),
                    entry.size
                )));
            }
            sizes.insert(v, entry.size);
        }
        if sizes.len() != 1 << n {
            return Err(Error::InvalidHypercube(format!("expected {} vertices, found {}", 1 << n, sizes.len())));
        }
        let mut h = HyperboxComplex::hypercube(n, |v| sizes[v])?;
        for (key, entry) in &self.vertices {
            let v = parse_bits(key, n)?;
            h.set_gradings(&v, entry.gradings.clone())?;
            for (dkey, entries) in &entry.maps {
                let mask = bits_to_mask(&parse_bits(dkey, n)?);
                let w = h
                    .shift(&v, mask)
                    .ok_or_else(|| Error::InvalidHypercube(format!("map {dkey} leaves the cube at vertex {key}")))?;
                let (rows, cols) = (h.dim(&w), entry.size);
                let mut m = F2Matrix::zeros(rows, cols);
                let mut seen = BTreeSet::new();
                for &[r, c] in entries {
                    if r >= rows || c >= cols {
                        return Err(Error::InvalidHypercube(format!(
                            "entry [{r}, {c}] of map {dkey} at {key} outside {rows}x{cols}"
                        )));
                    }
                    if !seen.insert((r, c)) {
                        return Err(Error::InvalidHypercube(format!("duplicate entry [{r}, {c}] in map {dkey} at {key}")));
                    }
                    m.set(r, c, true);
                }
                h.set_map(&v, mask, m)?;
            }
        }
        Ok(h)
    }

    pub fn from_hypercube(h: &HyperboxComplex) -> Result<Self> {
        if !h.is_hypercube() {
            return Err(Error::InvalidHypercube(format!("size {:?} is not a hypercube", h.size())));
        }
        let mut vertices = BTreeMap::new();
        for v in h.vertices() {
            vertices.insert(
                format_bits(&v),
                VertexEntry {
                    size: h.dim(&v),
                    gradings: h.gradings(&v).to_vec(),
                    maps: BTreeMap::new(),
                },
            );
        }
        for (v, mask, m) in h.maps() {
            let key = format_bits(&h.mask_bits(mask).iter().map(|&b| b as usize).collect::<Vec<_>>());
            let entries = (0..m.rows()).flat_map(|r| m.row(r).ones().map(move |c| [r, c]).collect::<Vec<_>>()).collect();
            vertices.get_mut(&format_bits(&v)).expect("listed").maps.insert(key, entries);
        }
        Ok(Self { dim: h.n(), vertices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EDGE: &str = r#"{"dim":1,"vertices":{"0":{"size":1,"gradings":[0],"maps":{"1":[[0,0]]}},"1":{"size":1,"gradings":[0]}}}"#;

    #[test]
    fn roundtrip() {
        let f = HypercubeFile::from_json(EDGE).unwrap();
        let h = f.to_hypercube().unwrap();
        assert_eq!(h.total_complex().unwrap().homology_dim(), 0);
        assert_eq!(HypercubeFile::from_hypercube(&h).unwrap().to_hypercube().unwrap(), h);
    }

    #[test]
    fn strict_parsing() {
        assert!(HypercubeFile::from_json(&EDGE.replace("\"dim\":1", "\"dim\":1,\"extra\":0")).is_err());
        let missing = r#"{"dim":1,"vertices":{"0":{"size":1,"gradings":[0]}}}"#;
        assert!(HypercubeFile::from_json(missing).unwrap().to_hypercube().is_err());
        let out_of_range = EDGE.replace("[[0,0]]", "[[1,0]]");
        assert!(HypercubeFile::from_json(&out_of_range).unwrap().to_hypercube().is_err());
        let dup = EDGE.replace("[[0,0]]", "[[0,0],[0,0]]");
        assert!(HypercubeFile::from_json(&dup).unwrap().to_hypercube().is_err());
        let bad_grading = EDGE.replace("\"gradings\":[0],\"maps\"", "\"gradings\":[],\"maps\"");
        assert!(HypercubeFile::from_json(&bad_grading).unwrap().to_hypercube().is_err());
    }
}
