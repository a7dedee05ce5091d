//! Cup homology, hypercubes of chain complexes, filtered spectral sequences
//! and a model knot-surgery mapping cone, all over exact coefficients.

pub mod cli;
pub mod cupcomplex;
pub mod cupform;
pub mod error;
pub mod exterior;
pub mod hypercube;
pub mod linalg;
pub mod specseq;
pub mod surgery;

pub use error::{Error, Result};
