//! Switching classes of skew-symmetric matrices over `Z/lZ`.
//!
//! The exponent matrix `m_ij` of a skew polynomial algebra at `l`-th roots of
//! unity (`x_i x_j = zeta^{m_ij} x_j x_i`) determines its graded module
//! category up to switching and relabeling. This crate decides those
//! equivalences with witnesses, builds modular Eulerian representatives,
//! computes point simplicial complexes and counts classes exactly.

#![allow(clippy::needless_range_loop)]

pub mod algfrontend;
pub mod census;
pub mod error;
pub mod eulerian;
pub mod modlinalg;
pub mod perm;
pub mod pointcomplex;
pub mod skewmat;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use skewmat::{AltMatrix, EquivWitness, SwitchExponents, TripleTensor};
