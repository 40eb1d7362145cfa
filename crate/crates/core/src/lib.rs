//! Decision procedures for the generic rigidity of planar bar-joint frameworks
//! that are symmetric about a mirror line.
//!
//! Frameworks are described by quotient *gain graphs*: multigraphs whose edges
//! carry a color in `{0, 1}` recording whether the edge crosses the mirror in
//! the symmetric double cover. The crate provides three independent routes to
//! a rigidity verdict and cross-checks them against each other:
//!
//! * counted sparsity of edge subsets ([`sparsity`]), decided by exhaustive
//!   enumeration so the counts themselves are the specification;
//! * direction networks over exact rationals ([`direction_network`]), where a
//!   "special pair" of assignments certifies rigidity constructively;
//! * the symmetric rigidity matrix at explicit points ([`rigidity`]), with all
//!   ranks computed by fraction-free elimination over arbitrary-precision
//!   integers.
//!
//! The `parallel` feature (on by default) runs the subset scans and the
//! multi-seed rank sampling on a rayon pool; disabling it falls back to the
//! sequential implementations with identical results.

pub mod corpus;
pub mod decomposition;
pub mod direction_network;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod rigidity;
pub mod sparsity;

pub use direction_network::{DirectionAssignment, PairClassification, SpecialPair};
pub use error::{Error, Result};
pub use graph::{Color, ColoredGraph, Edge, EdgeSubset, LiftGraph};
pub use linalg::{QMatrix, Vec2, Q, Z};
pub use rigidity::CertificationReport;
pub use sparsity::{CountReport, CountWitness, Family};
