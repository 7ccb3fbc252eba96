//! Exact analysis of hyperplane arrangements attached to graphs whose
//! vertices carry finite lists of rational weights.
//!
//! A graph `G` on vertices `v1..vn` together with a weight map `psi`
//! (each `psi(v)` a finite set of rationals) determines the arrangement
//! with hyperplanes `x_i = x_j` for every edge `v_i v_j` and `x_i = a`
//! for every `a` in `psi(v_i)`.  The crate decides supersolvability of
//! the coned arrangement two independent ways — a greedy elimination
//! order on the decorated graph, and a modular-chain search in the
//! intersection lattice — computes characteristic polynomials and
//! exponents, applies freeness filters, and scans instance families
//! for evidence about where freeness and supersolvability part ways.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod analysis;
pub mod arrangement;
pub mod generator;
pub mod lattice;
mod linalg;
pub mod polynomial;
pub mod psi_graph;
pub mod rational;

pub use analysis::{classify, scan, ClassifyReport, FreenessVerdict, ScanParams, ScanReport};
pub use arrangement::{Arrangement, Hyperplane};
pub use lattice::{IntersectionLattice, LatticeError};
pub use polynomial::IntPolynomial;
pub use psi_graph::{Chordality, EliminationCertificate, PsiGraph};
pub use rational::Rational;
