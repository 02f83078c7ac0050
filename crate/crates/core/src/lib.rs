//! Exact computations on the algebraic Mukai lattice of a Picard-rank-1 K3
//! surface of genus `g`, the movable/nef cone of `Hilb^g`, Brauer-class
//! bookkeeping for compactified relative Jacobians, and a typed rewriting
//! calculus for the autoequivalences built from P-functors.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`); nothing in this crate
//! touches floating point.
//!
//! Modules:
//! - [`lattice`]: Mukai pairing, spherical reflections, orthogonal
//!   complements, Gram matrices and their invariants.
//! - [`cones`]: chamber structure of `Mov(Hilb^g)`, the Bayer–Macrì ample
//!   family, and a bounded Pell solver.
//! - [`moduli`]: descriptors for `Hilb^n` / `Picbar^d`, Brauer exponent
//!   bounds, the certified derived-equivalence graph and the
//!   non-birationality certificate.
//! - [`autoeq`]: parser, type checker, rewrite rules, normalizer and
//!   equality prover for functor expressions.
//! - [`sweep`]: data-parallel batch evaluation (rayon, or sequential when the
//!   `parallel` feature is off).

pub mod autoeq;
pub mod cones;
pub mod lattice;
pub mod moduli;
pub mod rational;
pub mod sweep;

pub use lattice::{K3Context, MukaiVector};
