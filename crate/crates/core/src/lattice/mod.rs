//! The rank-3 algebraic Mukai lattice `H⁰ ⊕ Z·h ⊕ H⁴` of a Picard-rank-1 K3
//! surface of genus `g`, together with the small integer-lattice machinery
//! used to compute Néron–Severi lattices of moduli spaces.

mod integer;
mod mukai;

pub use integer::{
    hermite_normal_form, integer_kernel, lattice_invariants, IntegerLattice, LatticeInvariants, Signature, MAX_RANK,
};
pub use mukai::{
    gram, line_bundle_vector, moduli_dimension, pair, perp_basis, reflect, theta_coordinates, K3Context,
    MukaiVector, MAX_GENUS,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("genus must satisfy 2 <= g <= {max}, got {0}", max = MAX_GENUS)]
    InvalidGenus(i64),
    #[error("reflection vector {0} is not spherical (needs integral s with <s,s> = -2)")]
    NonSphericalReflector(String),
    #[error("vector {0} is not primitive")]
    NonPrimitiveVector(String),
    #[error("zero vector has no orthogonal complement of rank 2")]
    ZeroVector,
    #[error("vector {0} is not integral")]
    NonIntegralVector(String),
    #[error("pairing <b{i}, b{j}> = {value} is not an integer")]
    NonIntegralPairing { i: usize, j: usize, value: String },
    #[error("vector {0} is not orthogonal to v1 = (1,0,1-g)")]
    NotInPerp(String),
    #[error("<v,v> = {0} is odd")]
    OddSquare(String),
    #[error("<v,v> = {0} is below -2")]
    SquareBelowMinusTwo(String),
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("lattice rank {0} exceeds the supported maximum of 4")]
    RankTooLarge(usize),
    #[error("cannot parse Mukai vector `{0}` (expected r,a,s)")]
    Parse(String),
}
