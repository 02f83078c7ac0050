//! Wall-and-chamber structure of `Mov(Hilb^g)` in the basis `(H̃, B)`.
//!
//! A divisor class `x·H̃ − y·B` is stored as the pair `(x, y)`. The movable
//! cone is spanned by `H̃ = (1,0)` and the isotropic class `H̃ − B = (1,1)`,
//! with the flop wall at slope `(2g−2)/(2g−1)` splitting it into the nef cone
//! of `Hilb^g` and that of `Picbar^{−g}`.

mod bm;
mod chamber;
mod pell;

pub use bm::{bm_ample_class, bm_chain, bm_closed_form, bm_nef_limit, bm_samples, bm_slope, bm_threshold, BmChain};
pub use chamber::{
    bb_square, chamber_table, classify_divisor, classify_many, flop_wall, flop_wall_slope, movable_cone, ChamberEntry,
    ChamberLabel, DivisorClass,
};
pub use pell::{
    footnote_nef_boundary, pell_min_solution, pell_sweep, residue_obstruction, FootnoteBoundary, PellSolution,
    ResidueCertificate, FOOTNOTE_NOTE, FOOTNOTE_SEARCH_BOUND, PELL_MAX_BOUND, PELL_MAX_COEFF,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("the zero class does not span a ray")]
    ZeroClass,
    #[error("t² = {tsq} is not above the threshold 1/(g-1) = {threshold}")]
    BelowThreshold { tsq: String, threshold: String },
    #[error("t² = {0} must be positive")]
    NonPositiveTsq(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("X² - {d}·Y² = {n} has no positive solution{}", .certificate.as_ref().map(|c| format!(" ({})", c)).unwrap_or_else(|| " within the search bound".into()))]
    NoSolution { d: u64, n: u64, certificate: Option<String> },
    #[error("chain invariant violated: {0}")]
    ChainInvariant(&'static str),
    #[error("cannot parse divisor class `{0}` (expected x,y)")]
    Parse(String),
}
