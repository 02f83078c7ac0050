use std::fmt;

use num::BigRational;
use serde::Serialize;

use super::{flop_wall, ConeError, DivisorClass};
use crate::lattice::K3Context;
use crate::sweep;

pub const PELL_MAX_COEFF: u64 = 1_000_000_000_000;
pub const PELL_MAX_BOUND: u64 = 1_000_000_000;
pub const FOOTNOTE_SEARCH_BOUND: u64 = 100_000;

const CERTIFICATE_MODULI: [u64; 4] = [3, 4, 5, 8];

/// Proof that `x² − d·y² ≡ N (mod m)` has no solution at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueCertificate {
    pub modulus: u64,
    pub statement: String,
}

impl fmt::Display for ResidueCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.statement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    pub d: u64,
    pub n: u64,
    pub exists: bool,
    pub x1: Option<u64>,
    pub y1: Option<u64>,
    pub certificate: Option<ResidueCertificate>,
    pub search_bound: u64,
}

/// First modulus in `3, 4, 5, 8` with no residue solution of `x² − d·y² ≡ N`.
pub fn residue_obstruction(d: u64, n: u64) -> Option<ResidueCertificate> {
    CERTIFICATE_MODULI.iter().find_map(|&m| {
        let (dm, nm) = (d % m, n % m);
        let solvable = (0..m).any(|x| (0..m).any(|y| (x * x + m * m - dm * y * y % m) % m == nm));
        (!solvable).then(|| {
            let statement = if dm == 0 {
                format!("x² ≡ {nm} (mod {m}) impossible")
            } else if dm == 1 {
                format!("x² − y² ≡ {nm} (mod {m}) impossible")
            } else {
                format!("x² − {dm}·y² ≡ {nm} (mod {m}) impossible")
            };
            ResidueCertificate { modulus: m, statement }
        })
    })
}

/// Minimal positive solution of `x² − d·y² = N` (smallest `y`), by exhaustive
/// search over `1 ≤ y ≤ search_bound`.
pub fn pell_min_solution(d: u64, n: u64, search_bound: u64) -> Result<PellSolution, ConeError> {
    if d == 0 || n == 0 || search_bound == 0 {
        return Err(ConeError::InvalidParameters("d, N and search_bound must be at least 1".into()));
    }
    if d > PELL_MAX_COEFF || n > PELL_MAX_COEFF {
        return Err(ConeError::InvalidParameters(format!("d and N must not exceed {PELL_MAX_COEFF}")));
    }
    if search_bound > PELL_MAX_BOUND {
        return Err(ConeError::InvalidParameters(format!("search_bound must not exceed {PELL_MAX_BOUND}")));
    }
    let mut out = PellSolution { d, n, exists: false, x1: None, y1: None, certificate: None, search_bound };
    if let Some(cert) = residue_obstruction(d, n) {
        out.certificate = Some(cert);
        return Ok(out);
    }
    for y in 1..=search_bound {
        let t = n as u128 + d as u128 * (y as u128) * (y as u128);
        let x = t.isqrt();
        if x * x == t {
            out.exists = true;
            out.x1 = Some(x as u64);
            out.y1 = Some(y);
            break;
        }
    }
    Ok(out)
}

/// Solves for several `d` at once (concurrently when enabled), preserving order.
pub fn pell_sweep(ds: &[u64], n: u64, search_bound: u64) -> Vec<Result<PellSolution, ConeError>> {
    sweep::map(ds, |&d| pell_min_solution(d, n, search_bound))
}

/// The raw footnote boundary `(1, 2d·y₁/x₁)` from `X² − dY² = 5`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FootnoteBoundary {
    pub d: u64,
    pub pell: PellSolution,
    pub boundary: DivisorClass,
    pub flop_wall: DivisorClass,
    pub matches_flop_wall: bool,
    pub inside_movable_cone: bool,
    pub note: &'static str,
}

pub const FOOTNOTE_NOTE: &str =
    "raw boundary 2d·y1/x1 in the source divisor convention; its normalization against the (H̃, B) basis is unresolved";

pub fn footnote_nef_boundary(ctx: &K3Context, d: u64) -> Result<FootnoteBoundary, ConeError> {
    let pell = pell_min_solution(d, 5, FOOTNOTE_SEARCH_BOUND)?;
    let (Some(x1), Some(y1)) = (pell.x1, pell.y1) else {
        return Err(ConeError::NoSolution { d, n: 5, certificate: pell.certificate.map(|c| c.statement) });
    };
    let slope = BigRational::new((2 * d as u128 * y1 as u128).into(), x1.into());
    let boundary = DivisorClass::new(BigRational::from_integer(1.into()), slope);
    let wall = flop_wall(ctx);
    Ok(FootnoteBoundary {
        d,
        matches_flop_wall: boundary == wall,
        inside_movable_cone: boundary.y <= boundary.x,
        flop_wall: wall,
        boundary,
        pell,
        note: FOOTNOTE_NOTE,
    })
}
