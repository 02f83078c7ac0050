use std::fmt;
use std::str::FromStr;

use num::{BigRational, One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::ConeError;
use crate::lattice::K3Context;
use crate::rational::{fmt_rational, int, parse_rational_list};
use crate::sweep;

/// The class `x·H̃ − y·B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub x: BigRational,
    pub y: BigRational,
}

impl DivisorClass {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `y/x` for classes with `x > 0`.
    pub fn slope(&self) -> Option<BigRational> {
        self.x.is_positive().then(|| &self.y / &self.x)
    }

    /// Positive rescaling with `x = 1` (or `|y| = 1` on the vertical axis).
    pub fn ray(&self) -> Self {
        if !self.x.is_zero() {
            let k = self.x.abs();
            Self::new(&self.x / &k, &self.y / &k)
        } else if !self.y.is_zero() {
            let k = self.y.abs();
            Self::new(self.x.clone(), &self.y / &k)
        } else {
            self.clone()
        }
    }

    /// Whether `other` is a positive multiple of `self`.
    pub fn same_ray(&self, other: &Self) -> bool {
        !self.is_zero() && !other.is_zero() && self.ray() == other.ray()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

impl FromStr for DivisorClass {
    type Err = ConeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let parts = parse_rational_list(t).map_err(|_| ConeError::Parse(text.to_string()))?;
        match <[BigRational; 2]>::try_from(parts) {
            Ok([x, y]) => Ok(Self::new(x, y)),
            Err(_) => Err(ConeError::Parse(text.to_string())),
        }
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.x), fmt_rational(&self.y)].serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChamberLabel {
    AmpleHilb,
    NefBoundaryHilbertChow,
    WallFlop,
    AmplePicbar,
    WallLagrangianFibration,
    MovableExterior,
}

impl ChamberLabel {
    pub const ALL: [ChamberLabel; 6] = [
        ChamberLabel::AmpleHilb,
        ChamberLabel::NefBoundaryHilbertChow,
        ChamberLabel::WallFlop,
        ChamberLabel::AmplePicbar,
        ChamberLabel::WallLagrangianFibration,
        ChamberLabel::MovableExterior,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ChamberLabel::AmpleHilb => "AMPLE_HILB",
            ChamberLabel::NefBoundaryHilbertChow => "NEF_BOUNDARY_HILBERT_CHOW",
            ChamberLabel::WallFlop => "WALL_FLOP",
            ChamberLabel::AmplePicbar => "AMPLE_PICBAR",
            ChamberLabel::WallLagrangianFibration => "WALL_LAGRANGIAN_FIBRATION",
            ChamberLabel::MovableExterior => "MOVABLE_EXTERIOR",
        }
    }

    /// Inside the closed movable cone.
    pub fn is_movable(&self) -> bool {
        *self != ChamberLabel::MovableExterior
    }
}

impl fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generators `H̃` and `H̃ − B` of the movable cone.
pub fn movable_cone(_ctx: &K3Context) -> (DivisorClass, DivisorClass) {
    (DivisorClass::from_ints(1, 0), DivisorClass::from_ints(1, 1))
}

/// `(2g−2)/(2g−1)`.
pub fn flop_wall_slope(ctx: &K3Context) -> BigRational {
    BigRational::new(ctx.degree().into(), (ctx.degree() + 1).into())
}

/// The wall `H̃ − (2g−2)/(2g−1)·B` separating the two nef cones.
pub fn flop_wall(ctx: &K3Context) -> DivisorClass {
    DivisorClass::new(BigRational::one(), flop_wall_slope(ctx))
}

/// Beauville–Bogomolov square `(2g−2)(x² − y²)`.
pub fn bb_square(ctx: &K3Context, d: &DivisorClass) -> BigRational {
    int(ctx.degree()) * (&d.x * &d.x - &d.y * &d.y)
}

pub fn classify_divisor(ctx: &K3Context, d: &DivisorClass) -> Result<ChamberLabel, ConeError> {
    if d.is_zero() {
        return Err(ConeError::ZeroClass);
    }
    let Some(sigma) = d.slope() else {
        return Ok(ChamberLabel::MovableExterior);
    };
    let wall = flop_wall_slope(ctx);
    let one = BigRational::one();
    Ok(if sigma.is_negative() || sigma > one {
        ChamberLabel::MovableExterior
    } else if sigma.is_zero() {
        ChamberLabel::NefBoundaryHilbertChow
    } else if sigma < wall {
        ChamberLabel::AmpleHilb
    } else if sigma == wall {
        ChamberLabel::WallFlop
    } else if sigma < one {
        ChamberLabel::AmplePicbar
    } else {
        ChamberLabel::WallLagrangianFibration
    })
}

/// Classifies a batch of classes (in parallel when enabled), preserving order.
pub fn classify_many(ctx: &K3Context, classes: &[DivisorClass]) -> Vec<Result<ChamberLabel, ConeError>> {
    sweep::map(classes, |d| classify_divisor(ctx, d))
}

/// One row of the chamber table: a wall when `slope_low == slope_high`,
/// otherwise the open slope interval of a chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberEntry {
    pub label: ChamberLabel,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub slope_low: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub slope_high: BigRational,
    pub is_wall: bool,
}

/// Walls and chambers of the closed movable cone, by increasing slope.
pub fn chamber_table(ctx: &K3Context) -> Vec<ChamberEntry> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let w = flop_wall_slope(ctx);
    let wall = |label, s: &BigRational| ChamberEntry { label, slope_low: s.clone(), slope_high: s.clone(), is_wall: true };
    let open = |label, lo: &BigRational, hi: &BigRational| ChamberEntry {
        label,
        slope_low: lo.clone(),
        slope_high: hi.clone(),
        is_wall: false,
    };
    vec![
        wall(ChamberLabel::NefBoundaryHilbertChow, &zero),
        open(ChamberLabel::AmpleHilb, &zero, &w),
        wall(ChamberLabel::WallFlop, &w),
        open(ChamberLabel::AmplePicbar, &w, &one),
        wall(ChamberLabel::WallLagrangianFibration, &one),
    ]
}
