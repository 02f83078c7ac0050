use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Zero};
use serde::{Serialize, Serializer};

use super::integer::{hermite_normal_form, integer_kernel, IntegerLattice};
use super::LatticeError;
use crate::cones::DivisorClass;
use crate::rational::{fmt_rational, int, is_integral, parse_rational_list};

pub const MAX_GENUS: i64 = 1_000_000;

/// A K3 surface with `Pic = Z·h`, `h² = 2g − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct K3Context {
    g: i64,
}

impl K3Context {
    pub fn new(g: i64) -> Result<Self, LatticeError> {
        if !(2..=MAX_GENUS).contains(&g) {
            return Err(LatticeError::InvalidGenus(g));
        }
        Ok(Self { g })
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    /// `h² = 2g − 2`.
    pub fn degree(&self) -> i64 {
        2 * self.g - 2
    }

    /// `dim H⁰(O_S(1)) = g + 1`.
    pub fn h0(&self) -> i64 {
        self.g + 1
    }

    /// `v₁ = (1, 0, 1 − g)`, the ideal sheaf of `g` points.
    pub fn hilbert_vector(&self) -> MukaiVector {
        MukaiVector::from_ints(1, 0, 1 - self.g)
    }

    /// `v₂ = (0, 1, 1 − 2g)`, degree `−g` sheaves on curves in `|h|`.
    pub fn jacobian_vector(&self) -> MukaiVector {
        MukaiVector::from_ints(0, 1, 1 - 2 * self.g)
    }

    /// `v(O_S(−1)) = (1, −1, g)`.
    pub fn twist_vector(&self) -> MukaiVector {
        line_bundle_vector(self, -1)
    }
}

/// Rational point `(r, a, s)` of the algebraic Mukai lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigRational,
    pub a: BigRational,
    pub s: BigRational,
}

impl MukaiVector {
    pub fn new(r: BigRational, a: BigRational, s: BigRational) -> Self {
        Self { r, a, s }
    }

    pub fn from_ints(r: i64, a: i64, s: i64) -> Self {
        Self::new(int(r), int(a), int(s))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.a.is_zero() && self.s.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        is_integral(&self.r) && is_integral(&self.a) && is_integral(&self.s)
    }

    /// Integer components, if integral.
    pub fn to_integers(&self) -> Option<[BigInt; 3]> {
        self.is_integral().then(|| [self.r.to_integer(), self.a.to_integer(), self.s.to_integer()])
    }

    /// Integral, nonzero, and the gcd of the components is 1.
    pub fn is_primitive(&self) -> bool {
        match self.to_integers() {
            Some([r, a, s]) => r.gcd(&a).gcd(&s).is_one(),
            None => false,
        }
    }

    pub fn from_integers(c: &[BigInt]) -> Self {
        Self::new(
            BigRational::from_integer(c[0].clone()),
            BigRational::from_integer(c[1].clone()),
            BigRational::from_integer(c[2].clone()),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.r * k, &self.a * k, &self.s * k)
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", fmt_rational(&self.r), fmt_rational(&self.a), fmt_rational(&self.s))
    }
}

impl FromStr for MukaiVector {
    type Err = LatticeError;

    /// `r,a,s` with optional surrounding parentheses; entries may be `p/q`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let parts = parse_rational_list(t).map_err(|_| LatticeError::Parse(text.to_string()))?;
        match <[BigRational; 3]>::try_from(parts) {
            Ok([r, a, s]) => Ok(Self::new(r, a, s)),
            Err(_) => Err(LatticeError::Parse(text.to_string())),
        }
    }
}

impl Serialize for MukaiVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.r), fmt_rational(&self.a), fmt_rational(&self.s)].serialize(s)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r + &o.r, &self.a + &o.a, &self.s + &o.s)
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r - &o.r, &self.a - &o.a, &self.s - &o.s)
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        MukaiVector::new(-&self.r, -&self.a, -&self.s)
    }
}

impl Mul<&MukaiVector> for &BigRational {
    type Output = MukaiVector;
    fn mul(self, v: &MukaiVector) -> MukaiVector {
        v.scale(self)
    }
}

/// Mukai pairing `⟨(r,a,s),(r',a',s')⟩ = a·a'·(2g−2) − r·s' − r'·s`.
pub fn pair(ctx: &K3Context, v: &MukaiVector, w: &MukaiVector) -> BigRational {
    &v.a * &w.a * int(ctx.degree()) - &v.r * &w.s - &w.r * &v.s
}

/// `v(O_S(k)) = (1, k, (g−1)k² + 1)`.
pub fn line_bundle_vector(ctx: &K3Context, k: i64) -> MukaiVector {
    let k = BigInt::from(k);
    let s = BigInt::from(ctx.g() - 1) * &k * &k + 1;
    MukaiVector::new(BigRational::one(), BigRational::from_integer(k), BigRational::from_integer(s))
}

/// Reflection `v ↦ v + ⟨v,s⟩·s` in the hyperplane orthogonal to a spherical `s`.
pub fn reflect(ctx: &K3Context, v: &MukaiVector, s: &MukaiVector) -> Result<MukaiVector, LatticeError> {
    if !s.is_integral() || pair(ctx, s, s) != int(-2) {
        return Err(LatticeError::NonSphericalReflector(s.to_string()));
    }
    let c = pair(ctx, v, s);
    Ok(v + &s.scale(&c))
}

/// Hermite-reduced basis of the saturated sublattice `{u ∈ Z³ : ⟨u,v⟩ = 0}`.
pub fn perp_basis(ctx: &K3Context, v: &MukaiVector) -> Result<(MukaiVector, MukaiVector), LatticeError> {
    let [r, a, s] = v.to_integers().ok_or_else(|| LatticeError::NonIntegralVector(v.to_string()))?;
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(LatticeError::NonPrimitiveVector(v.to_string()));
    }
    // ⟨u,v⟩ = u.r·(−s) + u.a·(2g−2)a + u.s·(−r)
    let row = [-s, BigInt::from(ctx.degree()) * a, -r];
    let kernel = hermite_normal_form(&integer_kernel(&row));
    debug_assert_eq!(kernel.len(), 2);
    Ok((MukaiVector::from_integers(&kernel[0]), MukaiVector::from_integers(&kernel[1])))
}

/// Gram matrix of the Mukai pairing on `basis`.
pub fn gram(ctx: &K3Context, basis: &[MukaiVector]) -> Result<IntegerLattice, LatticeError> {
    let n = basis.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = pair(ctx, &basis[i], &basis[j]);
            if !is_integral(&p) {
                return Err(LatticeError::NonIntegralPairing { i, j, value: fmt_rational(&p) });
            }
            m[i][j] = p.to_integer();
            m[j][i] = m[i][j].clone();
        }
    }
    IntegerLattice::new(m)
}

/// Coordinates of `θ(u)` in the basis `H̃ = θ(0,−1,0)`, `B = θ(−1,0,1−g)`.
///
/// Any `u ⟂ v₁` is `x·(0,−1,0) − y·(−1,0,1−g)`, so `x = −u.a`, `y = u.r`, and
/// the class is `x·H̃ − y·B`.
pub fn theta_coordinates(ctx: &K3Context, u: &MukaiVector) -> Result<DivisorClass, LatticeError> {
    if !pair(ctx, u, &ctx.hilbert_vector()).is_zero() {
        return Err(LatticeError::NotInPerp(u.to_string()));
    }
    Ok(DivisorClass::new(-&u.a, u.r.clone()))
}

/// `dim M(v) = ⟨v,v⟩ + 2`.
pub fn moduli_dimension(ctx: &K3Context, v: &MukaiVector) -> Result<BigInt, LatticeError> {
    if !v.is_integral() {
        return Err(LatticeError::NonIntegralVector(v.to_string()));
    }
    let sq = pair(ctx, v, v).to_integer();
    if sq.is_odd() {
        return Err(LatticeError::OddSquare(sq.to_string()));
    }
    if sq < BigInt::from(-2) {
        return Err(LatticeError::SquareBelowMinusTwo(sq.to_string()));
    }
    Ok(sq + 2)
}
