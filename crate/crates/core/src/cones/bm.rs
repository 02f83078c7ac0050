use num::{BigRational, One, Signed, Zero};
use serde::Serialize;

use super::{classify_divisor, ChamberLabel, ConeError, DivisorClass};
use crate::lattice::{pair, reflect, theta_coordinates, K3Context, MukaiVector};
use crate::rational::{fmt_rational, int};

/// Every intermediate of the ample-class computation for one value of `t²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BmChain {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub tsq: BigRational,
    /// `w = (1, −(2g−1)/(2g−2), g − (g−1)t²)`, positive scalar dropped.
    pub w: MukaiVector,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub w_dot_v2: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub w_dot_s: BigRational,
    /// `w + ⟨w,s⟩·s`, which lies in `v₁^⊥`.
    pub reflected: MukaiVector,
    /// θ-coordinates of `reflected`.
    pub theta: DivisorClass,
    /// `theta` rescaled to `y = 1`.
    pub class: DivisorClass,
    pub label: ChamberLabel,
}

/// `t₀² = 1/(g−1)`.
pub fn bm_threshold(ctx: &K3Context) -> BigRational {
    BigRational::new(1.into(), (ctx.g() - 1).into())
}

/// Closed form `(1 + 1/(2(g−1)²t²), 1)`.
pub fn bm_closed_form(ctx: &K3Context, tsq: &BigRational) -> DivisorClass {
    let gm1 = int(ctx.g() - 1);
    let x = BigRational::one() + (int(2) * &gm1 * &gm1 * tsq).recip();
    DivisorClass::new(x, BigRational::one())
}

/// Runs the chain for any `t² > 0`, without the threshold check.
pub fn bm_chain(ctx: &K3Context, tsq: &BigRational) -> Result<BmChain, ConeError> {
    if !tsq.is_positive() {
        return Err(ConeError::NonPositiveTsq(fmt_rational(tsq)));
    }
    let g = ctx.g();
    let w = MukaiVector::new(
        BigRational::one(),
        -BigRational::new((2 * g - 1).into(), (2 * g - 2).into()),
        int(g) - int(g - 1) * tsq,
    );
    let w_dot_v2 = pair(ctx, &w, &ctx.jacobian_vector());
    if !w_dot_v2.is_zero() {
        return Err(ConeError::ChainInvariant("w is not orthogonal to v2"));
    }
    let s = ctx.twist_vector();
    let w_dot_s = pair(ctx, &w, &s);
    let reflected = reflect(ctx, &w, &s).map_err(|_| ConeError::ChainInvariant("twist vector is not spherical"))?;
    let theta =
        theta_coordinates(ctx, &reflected).map_err(|_| ConeError::ChainInvariant("reflected w is not in v1-perp"))?;
    if !theta.y.is_positive() {
        return Err(ConeError::ChainInvariant("reflected w has non-positive rank"));
    }
    let class = DivisorClass::new(&theta.x / &theta.y, BigRational::one());
    let label = classify_divisor(ctx, &class)?;
    Ok(BmChain { tsq: tsq.clone(), w, w_dot_v2, w_dot_s, reflected, theta, class, label })
}

/// Ample class on `Picbar^{−g}` attached to `t² > 1/(g−1)`, normalized to `y = 1`.
pub fn bm_ample_class(ctx: &K3Context, tsq: &BigRational) -> Result<DivisorClass, ConeError> {
    let threshold = bm_threshold(ctx);
    if *tsq <= threshold {
        return Err(ConeError::BelowThreshold { tsq: fmt_rational(tsq), threshold: fmt_rational(&threshold) });
    }
    let chain = bm_chain(ctx, tsq)?;
    if chain.class != bm_closed_form(ctx, tsq) {
        return Err(ConeError::ChainInvariant("chain disagrees with the closed form"));
    }
    if chain.label != ChamberLabel::AmplePicbar {
        return Err(ConeError::ChainInvariant("class is not in the Picbar ample chamber"));
    }
    Ok(chain.class)
}

/// The chain evaluated at `t² = 1/(g−1)`, whose ray is the flop wall.
pub fn bm_nef_limit(ctx: &K3Context) -> Result<BmChain, ConeError> {
    bm_chain(ctx, &bm_threshold(ctx))
}

/// `y/x` of the ample class, `1/(1 + 1/(2(g−1)²t²))`.
pub fn bm_slope(ctx: &K3Context, tsq: &BigRational) -> Result<BigRational, ConeError> {
    let c = bm_ample_class(ctx, tsq)?;
    Ok(&c.y / &c.x)
}

/// `(t², slope)` at `t² = t₀²·(1 + k²/4)` for `k = 1..=n`.
pub fn bm_samples(ctx: &K3Context, n: usize) -> Vec<(BigRational, BigRational)> {
    let t0 = bm_threshold(ctx);
    (1..=n as i64)
        .map(|k| {
            let tsq = &t0 * (BigRational::one() + BigRational::new((k * k).into(), 4.into()));
            let slope = bm_slope(ctx, &tsq).expect("sample lies above the threshold");
            (tsq, slope)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::flop_wall;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn ctx(g: i64) -> K3Context {
        K3Context::new(g).unwrap()
    }

    #[test]
    fn hand_oracle_g2_tsq2() {
        let c = ctx(2);
        let chain = bm_chain(&c, &int(2)).unwrap();
        assert_eq!(chain.w, MukaiVector::new(int(1), frac(-3, 2), int(0)));
        assert_eq!(chain.w_dot_s, int(1));
        assert_eq!(chain.reflected, MukaiVector::new(int(2), frac(-5, 2), int(2)));
        assert_eq!(chain.class, DivisorClass::new(frac(5, 4), int(1)));
        assert_eq!(bm_ample_class(&c, &int(2)).unwrap(), DivisorClass::new(frac(5, 4), int(1)));
    }

    #[test]
    fn threshold_is_strict() {
        let c = ctx(2);
        let chain = bm_chain(&c, &int(1)).unwrap();
        assert!(chain.w_dot_s.is_zero());
        assert_eq!(chain.reflected, chain.w);
        assert_eq!(chain.class, DivisorClass::new(frac(3, 2), int(1)));
        assert_eq!(chain.label, ChamberLabel::WallFlop);
        assert!(matches!(bm_ample_class(&c, &int(1)), Err(ConeError::BelowThreshold { .. })));
        assert!(matches!(bm_ample_class(&c, &frac(1, 2)), Err(ConeError::BelowThreshold { .. })));
        assert!(matches!(bm_chain(&c, &int(0)), Err(ConeError::NonPositiveTsq(_))));
    }

    #[test]
    fn limit_is_flop_wall() {
        for g in [2, 3, 5, 11] {
            let c = ctx(g);
            let lim = bm_nef_limit(&c).unwrap();
            assert!(lim.class.same_ray(&flop_wall(&c)));
            assert_eq!(lim.class.x, frac(2 * g - 1, 2 * g - 2));
        }
    }

    #[test]
    fn samples_increase_towards_one() {
        let c = ctx(3);
        let s = bm_samples(&c, 12);
        assert!(s.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(s.iter().all(|(_, sl)| *sl < BigRational::one()));
    }

    proptest! {
        #[test]
        fn chain_matches_closed_form(g in 2i64..=10, num in 1i64..1_000_000, den in 1i64..1000) {
            let c = ctx(g);
            let tsq = bm_threshold(&c) + frac(num, den);
            let chain = bm_chain(&c, &tsq).unwrap();
            prop_assert!(chain.w_dot_v2.is_zero());
            prop_assert_eq!(&chain.class, &bm_closed_form(&c, &tsq));
            prop_assert_eq!(chain.label, ChamberLabel::AmplePicbar);
        }

        #[test]
        fn slope_is_monotone(g in 2i64..=10, a in 1i64..10_000, b in 1i64..10_000) {
            let c = ctx(g);
            let t1 = bm_threshold(&c) + frac(a.min(b), 7);
            let t2 = bm_threshold(&c) + frac(a.max(b), 7);
            let (s1, s2) = (bm_slope(&c, &t1).unwrap(), bm_slope(&c, &t2).unwrap());
            let ordered = if a == b { s1 == s2 } else { s1 < s2 };
            prop_assert!(ordered);
            prop_assert!(s2 < BigRational::one());
        }
    }
}
