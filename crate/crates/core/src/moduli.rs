//! Moduli spaces `Picbar^d` and `Hilb^n` of sheaves on a genus-`g` K3 surface,
//! the divisibility bound for their Brauer obstruction classes, and the
//! certified graph of derived equivalences between them.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num::{BigInt, Integer};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{gram, moduli_dimension, perp_basis, IntegerLattice, K3Context, LatticeError, MukaiVector};
use crate::sweep;

/// Largest `|d|` or `n` accepted by [`describe`].
pub const MAX_INDEX: i64 = 1_000_000_000_000;
/// Largest number of indices in one graph request.
pub const MAX_RANGE_LEN: i64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("cannot parse moduli kind `{0}` (expected hilb:N or picbar:D)")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuliKind {
    Hilb(i64),
    Picbar(i64),
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliKind::Hilb(n) => write!(f, "Hilb^{n}"),
            ModuliKind::Picbar(d) => write!(f, "Picbar^{d}"),
        }
    }
}

impl Serialize for ModuliKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `hilb:2`, `Hilb(2)`, `Hilb^2`, `picbar:-1`, `Picbar(-1)`, `Picbar^-1`.
impl FromStr for ModuliKind {
    type Err = ModuliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || ModuliError::Parse(text.to_string());
        let t = text.trim();
        let split = t.find([':', '(', '^']).ok_or_else(bad)?;
        let (name, rest) = t.split_at(split);
        let rest = &rest[1..];
        let rest = if t.as_bytes()[split] == b'(' { rest.strip_suffix(')').ok_or_else(bad)? } else { rest };
        let k: i64 = rest.trim().parse().map_err(|_| bad())?;
        match name.trim().to_ascii_lowercase().as_str() {
            "hilb" => Ok(ModuliKind::Hilb(k)),
            "picbar" => Ok(ModuliKind::Picbar(k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModuliDescriptor {
    pub g: i64,
    pub kind: ModuliKind,
    pub mukai_vector: MukaiVector,
    #[serde(serialize_with = "crate::rational::serialize_bigint")]
    pub dim: BigInt,
    /// `α^k = 1` is certified whenever this divides `k`.
    pub brauer_bound: u64,
    pub certified_fine: bool,
}

impl ModuliDescriptor {
    /// Whether `α^k = 1` follows from the divisibility bound.
    pub fn twist_is_trivial(&self, k: i64) -> bool {
        k.unsigned_abs().is_multiple_of(self.brauer_bound)
    }
}

/// `gcd(2g−2, |d+1−g|)`, with `gcd(x, 0) = x`.
pub fn brauer_bound(ctx: &K3Context, d: i64) -> u64 {
    (ctx.degree() as u64).gcd(&(d + 1 - ctx.g()).unsigned_abs())
}

pub fn describe(ctx: &K3Context, kind: ModuliKind) -> Result<ModuliDescriptor, ModuliError> {
    let (v, bound) = match kind {
        ModuliKind::Hilb(n) => {
            if !(1..=MAX_INDEX).contains(&n) {
                return Err(ModuliError::InvalidIndex(format!("Hilb^n needs 1 <= n <= {MAX_INDEX}, got {n}")));
            }
            (MukaiVector::from_ints(1, 0, 1 - n), 1)
        }
        ModuliKind::Picbar(d) => {
            if d.abs() > MAX_INDEX {
                return Err(ModuliError::InvalidIndex(format!("Picbar^d needs |d| <= {MAX_INDEX}, got {d}")));
            }
            (MukaiVector::from_ints(0, 1, d + 1 - ctx.g()), brauer_bound(ctx, d))
        }
    };
    let dim = moduli_dimension(ctx, &v)?;
    Ok(ModuliDescriptor { g: ctx.g(), kind, mukai_vector: v, dim, brauer_bound: bound, certified_fine: bound == 1 })
}

/// Sufficient (not necessary) criterion for a universal sheaf.
pub fn is_certified_fine(desc: &ModuliDescriptor) -> bool {
    desc.brauer_bound == 1
}

/// Gram matrix of the Mukai pairing on `v^⊥`.
pub fn ns_lattice(ctx: &K3Context, desc: &ModuliDescriptor) -> Result<IntegerLattice, ModuliError> {
    let (b1, b2) = perp_basis(ctx, &desc.mukai_vector)?;
    Ok(gram(ctx, &[b1, b2])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistStatus {
    Trivial,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeEnd {
    pub descriptor: ModuliDescriptor,
    pub twist_exponent: i64,
    pub twist_status: TwistStatus,
}

impl EdgeEnd {
    fn new(descriptor: ModuliDescriptor, twist_exponent: i64) -> Self {
        let twist_status =
            if descriptor.twist_is_trivial(twist_exponent) { TwistStatus::Trivial } else { TwistStatus::Unknown };
        Self { descriptor, twist_exponent, twist_status }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Justification {
    pub location: &'static str,
    pub quote: &'static str,
}

pub const FM_EQUIVALENCE: Justification = Justification {
    location: "Fourier–Mukai equivalence between compactified Jacobians",
    quote: "FM: D^b(Picbar^m, α_m^n) → D^b(Picbar^n, α_n^{−m}) is an equivalence",
};
pub const TWISTED_SPECIAL_CASE: Justification = Justification {
    location: "special case n = 0 of the Fourier–Mukai equivalence",
    quote: "D^b(Picbar^d) ≅ D^b(Picbar^0, α_0^d)",
};
pub const UNTWISTED_SPECIAL_CASE: Justification = Justification {
    location: "special case n = g−1−m of the Fourier–Mukai equivalence",
    quote: "D^b(Picbar^d) ≅ D^b(Picbar^{g−1−d}) since α_d^{g−1−d} = 1 and α_{g−1−d}^d = 1",
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Twisted,
    Untwisted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceEdge {
    pub kind: EdgeKind,
    pub left: EdgeEnd,
    pub right: EdgeEnd,
    pub justification: Justification,
    pub certified_untwisted: bool,
}

impl EquivalenceEdge {
    fn new(kind: EdgeKind, left: EdgeEnd, right: EdgeEnd, justification: Justification) -> Self {
        let certified_untwisted =
            left.twist_status == TwistStatus::Trivial && right.twist_status == TwistStatus::Trivial;
        Self { kind, left, right, justification, certified_untwisted }
    }
}

fn check_range(range: &RangeInclusive<i64>) -> Result<(), ModuliError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Err(ModuliError::InvalidIndex(format!("empty range {lo}..{hi}")));
    }
    if (hi as i128 - lo as i128) >= MAX_RANGE_LEN as i128 {
        return Err(ModuliError::InvalidIndex(format!("range {lo}..{hi} exceeds {MAX_RANGE_LEN} indices")));
    }
    Ok(())
}

/// Edges for `d` in `range`: `Picbar^d ↔ (Picbar^0, α_0^d)` for `d ≠ 0`, and the
/// untwisted `Picbar^d ↔ Picbar^{g−1−d}`, each unordered pair once.
pub fn certified_equivalences(
    ctx: &K3Context,
    range: RangeInclusive<i64>,
) -> Result<Vec<EquivalenceEdge>, ModuliError> {
    check_range(&range)?;
    let ds: Vec<i64> = range.collect();
    let g = ctx.g();
    let per_d = sweep::map(&ds, |&d| -> Result<(Option<EquivalenceEdge>, (i64, i64)), ModuliError> {
        let here = describe(ctx, ModuliKind::Picbar(d))?;
        let twisted = if d != 0 {
            let zero = describe(ctx, ModuliKind::Picbar(0))?;
            Some(EquivalenceEdge::new(
                EdgeKind::Twisted,
                EdgeEnd::new(here, 0),
                EdgeEnd::new(zero, d),
                TWISTED_SPECIAL_CASE,
            ))
        } else {
            None
        };
        let e = g - 1 - d;
        Ok((twisted, (d.min(e), d.max(e))))
    });
    let mut twisted = Vec::new();
    let mut pairs = BTreeSet::new();
    for r in per_d {
        let (t, p) = r?;
        twisted.extend(t);
        pairs.insert(p);
    }
    let pairs: Vec<(i64, i64)> = pairs.into_iter().collect();
    let untwisted = sweep::map(&pairs, |&(m, n)| -> Result<EquivalenceEdge, ModuliError> {
        Ok(EquivalenceEdge::new(
            EdgeKind::Untwisted,
            EdgeEnd::new(describe(ctx, ModuliKind::Picbar(m))?, n),
            EdgeEnd::new(describe(ctx, ModuliKind::Picbar(n))?, -m),
            UNTWISTED_SPECIAL_CASE,
        ))
    });
    let mut edges = twisted;
    for e in untwisted {
        edges.push(e?);
    }
    Ok(edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceGraph {
    pub g: i64,
    pub nodes: Vec<ModuliDescriptor>,
    pub edges: Vec<EquivalenceEdge>,
}

/// Nodes are every `Picbar^d` touched by an edge, sorted by `d`.
pub fn equivalence_graph(ctx: &K3Context, range: RangeInclusive<i64>) -> Result<EquivalenceGraph, ModuliError> {
    let edges = certified_equivalences(ctx, range)?;
    let mut seen = BTreeSet::new();
    let mut nodes = Vec::new();
    let ends = edges.iter().flat_map(|e| [&e.left.descriptor, &e.right.descriptor]);
    let mut ends: Vec<_> = ends.collect();
    ends.sort_by_key(|d| d.kind);
    for d in ends {
        if seen.insert(d.kind) {
            nodes.push(d.clone());
        }
    }
    Ok(EquivalenceGraph { g: ctx.g(), nodes, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremBCertificate {
    pub g: i64,
    pub x: ModuliDescriptor,
    pub y: ModuliDescriptor,
    #[serde(serialize_with = "crate::rational::serialize_bigint")]
    pub disc_x: BigInt,
    #[serde(serialize_with = "crate::rational::serialize_bigint")]
    pub disc_y: BigInt,
    pub derived_equivalent: bool,
    pub birational_possible: bool,
    pub edge: EquivalenceEdge,
}

/// `X = Picbar^0`, `Y = Picbar^{g−1}`: derived equivalent, with
/// non-isometric Néron–Severi lattices.
pub fn theorem_b_certificate(ctx: &K3Context) -> Result<TheoremBCertificate, ModuliError> {
    let g = ctx.g();
    let x = describe(ctx, ModuliKind::Picbar(0))?;
    let y = describe(ctx, ModuliKind::Picbar(g - 1))?;
    let disc_x = ns_lattice(ctx, &x)?.det();
    let disc_y = ns_lattice(ctx, &y)?.det();
    let edge = EquivalenceEdge::new(EdgeKind::Untwisted, EdgeEnd::new(x.clone(), g - 1), EdgeEnd::new(y.clone(), 0), UNTWISTED_SPECIAL_CASE);
    Ok(TheoremBCertificate {
        g,
        derived_equivalent: edge.certified_untwisted,
        birational_possible: disc_x == disc_y,
        x,
        y,
        disc_x,
        disc_y,
        edge,
    })
}

/// Certificates for many genera (concurrently when enabled), in input order.
pub fn theorem_b_sweep(gs: &[i64]) -> Vec<Result<TheoremBCertificate, ModuliError>> {
    sweep::map(gs, |&g| theorem_b_certificate(&K3Context::new(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(g: i64) -> K3Context {
        K3Context::new(g).unwrap()
    }

    #[test]
    fn describe_examples() {
        let d = describe(&ctx(3), ModuliKind::Picbar(1)).unwrap();
        assert_eq!(d.mukai_vector, MukaiVector::from_ints(0, 1, -1));
        assert_eq!((d.dim.clone(), d.brauer_bound, d.certified_fine), (BigInt::from(6), 1, true));
        let d = describe(&ctx(3), ModuliKind::Picbar(2)).unwrap();
        assert_eq!(d.mukai_vector, MukaiVector::from_ints(0, 1, 0));
        assert_eq!(d.brauer_bound, 4);
        let d = describe(&ctx(2), ModuliKind::Hilb(2)).unwrap();
        assert_eq!(d.mukai_vector, MukaiVector::from_ints(1, 0, -1));
        assert_eq!((d.dim, d.brauer_bound), (BigInt::from(4), 1));
        assert!(matches!(describe(&ctx(2), ModuliKind::Hilb(0)), Err(ModuliError::InvalidIndex(_))));
    }

    #[test]
    fn fineness() {
        assert!(is_certified_fine(&describe(&ctx(3), ModuliKind::Picbar(1)).unwrap()));
        assert!(!is_certified_fine(&describe(&ctx(3), ModuliKind::Picbar(0)).unwrap()));
        assert!(is_certified_fine(&describe(&ctx(2), ModuliKind::Picbar(0)).unwrap()));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("hilb:2".parse::<ModuliKind>().unwrap(), ModuliKind::Hilb(2));
        assert_eq!("Picbar(-1)".parse::<ModuliKind>().unwrap(), ModuliKind::Picbar(-1));
        assert_eq!("Picbar^3".parse::<ModuliKind>().unwrap(), ModuliKind::Picbar(3));
        assert!("jac:1".parse::<ModuliKind>().is_err());
        assert!("Picbar(1".parse::<ModuliKind>().is_err());
    }

    fn untwisted_pairs(edges: &[EquivalenceEdge]) -> Vec<(i64, i64)> {
        edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Untwisted)
            .map(|e| match (e.left.descriptor.kind, e.right.descriptor.kind) {
                (ModuliKind::Picbar(a), ModuliKind::Picbar(b)) => (a, b),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn graph_examples() {
        let edges = certified_equivalences(&ctx(3), 0..=2).unwrap();
        assert!(untwisted_pairs(&edges).contains(&(0, 2)));
        assert!(edges.iter().filter(|e| e.kind == EdgeKind::Untwisted).all(|e| e.certified_untwisted));

        let edges = certified_equivalences(&ctx(5), 0..=4).unwrap();
        assert_eq!(untwisted_pairs(&edges), vec![(0, 4), (1, 3), (2, 2)]);

        let edges = certified_equivalences(&ctx(2), 0..=0).unwrap();
        assert_eq!(edges.len(), 1);
        assert_eq!(untwisted_pairs(&edges), vec![(0, 1)]);
        assert!(edges[0].certified_untwisted);
        assert!(edges.iter().all(|e| e.justification.quote.contains('≅')));
    }

    #[test]
    fn twisted_edges_report_unknown_twists() {
        // g = 3: bound(0) = 2, so α_0^1 is not certified trivial.
        let edges = certified_equivalences(&ctx(3), 1..=2).unwrap();
        let t: Vec<_> = edges.iter().filter(|e| e.kind == EdgeKind::Twisted).collect();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].right.twist_status, TwistStatus::Unknown);
        assert!(!t[0].certified_untwisted);
        assert_eq!(t[1].right.twist_status, TwistStatus::Trivial);
    }

    #[test]
    fn graph_nodes_are_unique_and_sorted() {
        let gr = equivalence_graph(&ctx(4), -3..=5).unwrap();
        let kinds: Vec<_> = gr.nodes.iter().map(|n| n.kind).collect();
        let mut sorted = kinds.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(kinds, sorted);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=1;
        assert!(certified_equivalences(&ctx(4), empty).is_err());
    }

    #[test]
    fn theorem_b_all_small_genera() {
        let gs: Vec<i64> = (2..=30).collect();
        for (g, c) in gs.iter().zip(theorem_b_sweep(&gs)) {
            let c = c.unwrap();
            assert_eq!((c.disc_x.clone(), c.disc_y.clone()), (BigInt::from(-4), BigInt::from(-1)), "g = {g}");
            assert!(c.derived_equivalent);
            assert!(!c.birational_possible);
        }
    }

    #[test]
    fn ns_lattice_examples() {
        let h = describe(&ctx(2), ModuliKind::Hilb(2)).unwrap();
        assert_eq!(ns_lattice(&ctx(2), &h).unwrap().det(), BigInt::from(-4));
        let p0 = describe(&ctx(4), ModuliKind::Picbar(0)).unwrap();
        assert_eq!(ns_lattice(&ctx(4), &p0).unwrap().det(), BigInt::from(-4));
        let p3 = describe(&ctx(4), ModuliKind::Picbar(3)).unwrap();
        assert_eq!(ns_lattice(&ctx(4), &p3).unwrap().det(), BigInt::from(-1));
    }

    #[test]
    fn exhaustive_dims_and_pairings() {
        for g in 2..=30 {
            let c = ctx(g);
            for d in -2 * g..=2 * g {
                let desc = describe(&c, ModuliKind::Picbar(d)).unwrap();
                assert_eq!(desc.dim, BigInt::from(2 * g));
                assert!(desc.twist_is_trivial(g - 1 - d));
                assert_eq!((2 * g - 2) as u64 % desc.brauer_bound, 0);
                assert_eq!((d + 1 - g).unsigned_abs() % desc.brauer_bound, 0);
            }
        }
    }

    proptest! {
        #[test]
        fn ns_det_is_basis_independent(g in 2i64..40, d in -80i64..80, a in -5i64..5, b in -5i64..5, flip in any::<bool>()) {
            let c = ctx(g);
            let desc = describe(&c, ModuliKind::Picbar(d)).unwrap();
            let lat = ns_lattice(&c, &desc).unwrap();
            // unimodular [[1,a],[0,1]] then [[1,0],[b,1]], optionally swapped
            let mut u = vec![
                vec![BigInt::from(1 + a * b), BigInt::from(a)],
                vec![BigInt::from(b), BigInt::from(1)],
            ];
            if flip {
                u.swap(0, 1);
            }
            prop_assert_eq!(lat.change_basis(&u).unwrap().det(), lat.det());
        }
    }
}
