use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::parse::MAX_FLOP_GENUS;
use super::{Atom, Expr, Kind};
use crate::lattice::K3Context;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6a,
    R6b,
    R6c,
    R6d,
    R6e,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6a,
        RuleId::R6b,
        RuleId::R6c,
        RuleId::R6d,
        RuleId::R6e,
    ];

    /// Rules the normalizer applies, in the order tried at one position.
    pub const ORIENTED: [RuleId; 7] =
        [RuleId::R6b, RuleId::R6a, RuleId::R6c, RuleId::R6e, RuleId::R6d, RuleId::R2, RuleId::R1];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6a => "R6a",
            RuleId::R6b => "R6b",
            RuleId::R6c => "R6c",
            RuleId::R6d => "R6d",
            RuleId::R6e => "R6e",
        }
    }

    pub fn is_oriented(&self) -> bool {
        !matches!(self, RuleId::R3 | RuleId::R4 | RuleId::R5)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// The two index pairs `(a, b)` in `P(AJcomp) = KNflop(a)^-1 ∘ KNflop(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum R3Reading {
    /// `(g − 1, g)`.
    #[default]
    A,
    /// `(1 − g, g)`.
    B,
}

impl FromStr for R3Reading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(R3Reading::A),
            "b" => Ok(R3Reading::B),
            _ => Err(format!("unknown R3 reading `{s}` (expected a or b)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleInfo {
    pub id: RuleId,
    pub lhs: String,
    pub rhs: String,
    pub oriented: bool,
    pub available: bool,
    pub location: &'static str,
    pub quote: &'static str,
}

/// The rewrite system at a fixed genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet {
    ctx: K3Context,
    reading: R3Reading,
}

type Rewrites = Vec<Expr>;

impl RuleSet {
    pub fn new(ctx: K3Context, reading: R3Reading) -> Self {
        Self { ctx, reading }
    }

    pub fn ctx(&self) -> &K3Context {
        &self.ctx
    }

    pub fn reading(&self) -> R3Reading {
        self.reading
    }

    pub fn r3_indices(&self) -> (i64, i64) {
        let g = self.ctx.g();
        match self.reading {
            R3Reading::A => (g - 1, g),
            R3Reading::B => (1 - g, g),
        }
    }

    pub fn r5_available(&self) -> bool {
        self.ctx.g() <= MAX_FLOP_GENUS
    }

    pub fn quote(&self, id: RuleId) -> &'static str {
        match id {
            RuleId::R1 => "P_{Φ∘G} ≅ Φ ∘ P_G ∘ Φ^{-1}",
            RuleId::R2 => "P_{G∘Ψ} ≅ P_G",
            RuleId::R3 => match self.reading {
                R3Reading::A => "P_F ≅ FM ∘ KN_{g−1}^{-1} ∘ KN_g ∘ FM^{-1}",
                R3Reading::B => "P_F ≅ FM ∘ KN_{1−g}^{-1} ∘ KN_g ∘ FM^{-1}",
            },
            RuleId::R4 => "F = FM ∘ AJ_* ∘ ϖ^*(− ⊗ O_S(l))",
            RuleId::R5 => "F' ∘ T_{O_S(1)} = KN_2 ∘ F",
            RuleId::R6a => "Φ ∘ Φ^{-1} = Id, Φ^{-1} ∘ Φ = Id",
            RuleId::R6b => "Id ∘ G = G = G ∘ Id",
            RuleId::R6c => "(Φ^{-1})^{-1} = Φ",
            RuleId::R6d => "(Φ ∘ Ψ)^{-1} = Ψ^{-1} ∘ Φ^{-1}",
            RuleId::R6e => "Id^{-1} = Id",
        }
    }

    pub fn location(&self, id: RuleId) -> &'static str {
        match id {
            RuleId::R1 => "P-twist conjugated by an equivalence composed on the left",
            RuleId::R2 => "P-twist unchanged by an equivalence composed on the right",
            RuleId::R3 => "P-twist of the Abel–Jacobi composite through the Mukai flop of Picbar^{-1}",
            RuleId::R4 => "factorization of F through the Fourier–Mukai equivalence",
            RuleId::R5 => "compatibility of F and F' across the flop Hilb^g ⇢ Picbar^{-g}",
            _ => "groupoid laws for composition and inverses",
        }
    }

    pub fn info(&self, id: RuleId) -> RuleInfo {
        let (a, b) = self.r3_indices();
        let (lhs, rhs): (&str, String) = match id {
            RuleId::R1 => ("P(Φ ∘ G)", "Φ ∘ P(G) ∘ Φ^-1".into()),
            RuleId::R2 => ("P(G ∘ Ψ)", "P(G)".into()),
            RuleId::R3 => ("P(AJcomp)", format!("KNflop({a})^-1 ∘ KNflop({b})")),
            RuleId::R4 => ("F", "FM ∘ AJcomp".into()),
            RuleId::R5 => ("F' ∘ T(1)", "KNhilb(2) ∘ F".into()),
            RuleId::R6a => ("Φ ∘ Φ^-1", "Id".into()),
            RuleId::R6b => ("Id ∘ G", "G".into()),
            RuleId::R6c => ("(Φ^-1)^-1", "Φ".into()),
            RuleId::R6d => ("(Φ ∘ Ψ)^-1", "Ψ^-1 ∘ Φ^-1".into()),
            RuleId::R6e => ("Id^-1", "Id".into()),
        };
        RuleInfo {
            id,
            lhs: lhs.into(),
            rhs,
            oriented: id.is_oriented(),
            available: id != RuleId::R5 || self.r5_available(),
            location: self.location(id),
            quote: self.quote(id),
        }
    }

    pub fn infos(&self) -> Vec<RuleInfo> {
        RuleId::ALL.iter().map(|&id| self.info(id)).collect()
    }

    fn is_equivalence(&self, e: &Expr) -> bool {
        matches!(e.info(&self.ctx), Ok(t) if t.kind == Kind::Equivalence)
    }

    /// Applications of `id` left-to-right at the root of `e`.
    pub fn forward_at(&self, id: RuleId, e: &Expr) -> Rewrites {
        let g = self.ctx.g();
        match (id, e) {
            (RuleId::R1, Expr::PTwist(inner)) => match inner.as_ref() {
                Expr::Compose(fs) if self.is_equivalence(&fs[0]) => {
                    let phi = fs[0].clone();
                    let rest = Expr::compose(fs[1..].to_vec());
                    vec![Expr::compose(vec![phi.clone(), Expr::ptwist(rest), Expr::inverse(phi)])]
                }
                _ => vec![],
            },
            (RuleId::R2, Expr::PTwist(inner)) => match inner.as_ref() {
                Expr::Compose(fs) if self.is_equivalence(&fs[fs.len() - 1]) => {
                    vec![Expr::ptwist(Expr::compose(fs[..fs.len() - 1].to_vec()))]
                }
                _ => vec![],
            },
            (RuleId::R3, Expr::PTwist(inner)) => match inner.as_ref() {
                Expr::Atom(Atom::AJcomp { d }) => {
                    let (a, b) = self.r3_indices();
                    vec![Expr::compose(vec![
                        Expr::inverse(Expr::atom(Atom::KNflop { k: a, d: *d })),
                        Expr::atom(Atom::KNflop { k: b, d: *d }),
                    ])]
                }
                _ => vec![],
            },
            (RuleId::R4, Expr::Atom(Atom::F { d })) => {
                vec![Expr::compose(vec![Expr::atom(Atom::FM { m: -1, n: *d }), Expr::atom(Atom::AJcomp { d: *d })])]
            }
            (RuleId::R5, Expr::Compose(fs)) if self.r5_available() => splice(fs, 2, |w| {
                (w[0] == Expr::atom(Atom::FPrime) && w[1] == Expr::atom(Atom::T { k: 1 })).then(|| {
                    Expr::compose(vec![Expr::atom(Atom::KNhilb { k: 2 }), Expr::atom(Atom::F { d: -g })])
                })
            }),
            (RuleId::R6a, Expr::Compose(fs)) => splice(fs, 2, |w| {
                let info = |x: &Expr| x.info(&self.ctx).ok();
                match (&w[0], &w[1]) {
                    (x, Expr::Inverse(y)) if x == y.as_ref() => info(x).map(|t| Expr::Id(t.target)),
                    (Expr::Inverse(x), y) if x.as_ref() == y => info(y).map(|t| Expr::Id(t.source)),
                    _ => None,
                }
            }),
            (RuleId::R6b, Expr::Compose(fs)) => (0..fs.len())
                .filter(|&i| matches!(fs[i], Expr::Id(_)))
                .map(|i| {
                    let mut rest = fs.clone();
                    rest.remove(i);
                    Expr::compose(rest)
                })
                .collect(),
            (RuleId::R6c, Expr::Inverse(inner)) => match inner.as_ref() {
                Expr::Inverse(x) => vec![x.as_ref().clone()],
                _ => vec![],
            },
            (RuleId::R6d, Expr::Inverse(inner)) => match inner.as_ref() {
                Expr::Compose(fs) => vec![Expr::compose(fs.iter().rev().cloned().map(Expr::inverse).collect())],
                _ => vec![],
            },
            (RuleId::R6e, Expr::Inverse(inner)) => match inner.as_ref() {
                Expr::Id(c) => vec![Expr::Id(*c)],
                _ => vec![],
            },
            _ => vec![],
        }
    }

    /// Right-to-left applications of `id` at the root of `e`, restricted to
    /// those whose forward application reproduces `e`. R2 draws the dropped
    /// equivalence from `pool`. R6a, R6b, R6c and R6e have no backward form.
    pub fn backward_at(&self, id: RuleId, e: &Expr, pool: &[Expr]) -> Rewrites {
        let g = self.ctx.g();
        match (id, e) {
            (RuleId::R1, Expr::Compose(fs)) => splice(fs, 3, |w| match (&w[1], &w[2]) {
                (Expr::PTwist(inner), Expr::Inverse(phi)) if phi.as_ref() == &w[0] && self.is_equivalence(&w[0]) => {
                    Some(Expr::ptwist(Expr::compose(vec![w[0].clone(), inner.as_ref().clone()])))
                }
                _ => None,
            }),
            (RuleId::R2, Expr::PTwist(inner)) => {
                let Ok(t) = inner.info(&self.ctx) else { return vec![] };
                pool.iter()
                    .filter(|psi| !matches!(psi, Expr::Compose(_)))
                    .filter(|psi| matches!(psi.info(&self.ctx), Ok(p) if p.kind == Kind::Equivalence && p.target == t.source))
                    .map(|psi| Expr::ptwist(Expr::compose(vec![inner.as_ref().clone(), psi.clone()])))
                    .collect()
            }
            (RuleId::R3, Expr::Compose(fs)) => {
                let (a, b) = self.r3_indices();
                splice(fs, 2, |w| match (&w[0], &w[1]) {
                    (Expr::Inverse(x), Expr::Atom(Atom::KNflop { k: kb, d: db })) => match x.as_ref() {
                        Expr::Atom(Atom::KNflop { k: ka, d: da }) if *ka == a && *kb == b && da == db => {
                            Some(Expr::ptwist(Expr::atom(Atom::AJcomp { d: *da })))
                        }
                        _ => None,
                    },
                    _ => None,
                })
            }
            (RuleId::R4, Expr::Compose(fs)) => splice(fs, 2, |w| match (&w[0], &w[1]) {
                (Expr::Atom(Atom::FM { m: -1, n }), Expr::Atom(Atom::AJcomp { d })) if n == d => {
                    Some(Expr::atom(Atom::F { d: *d }))
                }
                _ => None,
            }),
            (RuleId::R5, Expr::Compose(fs)) if self.r5_available() => splice(fs, 2, |w| {
                (w[0] == Expr::atom(Atom::KNhilb { k: 2 }) && w[1] == Expr::atom(Atom::F { d: -g }))
                    .then(|| Expr::compose(vec![Expr::atom(Atom::FPrime), Expr::atom(Atom::T { k: 1 })]))
            }),
            (RuleId::R6d, Expr::Compose(fs)) => {
                let mut out = Vec::new();
                for len in 2..=fs.len() {
                    out.extend(splice(fs, len, |w| {
                        let inner: Option<Vec<Expr>> = w
                            .iter()
                            .rev()
                            .map(|x| match x {
                                Expr::Inverse(y) if !matches!(y.as_ref(), Expr::Compose(_)) => Some(y.as_ref().clone()),
                                _ => None,
                            })
                            .collect();
                        inner.map(|v| Expr::inverse(Expr::compose(v)))
                    }));
                }
                out
            }
            _ => vec![],
        }
    }

    /// All one-step forward rewrites of `e` by `id`, at every position.
    pub fn forward(&self, id: RuleId, e: &Expr) -> Rewrites {
        everywhere(e, &|x| self.forward_at(id, x))
    }

    /// All one-step backward rewrites of `e` by `id`, at every position.
    pub fn backward(&self, id: RuleId, e: &Expr, pool: &[Expr]) -> Rewrites {
        everywhere(e, &|x| self.backward_at(id, x, pool))
    }
}

/// Replaces each length-`len` window of `fs` for which `f` yields a value.
fn splice(fs: &[Expr], len: usize, f: impl Fn(&[Expr]) -> Option<Expr>) -> Rewrites {
    if len > fs.len() {
        return vec![];
    }
    (0..=fs.len() - len)
        .filter_map(|i| {
            f(&fs[i..i + len]).map(|rep| {
                let mut v = fs[..i].to_vec();
                v.push(rep);
                v.extend_from_slice(&fs[i + len..]);
                Expr::compose(v)
            })
        })
        .collect()
}

/// Applies `f` at the root and, recursively, at every subterm.
pub fn everywhere(e: &Expr, f: &dyn Fn(&Expr) -> Rewrites) -> Rewrites {
    let mut out = f(e);
    for (i, c) in e.children().iter().enumerate() {
        for r in everywhere(c, f) {
            out.push(e.with_child(i, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autoeq::{parse, Category};

    fn rules(g: i64) -> RuleSet {
        RuleSet::new(K3Context::new(g).unwrap(), R3Reading::A)
    }

    fn p(r: &RuleSet, s: &str) -> Expr {
        parse(r.ctx(), s).unwrap()
    }

    #[test]
    fn r5_example() {
        let r = rules(3);
        assert_eq!(r.forward(RuleId::R5, &p(&r, "F' ∘ T(1)")), vec![p(&r, "KNhilb(2) ∘ F")]);
        assert_eq!(r.backward(RuleId::R5, &p(&r, "KNhilb(2) ∘ F"), &[]), vec![p(&r, "F' ∘ T(1)")]);
        assert!(!rules(6).r5_available());
        assert!(!rules(6).info(RuleId::R5).available);
    }

    #[test]
    fn r6_cancellation() {
        let r = rules(2);
        let out = r.forward(RuleId::R6a, &p(&r, "KNhilb(2) ∘ KNhilb(2)^-1"));
        assert_eq!(out, vec![Expr::Id(Category::DbHilb)]);
        let out = r.forward(RuleId::R6a, &p(&r, "KNhilb(2)^-1 ∘ KNhilb(2)"));
        assert_eq!(out, vec![Expr::Id(Category::picbar(r.ctx(), -2, 0))]);
    }

    #[test]
    fn r2_example() {
        let r = rules(4);
        assert_eq!(r.forward(RuleId::R2, &p(&r, "P(F' ∘ T(1))")), vec![p(&r, "P(F')")]);
        let pool = [p(&r, "T(1)"), p(&r, "KNhilb(2)")];
        assert_eq!(r.backward(RuleId::R2, &p(&r, "P(F')"), &pool), vec![p(&r, "P(F' ∘ T(1))")]);
    }

    #[test]
    fn r1_both_directions() {
        let r = rules(5);
        let lhs = p(&r, "P(KNhilb(2) ∘ F)");
        let rhs = p(&r, "KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1");
        assert_eq!(r.forward(RuleId::R1, &lhs), vec![rhs.clone()]);
        assert_eq!(r.backward(RuleId::R1, &rhs, &[]), vec![lhs]);
    }

    #[test]
    fn r3_readings() {
        let c = K3Context::new(4).unwrap();
        let a = RuleSet::new(c, R3Reading::A);
        let b = RuleSet::new(c, R3Reading::B);
        let e = p(&a, "P(AJcomp)");
        assert_eq!(a.forward(RuleId::R3, &e), vec![p(&a, "KNflop(g-1)^-1 ∘ KNflop(g)")]);
        assert_eq!(b.forward(RuleId::R3, &e), vec![p(&b, "KNflop(1-g)^-1 ∘ KNflop(g)")]);
        assert!(a.backward(RuleId::R3, &p(&a, "KNflop(1-g)^-1 ∘ KNflop(g)"), &[]).is_empty());
    }

    #[test]
    fn r4_inside_context() {
        let r = rules(3);
        let e = p(&r, "KNhilb(2) ∘ F");
        assert_eq!(r.forward(RuleId::R4, &e), vec![p(&r, "KNhilb(2) ∘ FM ∘ AJcomp")]);
        assert_eq!(r.backward(RuleId::R4, &p(&r, "KNhilb(2) ∘ FM ∘ AJcomp"), &[]), vec![e]);
    }

    #[test]
    fn r6d_backward_inverts_forward() {
        let r = rules(3);
        let e = p(&r, "(T(1) ∘ T(2) ∘ T(3))^-1");
        let fwd = r.forward(RuleId::R6d, &e);
        assert_eq!(fwd, vec![p(&r, "T(3)^-1 ∘ T(2)^-1 ∘ T(1)^-1")]);
        let back = r.backward(RuleId::R6d, &fwd[0], &[]);
        assert!(back.contains(&e));
        for b in back {
            assert!(r.forward(RuleId::R6d, &b).contains(&fwd[0]));
        }
    }

    #[test]
    fn every_rule_preserves_types() {
        let r = rules(3);
        let samples = [
            "P(KNhilb(2)^-1 ∘ F' ∘ T(1)) ∘ KNhilb(2)^-1",
            "(KNhilb(2) ∘ Id ∘ KNhilb(2)^-1)^-1",
            "P(FM ∘ AJcomp) ∘ FM ∘ AJcomp ∘ (T(1)^-1)^-1 ∘ Id(DbS)^-1",
        ];
        let pool = [p(&r, "T(1)"), p(&r, "T(2)")];
        for s in samples {
            let e = p(&r, s);
            let t = e.info(r.ctx()).unwrap();
            for id in RuleId::ALL {
                for x in r.forward(id, &e).into_iter().chain(r.backward(id, &e, &pool)) {
                    let tx = x.info(r.ctx()).unwrap();
                    assert_eq!((tx.source, tx.target), (t.source, t.target), "{id} on {s}");
                }
            }
        }
    }

    #[test]
    fn rule_ids_parse() {
        for id in RuleId::ALL {
            assert_eq!(id.as_str().parse::<RuleId>().unwrap(), id);
        }
        assert!("R7".parse::<RuleId>().is_err());
    }
}
