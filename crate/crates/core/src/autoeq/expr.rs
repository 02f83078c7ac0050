use std::fmt;

use serde::Serialize;

use super::Category;
use crate::lattice::K3Context;

/// Largest `|k|` accepted for an integer atom parameter.
pub const MAX_PARAM: i64 = 1_000_000_000;

/// Functor atoms. Integer parameters are stored already evaluated at the
/// genus of the ambient context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `F(d): DbS → DbPicbar(d, 1)`, induced by the universal sheaf; `F = F(−g)`.
    F { d: i64 },
    /// `F': DbS → DbHilb`, induced by the universal ideal sheaf.
    FPrime,
    /// `AJ_* ∘ ϖ*(− ⊗ O_S(l))`, kept opaque: `DbS → DbPicbar(−1, d)`.
    AJcomp { d: i64 },
    /// `FM(m,n): DbPicbar(m, n) → DbPicbar(n, −m)`; `FM = FM(−1, −g)`.
    FM { m: i64, n: i64 },
    /// Flop equivalence `KN_k: DbPicbar(−1, d) → DbXflop(d)`.
    KNflop { k: i64, d: i64 },
    /// Flop equivalence `KN_k: DbPicbar(−g) → DbHilb`.
    KNhilb { k: i64 },
    /// Spherical twist `T_{O_S(k)}` of `DbS`.
    T { k: i64 },
    /// A generic named equivalence.
    Phi { n: i64, source: Category, target: Category },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Equivalence,
    PFunctor,
    Functor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TypeInfo {
    pub source: Category,
    pub target: Category,
    pub kind: Kind,
}

impl Atom {
    pub fn kind(&self) -> Kind {
        match self {
            Atom::F { .. } | Atom::FPrime | Atom::AJcomp { .. } => Kind::PFunctor,
            _ => Kind::Equivalence,
        }
    }

    pub fn info(&self, ctx: &K3Context) -> TypeInfo {
        let g = ctx.g();
        let (source, target) = match *self {
            Atom::F { d } => (Category::DbS, Category::picbar(ctx, d, 1)),
            Atom::FPrime => (Category::DbS, Category::DbHilb),
            Atom::AJcomp { d } => (Category::DbS, Category::picbar(ctx, -1, d)),
            Atom::FM { m, n } => (Category::picbar(ctx, m, n), Category::picbar(ctx, n, -m)),
            Atom::KNflop { d, .. } => (Category::picbar(ctx, -1, d), Category::DbXflop { d }),
            Atom::KNhilb { .. } => (Category::picbar(ctx, -g, 0), Category::DbHilb),
            Atom::T { .. } => (Category::DbS, Category::DbS),
            Atom::Phi { source, target, .. } => (source, target),
        };
        TypeInfo { source, target, kind: self.kind() }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, g: i64) -> fmt::Result {
        match self {
            Atom::F { d } if *d == -g => f.write_str("F"),
            Atom::F { d } => write!(f, "F({d})"),
            Atom::FPrime => f.write_str("F'"),
            Atom::AJcomp { d } if *d == -g => f.write_str("AJcomp"),
            Atom::AJcomp { d } => write!(f, "AJcomp({d})"),
            Atom::FM { m: -1, n } if *n == -g => f.write_str("FM"),
            Atom::FM { m, n } => write!(f, "FM({m},{n})"),
            Atom::KNflop { k, d } if *d == -g => write!(f, "KNflop({k})"),
            Atom::KNflop { k, d } => write!(f, "KNflop({k},{d})"),
            Atom::KNhilb { k } => write!(f, "KNhilb({k})"),
            Atom::T { k } => write!(f, "T({k})"),
            Atom::Phi { n, source, target } => write!(f, "Phi({n}: {source} -> {target})"),
        }
    }
}

/// Functor expressions. `Compose` lists factors outermost first
/// (`[a, b, c]` is `a ∘ b ∘ c`), always has at least two factors and never
/// directly contains another `Compose`; build it with [`Expr::compose`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Atom(Atom),
    Id(Category),
    Compose(Vec<Expr>),
    Inverse(Box<Expr>),
    Shift(Box<Expr>, i64),
    PTwist(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    /// Factors `index` and `index + 1` do not compose.
    Mismatch { index: usize, left_source: Category, right_target: Category },
    NotInvertible,
    NotPFunctor(Kind),
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::Mismatch { left_source, right_target, .. } => {
                write!(f, "endpoint mismatch: left factor starts at {left_source}, right factor ends at {right_target}")
            }
            TypeError::NotInvertible => f.write_str("only equivalences can be inverted"),
            TypeError::NotPFunctor(k) => write!(f, "P(...) needs a P-functor, got {}", kind_name(*k)),
        }
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Equivalence => "an equivalence",
        Kind::PFunctor => "a P-functor",
        Kind::Functor => "a functor that is neither an equivalence nor a P-functor",
    }
}

/// Type of `infos[0] ∘ infos[1] ∘ …`.
pub fn compose_info(infos: &[TypeInfo]) -> Result<TypeInfo, TypeError> {
    for (i, w) in infos.windows(2).enumerate() {
        if w[0].source != w[1].target {
            return Err(TypeError::Mismatch { index: i, left_source: w[0].source, right_target: w[1].target });
        }
    }
    let non_eq: Vec<Kind> = infos.iter().map(|t| t.kind).filter(|k| *k != Kind::Equivalence).collect();
    let kind = match non_eq.as_slice() {
        [] => Kind::Equivalence,
        [Kind::PFunctor] => Kind::PFunctor,
        _ => Kind::Functor,
    };
    Ok(TypeInfo { source: infos[infos.len() - 1].source, target: infos[0].target, kind })
}

pub fn inverse_info(t: TypeInfo) -> Result<TypeInfo, TypeError> {
    if t.kind != Kind::Equivalence {
        return Err(TypeError::NotInvertible);
    }
    Ok(TypeInfo { source: t.target, target: t.source, kind: Kind::Equivalence })
}

pub fn ptwist_info(t: TypeInfo) -> Result<TypeInfo, TypeError> {
    if t.kind != Kind::PFunctor {
        return Err(TypeError::NotPFunctor(t.kind));
    }
    Ok(TypeInfo { source: t.target, target: t.target, kind: Kind::Equivalence })
}

impl Expr {
    pub fn atom(a: Atom) -> Self {
        Expr::Atom(a)
    }

    /// Flattens nested compositions; a single factor is returned unchanged.
    pub fn compose(factors: Vec<Expr>) -> Self {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                Expr::Compose(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        assert!(!flat.is_empty(), "empty composition");
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Expr::Compose(flat)
        }
    }

    pub fn inverse(e: Expr) -> Self {
        Expr::Inverse(Box::new(e))
    }

    pub fn ptwist(e: Expr) -> Self {
        Expr::PTwist(Box::new(e))
    }

    pub fn shift(e: Expr, n: i64) -> Self {
        Expr::Shift(Box::new(e), n)
    }

    /// Factors of a composition, or the expression itself.
    pub fn factors(&self) -> &[Expr] {
        match self {
            Expr::Compose(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::Atom(_) | Expr::Id(_) => &[],
            Expr::Compose(fs) => fs,
            Expr::Inverse(e) | Expr::Shift(e, _) | Expr::PTwist(e) => std::slice::from_ref(e.as_ref()),
        }
    }

    /// Same node with its `i`-th child replaced, re-flattening compositions.
    pub fn with_child(&self, i: usize, child: Expr) -> Expr {
        match self {
            Expr::Compose(fs) => {
                let mut fs = fs.clone();
                fs[i] = child;
                Expr::compose(fs)
            }
            Expr::Inverse(_) => Expr::inverse(child),
            Expr::Shift(_, n) => Expr::shift(child, *n),
            Expr::PTwist(_) => Expr::ptwist(child),
            Expr::Atom(_) | Expr::Id(_) => unreachable!("leaves have no children"),
        }
    }

    pub fn info(&self, ctx: &K3Context) -> Result<TypeInfo, TypeError> {
        match self {
            Expr::Atom(a) => Ok(a.info(ctx)),
            Expr::Id(c) => Ok(TypeInfo { source: *c, target: *c, kind: Kind::Equivalence }),
            Expr::Compose(fs) => {
                let infos = fs.iter().map(|f| f.info(ctx)).collect::<Result<Vec<_>, _>>()?;
                compose_info(&infos)
            }
            Expr::Inverse(e) => inverse_info(e.info(ctx)?),
            Expr::Shift(e, _) => e.info(ctx),
            Expr::PTwist(e) => ptwist_info(e.info(ctx)?),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Expr::depth).max().unwrap_or(0)
    }

    /// Renders with default parameters elided (e.g. `F` for `F(−g)`).
    pub fn display(&self, ctx: &K3Context) -> impl fmt::Display + '_ {
        Printer { e: self, g: ctx.g() }
    }

    pub fn render(&self, ctx: &K3Context) -> String {
        self.display(ctx).to_string()
    }
}

struct Printer<'a> {
    e: &'a Expr,
    g: i64,
}

impl Printer<'_> {
    fn write(e: &Expr, f: &mut fmt::Formatter<'_>, g: i64) -> fmt::Result {
        match e {
            Expr::Atom(a) => a.write(f, g),
            Expr::Id(c) => write!(f, "Id({c})"),
            Expr::Compose(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∘ ")?;
                    }
                    Self::write(x, f, g)?;
                }
                Ok(())
            }
            Expr::Inverse(x) => {
                Self::write_postfix_operand(x, f, g)?;
                f.write_str("^-1")
            }
            Expr::Shift(x, n) => {
                Self::write_postfix_operand(x, f, g)?;
                write!(f, "[{n}]")
            }
            Expr::PTwist(x) => {
                f.write_str("P(")?;
                Self::write(x, f, g)?;
                f.write_str(")")
            }
        }
    }

    fn write_postfix_operand(x: &Expr, f: &mut fmt::Formatter<'_>, g: i64) -> fmt::Result {
        if matches!(x, Expr::Compose(_)) {
            f.write_str("(")?;
            Self::write(x, f, g)?;
            f.write_str(")")
        } else {
            Self::write(x, f, g)
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Self::write(self.e, f, self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: i64) -> K3Context {
        K3Context::new(g).unwrap()
    }

    fn f(g: i64) -> Expr {
        Expr::atom(Atom::F { d: -g })
    }

    #[test]
    fn compose_flattens() {
        let a = Expr::atom(Atom::T { k: 1 });
        let b = Expr::atom(Atom::T { k: 2 });
        let nested = Expr::compose(vec![a.clone(), Expr::compose(vec![b.clone(), a.clone()])]);
        assert_eq!(nested, Expr::Compose(vec![a.clone(), b.clone(), a.clone()]));
        assert_eq!(Expr::compose(vec![a.clone()]), a);
    }

    #[test]
    fn atom_types() {
        let c = ctx(5);
        let fi = f(5).info(&c).unwrap();
        assert_eq!((fi.source, fi.target, fi.kind), (Category::DbS, Category::picbar(&c, -5, 0), Kind::PFunctor));
        let kn = Expr::atom(Atom::KNhilb { k: 2 }).info(&c).unwrap();
        assert_eq!(kn.source, fi.target);
        let fm = Expr::atom(Atom::FM { m: -1, n: -5 }).info(&c).unwrap();
        let aj = Expr::atom(Atom::AJcomp { d: -5 }).info(&c).unwrap();
        assert_eq!(fm.source, aj.target);
        assert_eq!(fm.target, fi.target);
    }

    #[test]
    fn chain_twists_vanish_for_all_genera() {
        for g in 2..=40 {
            let c = ctx(g);
            let fm = Atom::FM { m: -1, n: -g }.info(&c);
            assert_eq!(fm.source, Category::DbPicbar { d: -1, twist: 0 }, "g = {g}");
            assert_eq!(fm.target, Category::DbPicbar { d: -g, twist: 0 }, "g = {g}");
        }
    }

    #[test]
    fn kinds_of_composites() {
        let c = ctx(3);
        let e = Expr::compose(vec![Expr::atom(Atom::KNhilb { k: 2 }), f(3)]);
        assert_eq!(e.info(&c).unwrap().kind, Kind::PFunctor);
        let p = Expr::ptwist(e.clone());
        assert_eq!(p.info(&c).unwrap().kind, Kind::Equivalence);
        assert_eq!(Expr::inverse(f(3)).info(&c), Err(TypeError::NotInvertible));
        assert!(matches!(Expr::ptwist(Expr::atom(Atom::T { k: 1 })).info(&c), Err(TypeError::NotPFunctor(_))));
        let bad = Expr::compose(vec![f(3), Expr::atom(Atom::KNhilb { k: 2 })]);
        assert!(matches!(bad.info(&c), Err(TypeError::Mismatch { index: 0, .. })));
    }

    #[test]
    fn printing() {
        let c = ctx(5);
        let e = Expr::compose(vec![
            Expr::atom(Atom::KNhilb { k: 2 }),
            Expr::ptwist(f(5)),
            Expr::inverse(Expr::atom(Atom::KNhilb { k: 2 })),
        ]);
        assert_eq!(e.render(&c), "KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1");
        let inv = Expr::inverse(Expr::compose(vec![Expr::atom(Atom::T { k: 1 }), Expr::atom(Atom::T { k: 2 })]));
        assert_eq!(inv.render(&c), "(T(1) ∘ T(2))^-1");
        assert_eq!(Expr::atom(Atom::KNflop { k: 4, d: -5 }).render(&c), "KNflop(4)");
        assert_eq!(Expr::atom(Atom::FM { m: 0, n: 2 }).render(&c), "FM(0,2)");
        assert_eq!(Expr::shift(f(5), -2).render(&c), "F[-2]");
    }
}
