//! Random well-typed expressions, for property tests and benchmarks.
//!
//! Leaves come from a fixed menu of atoms at the ambient genus; when no atom
//! has the required endpoint a generic `Phi` equivalence is used instead, so
//! generation never fails.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Atom, Category, Expr, Kind};
use crate::lattice::K3Context;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Source,
    Target,
}

/// Generator of random well-typed expressions at a fixed genus.
#[derive(Debug, Clone)]
pub struct ExprGen {
    ctx: K3Context,
    atoms: Vec<Atom>,
    categories: Vec<Category>,
}

impl ExprGen {
    pub fn new(ctx: K3Context) -> Self {
        let g = ctx.g();
        let ds = [-g, -1, 0, 1, g - 1];
        let ks = [1, 2, g - 1, g];
        let mut atoms = vec![Atom::FPrime];
        for d in ds {
            atoms.push(Atom::F { d });
            atoms.push(Atom::AJcomp { d });
            atoms.push(Atom::FM { m: -1, n: d });
            atoms.push(Atom::FM { m: d, n: -g });
        }
        for k in ks {
            atoms.push(Atom::T { k });
            atoms.push(Atom::KNflop { k, d: -g });
            if g <= super::parse::MAX_FLOP_GENUS {
                atoms.push(Atom::KNhilb { k });
            }
        }
        atoms.sort();
        atoms.dedup();
        let mut categories: Vec<Category> = atoms
            .iter()
            .flat_map(|a| {
                let t = a.info(&ctx);
                [t.source, t.target]
            })
            .chain([Category::DbB])
            .collect();
        categories.sort();
        categories.dedup();
        Self { ctx, atoms, categories }
    }

    pub fn ctx(&self) -> &K3Context {
        &self.ctx
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    fn phi<R: Rng + ?Sized>(&self, rng: &mut R, end: End, c: Category) -> Expr {
        let other = *self.categories.choose(rng).unwrap();
        let n = rng.random_range(0..3);
        let (source, target) = match end {
            End::Target => (other, c),
            End::Source => (c, other),
        };
        Expr::atom(Atom::Phi { n, source, target })
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, end: End, c: Category, equiv: bool) -> Expr {
        if rng.random_ratio(1, 12) {
            return Expr::Id(c);
        }
        let fits: Vec<&Atom> = self
            .atoms
            .iter()
            .filter(|a| {
                let t = a.info(&self.ctx);
                let at = if end == End::Target { t.target } else { t.source };
                at == c && (!equiv || t.kind == Kind::Equivalence)
            })
            .collect();
        match fits.choose(rng) {
            Some(a) if !rng.random_ratio(1, 6) => Expr::atom((*a).clone()),
            _ => self.phi(rng, end, c),
        }
    }

    fn end_of(&self, e: &Expr, end: End) -> Category {
        let t = e.info(&self.ctx).expect("generated expressions are well typed");
        if end == End::Target {
            t.source
        } else {
            t.target
        }
    }

    /// A P-twist endofunctor of `c`: `P(Φ ∘ A ∘ Ψ)` with `A` a P-functor atom
    /// and `Φ`, `Ψ` optional equivalences, conjugated into `c` if needed.
    fn ptwist<R: Rng + ?Sized>(&self, rng: &mut R, c: Category, depth: usize) -> Expr {
        let pf = [Atom::F { d: -self.ctx.g() }, Atom::FPrime, Atom::AJcomp { d: -self.ctx.g() }];
        let a = Expr::atom(pf.choose(rng).unwrap().clone());
        let at = a.info(&self.ctx).unwrap();
        let mut fs = Vec::new();
        if rng.random_bool(0.5) {
            let phi = self.build(rng, End::Source, at.target, depth, true);
            fs.push(phi);
        }
        fs.push(a);
        if rng.random_bool(0.5) {
            fs.push(self.build(rng, End::Target, Category::DbS, depth, true));
        }
        let inner = Expr::compose(fs);
        let endo = inner.info(&self.ctx).unwrap().target;
        let twist = Expr::ptwist(inner);
        if endo == c {
            return twist;
        }
        let conj = Expr::atom(Atom::Phi { n: 0, source: endo, target: c });
        Expr::compose(vec![conj.clone(), twist, Expr::inverse(conj)])
    }

    fn build<R: Rng + ?Sized>(&self, rng: &mut R, end: End, c: Category, depth: usize, equiv: bool) -> Expr {
        if depth == 0 {
            return self.leaf(rng, end, c, equiv);
        }
        let d = depth - 1;
        match rng.random_range(0..10) {
            0..=2 => self.leaf(rng, end, c, equiv),
            3..=5 => {
                let n = rng.random_range(2..=3);
                let mut fs = Vec::with_capacity(n);
                let mut cur = c;
                for _ in 0..n {
                    let f = self.build(rng, end, cur, d, equiv);
                    cur = self.end_of(&f, end);
                    fs.push(f);
                }
                if end == End::Source {
                    fs.reverse();
                }
                Expr::compose(fs)
            }
            6 | 7 => {
                let flipped = if end == End::Target { End::Source } else { End::Target };
                Expr::inverse(self.build(rng, flipped, c, d, true))
            }
            8 => Expr::shift(self.build(rng, end, c, d, equiv), rng.random_range(-2..=2)),
            _ => self.ptwist(rng, c, d.min(2)),
        }
    }

    /// A random well-typed expression of depth at most about `depth + 4`.
    pub fn expr<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Expr {
        let c = *self.categories.choose(rng).unwrap();
        self.build(rng, End::Target, c, depth, false)
    }

    /// A random equivalence with target `c`.
    pub fn equivalence_into<R: Rng + ?Sized>(&self, rng: &mut R, c: Category, depth: usize) -> Expr {
        self.build(rng, End::Target, c, depth, true)
    }

    /// A random equivalence atom (never `Id`) with source `c`.
    pub fn equivalence_atom_from<R: Rng + ?Sized>(&self, rng: &mut R, c: Category) -> Expr {
        let fits: Vec<&Atom> = self
            .atoms
            .iter()
            .filter(|a| {
                let t = a.info(&self.ctx);
                t.source == c && t.kind == Kind::Equivalence
            })
            .collect();
        match fits.choose(rng) {
            Some(a) => Expr::atom((*a).clone()),
            None => {
                let target = *self.categories.choose(rng).unwrap();
                Expr::atom(Atom::Phi { n: rng.random_range(0..3), source: c, target })
            }
        }
    }

    /// A random P-functor atom expression: `F(d)`, `F'` or `AJcomp(d)`.
    pub fn pfunctor_atom<R: Rng + ?Sized>(&self, rng: &mut R) -> Expr {
        let pf: Vec<&Atom> = self.atoms.iter().filter(|a| a.kind() == Kind::PFunctor).collect();
        Expr::atom((*pf.choose(rng).unwrap()).clone())
    }
}
