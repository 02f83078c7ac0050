//! Recursive path ordering used as the termination measure of the
//! normalizer.
//!
//! Precedence: `P > ^-1 > [n] > ∘ > atoms > Id`. Composition has multiset
//! status, so flattening nested compositions never increases a term. Atoms
//! with different parameters are incomparable, as are shifts by different
//! amounts. Every oriented rule (R1, R2, R6a–e) strictly decreases a term in
//! this ordering, and the ordering is well founded, so normalization
//! terminates.

use std::cmp::Ordering;

use super::Expr;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::PTwist(_) => 5,
        Expr::Inverse(_) => 4,
        Expr::Shift(..) => 3,
        Expr::Compose(_) => 2,
        Expr::Atom(_) => 1,
        Expr::Id(_) => 0,
    }
}

/// Compares head symbols; `None` when incomparable.
fn compare_heads(s: &Expr, t: &Expr) -> Option<Ordering> {
    match (s, t) {
        (Expr::Atom(a), Expr::Atom(b)) => (a == b).then_some(Ordering::Equal),
        (Expr::Id(a), Expr::Id(b)) => (a == b).then_some(Ordering::Equal),
        (Expr::Shift(_, m), Expr::Shift(_, n)) => (m == n).then_some(Ordering::Equal),
        _ => Some(precedence(s).cmp(&precedence(t))),
    }
}

/// `s >_rpo t`.
pub fn rpo_gt(s: &Expr, t: &Expr) -> bool {
    if s.children().iter().any(|si| si == t || rpo_gt(si, t)) {
        return true;
    }
    match compare_heads(s, t) {
        Some(Ordering::Greater) => t.children().iter().all(|tj| rpo_gt(s, tj)),
        Some(Ordering::Equal) => multiset_gt(s.children(), t.children()),
        _ => false,
    }
}

/// Multiset extension of [`rpo_gt`].
fn multiset_gt(m: &[Expr], n: &[Expr]) -> bool {
    let mut m: Vec<&Expr> = m.iter().collect();
    let mut n: Vec<&Expr> = n.iter().collect();
    let mut i = 0;
    while i < m.len() {
        if let Some(j) = n.iter().position(|x| *x == m[i]) {
            n.swap_remove(j);
            m.swap_remove(i);
        } else {
            i += 1;
        }
    }
    !m.is_empty() && n.iter().all(|x| m.iter().any(|y| rpo_gt(y, x)))
}
