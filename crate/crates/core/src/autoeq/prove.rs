//! Bounded bidirectional search for rewrite proofs of functor identities.
//!
//! Every rule application is an undirected edge: a forward edge `a → b`
//! replays as `b ∈ forward(a)`, a backward edge as `a ∈ forward(b)`. The
//! search grows breadth-first layers from both goals, always expanding the
//! smaller frontier, until the layers meet or their combined depth reaches
//! the limit. `Unknown` is never a claim of inequality.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse, AutoeqError, Direction, Expr, Kind, R3Reading, RuleId, RuleSet};
use crate::lattice::K3Context;
use crate::sweep;

pub const DEFAULT_STEP_BUDGET: usize = 10_000;
pub const STEP_BUDGET_ENV: &str = "K3MODULI_STEP_BUDGET";

/// Node budget from `K3MODULI_STEP_BUDGET`, or the default when unset.
pub fn step_budget_from_env() -> Result<usize, String> {
    match std::env::var(STEP_BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{STEP_BUDGET_ENV} must be a positive integer, got `{v}`")),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub rule_id: RuleId,
    pub direction: Direction,
    pub quote: String,
    pub before: String,
    pub after: String,
}

/// Self-contained proof: replaying needs only this value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub g: i64,
    pub reading: R3Reading,
    pub lhs: String,
    pub rhs: String,
    pub steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    DepthExhausted,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofOutcome {
    Proved(ProofTrace),
    Unknown { reason: UnknownReason, nodes: usize },
}

impl ProofOutcome {
    pub fn trace(&self) -> Option<&ProofTrace> {
        match self {
            ProofOutcome::Proved(t) => Some(t),
            ProofOutcome::Unknown { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("invalid genus {0}")]
    Genus(i64),
    #[error("cannot parse `{text}`: {source}")]
    Parse { text: String, source: AutoeqError },
    #[error("step {index} does not start where the previous one ended")]
    Broken { index: usize },
    #[error("step {index} ({rule}, {direction:?}) is not a valid rule application")]
    InvalidStep { index: usize, rule: RuleId, direction: Direction },
    #[error("step {index} changes the endpoints of the expression")]
    TypeChanged { index: usize },
    #[error("step {index} quotes `{found}` instead of the rule's statement")]
    WrongQuote { index: usize, found: String },
    #[error("the trace does not end at the right-hand side")]
    WrongEnd,
}

type Edge = (Expr, RuleId, Direction);

/// Equivalence factors available to backward R2: every non-composite
/// equivalence subterm of either goal, plus `T(1)`.
pub fn equivalence_pool(rules: &RuleSet, goals: &[&Expr]) -> Vec<Expr> {
    fn collect(rules: &RuleSet, e: &Expr, out: &mut BTreeSet<Expr>) {
        if !matches!(e, Expr::Compose(_)) && matches!(e.info(rules.ctx()), Ok(t) if t.kind == Kind::Equivalence) {
            out.insert(e.clone());
        }
        for c in e.children() {
            collect(rules, c, out);
        }
    }
    let mut set = BTreeSet::new();
    for g in goals {
        collect(rules, g, &mut set);
    }
    set.insert(Expr::atom(super::Atom::T { k: 1 }));
    set.into_iter().collect()
}

/// All one-step neighbours of `e` that keep its endpoints.
pub fn neighbours(rules: &RuleSet, e: &Expr, pool: &[Expr]) -> Vec<Edge> {
    let Ok(t) = e.info(rules.ctx()) else { return vec![] };
    let mut out = Vec::new();
    for id in RuleId::ALL {
        for x in rules.forward(id, e) {
            out.push((x, id, Direction::Forward));
        }
        for x in rules.backward(id, e, pool) {
            out.push((x, id, Direction::Backward));
        }
    }
    out.retain(|(x, _, _)| {
        x != e && matches!(x.info(rules.ctx()), Ok(tx) if tx.source == t.source && tx.target == t.target)
    });
    out
}

struct Side {
    parent: HashMap<Expr, Option<Edge>>,
    frontier: Vec<Expr>,
    depth: usize,
}

impl Side {
    fn new(root: &Expr) -> Self {
        let mut parent = HashMap::new();
        parent.insert(root.clone(), None);
        Self { parent, frontier: vec![root.clone()], depth: 0 }
    }

    /// Edges from the root to `node`, in order.
    fn path_to(&self, node: &Expr) -> Vec<(Expr, Expr, RuleId, Direction)> {
        let mut out = Vec::new();
        let mut cur = node.clone();
        while let Some(Some((prev, id, dir))) = self.parent.get(&cur) {
            out.push((prev.clone(), cur.clone(), *id, *dir));
            cur = prev.clone();
        }
        out.reverse();
        out
    }
}

/// Searches for a rewrite proof of `lhs = rhs` with at most `depth` steps,
/// visiting at most `budget` distinct expressions.
pub fn prove_equal(
    rules: &RuleSet,
    lhs: &Expr,
    rhs: &Expr,
    depth: usize,
    budget: usize,
) -> Result<ProofOutcome, AutoeqError> {
    let ctx = rules.ctx();
    let (tl, tr) = (lhs.info(ctx), rhs.info(ctx));
    let (Ok(tl), Ok(tr)) = (tl, tr) else {
        return Err(AutoeqError::Type { position: 0, message: "goal is not well typed".into() });
    };
    if (tl.source, tl.target) != (tr.source, tr.target) {
        return Err(AutoeqError::EndpointMismatch {
            lhs: format!("{} -> {}", tl.source, tl.target),
            rhs: format!("{} -> {}", tr.source, tr.target),
        });
    }
    let pool = equivalence_pool(rules, &[lhs, rhs]);
    let mut sides = [Side::new(lhs), Side::new(rhs)];
    let mut nodes = 2;
    let meet = if lhs == rhs { Some(lhs.clone()) } else { None };
    let meet = match meet {
        Some(m) => Some(m),
        None => loop {
            if sides[0].depth + sides[1].depth >= depth {
                break None;
            }
            let k = if sides[1].frontier.len() < sides[0].frontier.len() { 1 } else { 0 };
            if sides[k].frontier.is_empty() {
                break None;
            }
            let frontier = std::mem::take(&mut sides[k].frontier);
            let mut next = Vec::new();
            let mut found = None;
            'expand: for node in &frontier {
                for (x, id, dir) in neighbours(rules, node, &pool) {
                    if sides[k].parent.contains_key(&x) {
                        continue;
                    }
                    sides[k].parent.insert(x.clone(), Some((node.clone(), id, dir)));
                    nodes += 1;
                    if sides[1 - k].parent.contains_key(&x) {
                        found = Some(x);
                        break 'expand;
                    }
                    if nodes >= budget {
                        return Ok(ProofOutcome::Unknown { reason: UnknownReason::BudgetExhausted, nodes });
                    }
                    next.push(x);
                }
            }
            sides[k].frontier = next;
            sides[k].depth += 1;
            if found.is_some() {
                break found;
            }
        },
    };
    let Some(m) = meet else {
        return Ok(ProofOutcome::Unknown { reason: UnknownReason::DepthExhausted, nodes });
    };
    let mut steps: Vec<(Expr, Expr, RuleId, Direction)> = sides[0].path_to(&m);
    for (prev, cur, id, dir) in sides[1].path_to(&m).into_iter().rev() {
        steps.push((cur, prev, id, dir.flip()));
    }
    let render = |e: &Expr| e.render(ctx);
    Ok(ProofOutcome::Proved(ProofTrace {
        g: ctx.g(),
        reading: rules.reading(),
        lhs: render(lhs),
        rhs: render(rhs),
        steps: steps
            .into_iter()
            .map(|(before, after, id, dir)| ProofStep {
                rule_id: id,
                direction: dir,
                quote: rules.quote(id).to_string(),
                before: render(&before),
                after: render(&after),
            })
            .collect(),
    }))
}

/// Independent goals proved concurrently (when enabled), in input order.
pub fn prove_many(
    rules: &RuleSet,
    goals: &[(Expr, Expr)],
    depth: usize,
    budget: usize,
) -> Vec<Result<ProofOutcome, AutoeqError>> {
    sweep::map(goals, |(l, r)| prove_equal(rules, l, r, depth, budget))
}

impl ProofTrace {
    /// Re-parses every expression and checks each step against the rules.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let ctx = K3Context::new(self.g).map_err(|_| ReplayError::Genus(self.g))?;
        let rules = RuleSet::new(ctx, self.reading);
        let p = |text: &str| parse(&ctx, text).map_err(|source| ReplayError::Parse { text: text.into(), source });
        let mut cur = p(&self.lhs)?;
        let ends = cur.info(&ctx).map(|t| (t.source, t.target)).ok();
        for (index, step) in self.steps.iter().enumerate() {
            let before = p(&step.before)?;
            let after = p(&step.after)?;
            if before != cur {
                return Err(ReplayError::Broken { index });
            }
            if step.quote != rules.quote(step.rule_id) {
                return Err(ReplayError::WrongQuote { index, found: step.quote.clone() });
            }
            let ok = match step.direction {
                Direction::Forward => rules.forward(step.rule_id, &before).contains(&after),
                Direction::Backward => rules.forward(step.rule_id, &after).contains(&before),
            };
            if !ok {
                return Err(ReplayError::InvalidStep { index, rule: step.rule_id, direction: step.direction });
            }
            if after.info(&ctx).map(|t| (t.source, t.target)).ok() != ends {
                return Err(ReplayError::TypeChanged { index });
            }
            cur = after;
        }
        if cur != p(&self.rhs)? {
            return Err(ReplayError::WrongEnd);
        }
        Ok(())
    }
}
