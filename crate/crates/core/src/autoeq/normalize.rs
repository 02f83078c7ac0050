use serde::Serialize;

use super::{Expr, RuleId, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalStep {
    pub rule_id: RuleId,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub expr: Expr,
    pub steps: Vec<(RuleId, Expr)>,
    /// False when the step budget ran out before a fixed point was reached.
    pub normalized: bool,
}

/// One leftmost-innermost step of the oriented rules, if any applies.
pub fn normalize_step(rules: &RuleSet, e: &Expr) -> Option<(RuleId, Expr)> {
    for (i, c) in e.children().iter().enumerate() {
        if let Some((id, r)) = normalize_step(rules, c) {
            return Some((id, e.with_child(i, r)));
        }
    }
    RuleId::ORIENTED
        .iter()
        .find_map(|&id| rules.forward_at(id, e).into_iter().next().map(|r| (id, r)))
}

/// Rewrites with the oriented rules until a fixed point or `max_steps`.
pub fn normalize(rules: &RuleSet, e: &Expr, max_steps: usize) -> Normalized {
    let mut cur = e.clone();
    let mut steps = Vec::new();
    while steps.len() < max_steps {
        match normalize_step(rules, &cur) {
            Some((id, next)) => {
                steps.push((id, next.clone()));
                cur = next;
            }
            None => return Normalized { expr: cur, steps, normalized: true },
        }
    }
    let normalized = normalize_step(rules, &cur).is_none();
    Normalized { expr: cur, steps, normalized }
}

impl Normalized {
    /// Step list rendered for reports.
    pub fn rendered_steps(&self, rules: &RuleSet, start: &Expr) -> Vec<NormalStep> {
        let mut before = start.render(rules.ctx());
        self.steps
            .iter()
            .map(|(id, e)| {
                let after = e.render(rules.ctx());
                let s = NormalStep { rule_id: *id, before: before.clone(), after: after.clone() };
                before = after;
                s
            })
            .collect()
    }
}
