use std::collections::BTreeSet;

use k3moduli::autoeq::{
    normalize, parse_typed, prove_equal, step_budget_from_env, AutoeqError, Expr, ProofOutcome, ProofTrace,
    R3Reading, RuleId, RuleSet,
};
use k3moduli::lattice::K3Context;
use serde_json::{json, Value};

use super::{context, Output};
use crate::args::{AutoeqCmd, Calculus};
use crate::config::Config;
use crate::error::{expr_error, CliError, EXIT_OK, EXIT_UNKNOWN};
use crate::report::{claim, Basis, Citation, Report};

pub const DEFAULT_GENUS: i64 = 2;
pub const DEFAULT_DEPTH: usize = 6;
pub const MAX_DEPTH: usize = 12;

fn rules(calc: &Calculus, config: &Config) -> Result<RuleSet, CliError> {
    let ctx = match calc.g.or(config.g) {
        Some(g) => context(Some(g), config)?,
        None => K3Context::new(DEFAULT_GENUS)?,
    };
    let reading = match calc.reading.as_ref().or(config.reading.as_ref()) {
        Some(r) => r.parse::<R3Reading>().map_err(CliError::input)?,
        None => R3Reading::default(),
    };
    Ok(RuleSet::new(ctx, reading))
}

fn budget(flag: Option<usize>, config: &Config) -> Result<usize, CliError> {
    match flag.or(config.budget) {
        Some(0) => Err(CliError::input("--budget must be positive")),
        Some(b) => Ok(b),
        None => step_budget_from_env().map_err(CliError::input),
    }
}

fn expr(rules: &RuleSet, text: &str) -> Result<Expr, CliError> {
    parse_typed(rules.ctx(), text).map(|(e, _)| e).map_err(|e| expr_error(text, &e))
}

fn reading_name(r: R3Reading) -> &'static str {
    match r {
        R3Reading::A => "a",
        R3Reading::B => "b",
    }
}

fn typed(rules: &RuleSet, e: &Expr) -> Value {
    let t = e.info(rules.ctx()).expect("parsed expressions are well typed");
    json!({ "expr": e.render(rules.ctx()), "source": t.source, "target": t.target, "kind": t.kind })
}

fn rule_citations(rules: &RuleSet, ids: impl IntoIterator<Item = RuleId>) -> Vec<Citation> {
    ids.into_iter().map(|id| Citation::new(&format!("{id}: {}", rules.location(id)), rules.quote(id))).collect()
}

fn load_trace(path: &std::path::Path) -> Result<ProofTrace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{} is not JSON: {e}", path.display())))?;
    let trace = value.pointer("/results/trace").cloned().unwrap_or(value);
    serde_json::from_value(trace).map_err(|e| CliError::input(format!("{} is not a proof trace: {e}", path.display())))
}

pub fn run(cmd: &AutoeqCmd, config: &Config) -> Result<Output, CliError> {
    match cmd {
        AutoeqCmd::Parse { calc, expr: text } => {
            let rules = rules(calc, config)?;
            let e = expr(&rules, text)?;
            Ok(Output::ok(Report::new(
                "autoeq parse",
                json!({ "g": rules.ctx().g(), "expr": text }),
                json!({
                    "typed": typed(&rules, &e),
                    "size": claim(e.size(), Basis::Computed),
                    "depth": claim(e.depth(), Basis::Computed),
                }),
                vec![],
            )))
        }
        AutoeqCmd::Normalize { calc, expr: text, max_steps } => {
            let rules = rules(calc, config)?;
            let e = expr(&rules, text)?;
            let max = match max_steps.or(config.max_steps) {
                Some(m) => m,
                None => budget(None, config)?,
            };
            let n = normalize(&rules, &e, max);
            let used: BTreeSet<RuleId> = n.steps.iter().map(|(id, _)| *id).collect();
            let report = Report::new(
                "autoeq normalize",
                json!({ "g": rules.ctx().g(), "expr": text, "max_steps": max }),
                json!({
                    "normal_form": typed(&rules, &n.expr),
                    "normalized": n.normalized,
                    "steps": n.rendered_steps(&rules, &e),
                    "step_count": claim(n.steps.len(), Basis::Computed),
                }),
                rule_citations(&rules, used),
            );
            let code = if n.normalized { EXIT_OK } else { EXIT_UNKNOWN };
            Ok(Output::Report { report, code })
        }
        AutoeqCmd::Prove { calc, lhs, rhs, depth, budget: b } => {
            let rules = rules(calc, config)?;
            let depth = depth.or(config.depth).unwrap_or(DEFAULT_DEPTH);
            if depth > MAX_DEPTH {
                return Err(CliError::input(format!("--depth must be at most {MAX_DEPTH}")));
            }
            let b = budget(*b, config)?;
            let (l, r) = (expr(&rules, lhs)?, expr(&rules, rhs)?);
            let inputs = json!({
                "g": rules.ctx().g(),
                "reading": reading_name(rules.reading()),
                "lhs": lhs,
                "rhs": rhs,
                "depth": depth,
                "budget": b,
            });
            let outcome = prove_equal(&rules, &l, &r, depth, b).map_err(|e| match e {
                AutoeqError::EndpointMismatch { .. } => CliError::input(format!("EndpointMismatch: {e}")),
                other => CliError::input(other.to_string()),
            })?;
            let (results, citations, code) = match outcome {
                ProofOutcome::Proved(trace) => {
                    let used: BTreeSet<RuleId> = trace.steps.iter().map(|s| s.rule_id).collect();
                    let len = trace.steps.len();
                    (
                        json!({ "status": "proved", "step_count": claim(len, Basis::Computed), "trace": trace }),
                        rule_citations(&rules, used),
                        EXIT_OK,
                    )
                }
                ProofOutcome::Unknown { reason, nodes } => (
                    json!({ "status": "unknown", "reason": reason, "nodes_visited": claim(nodes, Basis::Computed) }),
                    vec![],
                    EXIT_UNKNOWN,
                ),
            };
            Ok(Output::Report { report: Report::new("autoeq prove", inputs, results, citations), code })
        }
        AutoeqCmd::Replay { trace } => {
            let t = load_trace(trace)?;
            t.replay().map_err(|e| CliError::input(format!("replay failed: {e}")))?;
            let ctx = K3Context::new(t.g)?;
            let rules = RuleSet::new(ctx, t.reading);
            let used: BTreeSet<RuleId> = t.steps.iter().map(|s| s.rule_id).collect();
            Ok(Output::ok(Report::new(
                "autoeq replay",
                json!({ "trace": trace.display().to_string() }),
                json!({
                    "valid": true,
                    "g": t.g,
                    "reading": reading_name(t.reading),
                    "lhs": t.lhs,
                    "rhs": t.rhs,
                    "step_count": claim(t.steps.len(), Basis::Computed),
                }),
                rule_citations(&rules, used),
            )))
        }
        AutoeqCmd::Rules { calc } => {
            let rules = rules(calc, config)?;
            Ok(Output::ok(Report::new(
                "autoeq rules",
                json!({ "g": rules.ctx().g(), "reading": reading_name(rules.reading()) }),
                json!({ "rules": rules.infos() }),
                rule_citations(&rules, RuleId::ALL),
            )))
        }
    }
}
