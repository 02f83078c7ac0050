use k3moduli::moduli::{
    describe, equivalence_graph, ns_lattice, theorem_b_certificate, ModuliKind, FM_EQUIVALENCE, TWISTED_SPECIAL_CASE,
    UNTWISTED_SPECIAL_CASE,
};
use serde_json::json;

use super::{genus, Output};
use crate::args::ModuliCmd;
use crate::config::Config;
use crate::error::CliError;
use crate::report::{cite, claim, Basis, Report};

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::input(format!("--range: expected a..b with integers, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn run(cmd: &ModuliCmd, config: &Config) -> Result<Output, CliError> {
    let report = match cmd {
        ModuliCmd::Describe { genus: g, hilb, picbar } => {
            let ctx = genus(g, config)?;
            let kind = match (hilb, picbar) {
                (Some(n), None) => ModuliKind::Hilb(*n),
                (None, Some(d)) => ModuliKind::Picbar(*d),
                _ => return Err(CliError::input("exactly one of --hilb, --picbar is required")),
            };
            let desc = describe(&ctx, kind)?;
            let ns = ns_lattice(&ctx, &desc)?.invariants();
            Report::new(
                "moduli describe",
                json!({ "g": ctx.g(), "space": kind }),
                json!({
                    "space": kind,
                    "mukai_vector": desc.mukai_vector,
                    "dim": claim(desc.dim.to_string(), Basis::Computed),
                    "brauer_bound": claim(desc.brauer_bound, Basis::ClosedForm),
                    "fine": desc.certified_fine,
                    "ns_det": claim(ns.det.to_string(), Basis::Computed),
                    "ns_signature": ns.signature,
                }),
                vec![cite::brauer(), cite::dimension(), cite::theta()],
            )
        }
        ModuliCmd::TheoremB { genus: g } => {
            let ctx = genus(g, config)?;
            let c = theorem_b_certificate(&ctx)?;
            Report::new(
                "moduli theorem-b",
                json!({ "g": ctx.g() }),
                json!({
                    "X": c.x.kind,
                    "Y": c.y.kind,
                    "discX": claim(c.disc_x.to_string(), Basis::Computed),
                    "discY": claim(c.disc_y.to_string(), Basis::Computed),
                    "derived_equivalent": c.derived_equivalent,
                    "birational_possible": c.birational_possible,
                    "edge": c.edge,
                }),
                vec![cite::theorem_b(), cite::justification(&UNTWISTED_SPECIAL_CASE), cite::brauer()],
            )
        }
        ModuliCmd::Graph { genus: g, range } => {
            let ctx = genus(g, config)?;
            let (a, b) = parse_range(range)?;
            if a > b {
                return Err(CliError::input(format!("--range: empty range {a}..{b}")));
            }
            let graph = equivalence_graph(&ctx, a..=b)?;
            let pairs: Vec<[i64; 2]> = graph
                .edges
                .iter()
                .filter_map(|e| match (e.left.descriptor.kind, e.right.descriptor.kind, e.kind) {
                    (ModuliKind::Picbar(m), ModuliKind::Picbar(n), k3moduli::moduli::EdgeKind::Untwisted) => Some([m, n]),
                    _ => None,
                })
                .collect();
            Report::new(
                "moduli graph",
                json!({ "g": ctx.g(), "range": [a, b] }),
                json!({
                    "nodes": graph.nodes,
                    "edges": graph.edges,
                    "untwisted_pairs": pairs,
                }),
                vec![
                    cite::justification(&FM_EQUIVALENCE),
                    cite::justification(&TWISTED_SPECIAL_CASE),
                    cite::justification(&UNTWISTED_SPECIAL_CASE),
                    cite::brauer(),
                ],
            )
        }
    };
    Ok(Output::ok(report))
}
