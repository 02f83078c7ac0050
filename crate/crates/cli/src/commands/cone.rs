use k3moduli::cones::{
    bm_ample_class, bm_chain, bm_closed_form, bm_nef_limit, bm_samples, bm_threshold, chamber_table, classify_divisor,
    flop_wall, footnote_nef_boundary, movable_cone, pell_min_solution, DivisorClass, FOOTNOTE_SEARCH_BOUND,
};
use k3moduli::rational::{fmt_rational, parse_rational};
use serde_json::json;

use super::{genus, Output};
use crate::args::{ConeCmd, Format};
use crate::config::Config;
use crate::error::{CliError, EXIT_OK, EXIT_UNKNOWN};
use crate::report::{cite, claim, Basis, Report};

pub const DEFAULT_SAMPLES: usize = 20;
pub const MAX_SAMPLES: usize = 10_000;
pub const DEFAULT_PELL_N: u64 = 5;
pub const DEFAULT_PELL_BOUND: u64 = 100_000;

pub fn run(cmd: &ConeCmd, config: &Config) -> Result<Output, CliError> {
    let report = match cmd {
        ConeCmd::Classify { genus: g, d } => {
            let ctx = genus(g, config)?;
            let class: DivisorClass = d.parse()?;
            let label = classify_divisor(&ctx, &class)?;
            Report::new(
                "cone classify",
                json!({ "g": ctx.g(), "d": class }),
                json!({
                    "label": label,
                    "slope": class.slope().map(|s| claim(fmt_rational(&s), Basis::Computed)),
                    "flop_wall_slope": claim(fmt_rational(&flop_wall(&ctx).y), Basis::ClosedForm),
                }),
                vec![cite::movable_cone()],
            )
        }
        ConeCmd::Report { genus: g, samples, format } => {
            let ctx = genus(g, config)?;
            let n = samples.or(config.samples).unwrap_or(DEFAULT_SAMPLES);
            if !(1..=MAX_SAMPLES).contains(&n) {
                return Err(CliError::input(format!("--samples must be in 1..={MAX_SAMPLES}")));
            }
            let curve = bm_samples(&ctx, n);
            if *format == Some(Format::Plotdata) {
                let mut out = String::from("# tsq slope\n");
                for (tsq, slope) in &curve {
                    out.push_str(&format!("{} {}\n", fmt_rational(tsq), fmt_rational(slope)));
                }
                return Ok(Output::Text(out));
            }
            let walls: Vec<String> =
                chamber_table(&ctx).iter().filter(|e| e.is_wall).map(|e| fmt_rational(&e.slope_low)).collect();
            let (h, h_minus_b) = movable_cone(&ctx);
            let limit = bm_nef_limit(&ctx)?;
            let curve: Vec<_> = curve
                .iter()
                .map(|(tsq, slope)| json!({ "tsq": fmt_rational(tsq), "slope": claim(fmt_rational(slope), Basis::Computed) }))
                .collect();
            Report::new(
                "cone report",
                json!({ "g": ctx.g(), "samples": n }),
                json!({
                    "movable_cone": [h, h_minus_b],
                    "walls": claim(walls, Basis::ClosedForm),
                    "chambers": chamber_table(&ctx),
                    "flop_wall": claim(flop_wall(&ctx), Basis::ClosedForm),
                    "bm_threshold": claim(fmt_rational(&bm_threshold(&ctx)), Basis::ClosedForm),
                    "bm_limit": claim(&limit.class, Basis::Computed),
                    "bm_limit_on_flop_wall": limit.class.same_ray(&flop_wall(&ctx)),
                    "bm_curve": curve,
                }),
                vec![cite::movable_cone(), cite::bm_chain(), cite::bb_form()],
            )
        }
        ConeCmd::Bm { genus: g, tsq } => {
            let ctx = genus(g, config)?;
            let tsq = parse_rational(tsq).map_err(|e| CliError::input(format!("--tsq: {e}")))?;
            let chain = bm_chain(&ctx, &tsq)?;
            let above = tsq > bm_threshold(&ctx);
            let closed = bm_closed_form(&ctx, &tsq);
            let ample = if above { Some(claim(bm_ample_class(&ctx, &tsq)?, Basis::Computed)) } else { None };
            Report::new(
                "cone bm",
                json!({ "g": ctx.g(), "tsq": fmt_rational(&tsq) }),
                json!({
                    "chain": chain,
                    "closed_form": claim(&closed, Basis::ClosedForm),
                    "matches_closed_form": chain.class == closed,
                    "above_threshold": above,
                    "ample_class": ample,
                }),
                vec![cite::bm_chain(), cite::reflection(), cite::theta(), cite::movable_cone()],
            )
        }
        ConeCmd::Pell { d, n, bound } => {
            let n = n.unwrap_or(DEFAULT_PELL_N);
            let bound = bound.or(config.bound).unwrap_or(DEFAULT_PELL_BOUND);
            let sol = pell_min_solution(*d, n, bound)?;
            let code = if sol.exists || sol.certificate.is_some() { EXIT_OK } else { EXIT_UNKNOWN };
            let status = match (sol.exists, &sol.certificate) {
                (true, _) => "solved",
                (false, Some(_)) => "impossible",
                (false, None) => "unknown",
            };
            let report = Report::new(
                "cone pell",
                json!({ "d": d, "n": n, "bound": bound }),
                json!({
                    "status": status,
                    "solution": sol.x1.zip(sol.y1).map(|(x, y)| claim([x, y], Basis::Computed)),
                    "certificate": sol.certificate,
                    "search_bound": sol.search_bound,
                }),
                vec![cite::pell()],
            );
            return Ok(Output::Report { report, code });
        }
        ConeCmd::Footnote { genus: g, d } => {
            let ctx = genus(g, config)?;
            let f = footnote_nef_boundary(&ctx, *d)?;
            Report::new(
                "cone footnote",
                json!({ "g": ctx.g(), "d": d, "n": 5, "bound": FOOTNOTE_SEARCH_BOUND }),
                json!({
                    "pell_solution": f.pell.x1.zip(f.pell.y1).map(|(x, y)| claim([x, y], Basis::Computed)),
                    "boundary": claim(&f.boundary, Basis::Convention),
                    "flop_wall": claim(&f.flop_wall, Basis::ClosedForm),
                    "matches_flop_wall": f.matches_flop_wall,
                    "inside_movable_cone": f.inside_movable_cone,
                    "note": f.note,
                }),
                vec![cite::pell(), cite::movable_cone()],
            )
        }
    };
    Ok(Output::ok(report))
}
