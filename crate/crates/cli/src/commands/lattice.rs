use k3moduli::cones::bb_square;
use k3moduli::lattice::{gram, moduli_dimension, pair, perp_basis, reflect, theta_coordinates};
use k3moduli::rational::fmt_rational;
use serde_json::json;

use super::{genus, vector, Output};
use crate::args::LatticeCmd;
use crate::config::Config;
use crate::error::CliError;
use crate::report::{cite, claim, Basis, Report};

pub fn run(cmd: &LatticeCmd, config: &Config) -> Result<Output, CliError> {
    let report = match cmd {
        LatticeCmd::Pair { genus: g, v, w } => {
            let ctx = genus(g, config)?;
            let (v, w) = (vector("v", v)?, vector("w", w)?);
            let p = pair(&ctx, &v, &w);
            Report::new(
                "lattice pair",
                json!({ "g": ctx.g(), "v": v, "w": w }),
                json!({ "pairing": claim(fmt_rational(&p), Basis::Computed) }),
                vec![cite::mukai_pairing()],
            )
        }
        LatticeCmd::Reflect { genus: g, v, s } => {
            let ctx = genus(g, config)?;
            let (v, s) = (vector("v", v)?, vector("s", s)?);
            let out = reflect(&ctx, &v, &s)?;
            Report::new(
                "lattice reflect",
                json!({ "g": ctx.g(), "v": v, "s": s }),
                json!({
                    "pairing_v_s": claim(fmt_rational(&pair(&ctx, &v, &s)), Basis::Computed),
                    "reflected": claim(out, Basis::Computed),
                }),
                vec![cite::reflection(), cite::mukai_pairing()],
            )
        }
        LatticeCmd::Perp { genus: g, v } => {
            let ctx = genus(g, config)?;
            let v = vector("v", v)?;
            let (b1, b2) = perp_basis(&ctx, &v)?;
            let lat = gram(&ctx, &[b1.clone(), b2.clone()])?;
            let inv = lat.invariants();
            let matrix: Vec<Vec<String>> = lat.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            Report::new(
                "lattice perp",
                json!({ "g": ctx.g(), "v": v }),
                json!({
                    "basis": [b1, b2],
                    "gram": claim(matrix, Basis::Computed),
                    "det": claim(inv.det.to_string(), Basis::Computed),
                    "signature": inv.signature,
                }),
                vec![cite::mukai_pairing()],
            )
        }
        LatticeCmd::Theta { genus: g, u } => {
            let ctx = genus(g, config)?;
            let u = vector("u", u)?;
            let class = theta_coordinates(&ctx, &u)?;
            Report::new(
                "lattice theta",
                json!({ "g": ctx.g(), "u": u }),
                json!({
                    "class": claim(&class, Basis::Computed),
                    "bb_square": claim(fmt_rational(&bb_square(&ctx, &class)), Basis::Computed),
                    "pairing_u_u": claim(fmt_rational(&pair(&ctx, &u, &u)), Basis::Computed),
                }),
                vec![cite::theta(), cite::bb_form()],
            )
        }
        LatticeCmd::Dim { genus: g, v } => {
            let ctx = genus(g, config)?;
            let v = vector("v", v)?;
            let dim = moduli_dimension(&ctx, &v)?;
            Report::new(
                "lattice dim",
                json!({ "g": ctx.g(), "v": v }),
                json!({ "dim": claim(dim.to_string(), Basis::Computed) }),
                vec![cite::dimension()],
            )
        }
    };
    Ok(Output::ok(report))
}
