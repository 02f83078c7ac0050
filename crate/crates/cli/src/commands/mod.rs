mod autoeq;
mod cone;
mod lattice;
mod moduli;

use k3moduli::lattice::{K3Context, MukaiVector};
use k3moduli::rational::parse_rational_list;

use crate::args::{Command, Genus};
use crate::config::Config;
use crate::error::{CliError, EXIT_OK};
use crate::report::Report;

pub enum Output {
    Report { report: Report, code: i32 },
    Text(String),
}

impl Output {
    pub fn ok(report: Report) -> Self {
        Output::Report { report, code: EXIT_OK }
    }
}

pub fn run(cmd: &Command, config: &Config) -> Result<Output, CliError> {
    match cmd {
        Command::Lattice(c) => lattice::run(c, config),
        Command::Cone(c) => cone::run(c, config),
        Command::Moduli(c) => moduli::run(c, config),
        Command::Autoeq(c) => autoeq::run(c, config),
    }
}

fn context(g: Option<i64>, config: &Config) -> Result<K3Context, CliError> {
    let g = g.or(config.g).ok_or_else(|| CliError::input("--g is required"))?;
    Ok(K3Context::new(g)?)
}

fn genus(genus: &Genus, config: &Config) -> Result<K3Context, CliError> {
    context(genus.g, config)
}

fn vector(flag: &str, text: &str) -> Result<MukaiVector, CliError> {
    let parts = parse_rational_list(text).map_err(|e| CliError::input(format!("--{flag}: {e}")))?;
    match <[_; 3]>::try_from(parts) {
        Ok([r, a, s]) => Ok(MukaiVector::new(r, a, s)),
        Err(p) => Err(CliError::input(format!("--{flag}: expected r,a,s (3 entries), got {}", p.len()))),
    }
}
