mod args;
mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::Output;
use config::Config;
use error::{CliError, EXIT_INPUT, EXIT_OK, EXIT_UNKNOWN};

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn load_config(cli: &Cli, fallback: &Config) -> Result<Config, CliError> {
    match &cli.config {
        Some(p) => Config::load(p),
        None => Ok(fallback.clone()),
    }
}

/// One batch line: the JSON line to print and its exit code.
fn run_line(line: &str, base: &Config) -> (String, i32) {
    let fail = |message: String| {
        let record = json!({
            "schema_version": report::SCHEMA_VERSION,
            "command": line,
            "error": { "exit_code": EXIT_INPUT, "message": message },
        });
        (record.to_string(), EXIT_INPUT)
    };
    let Some(words) = shlex::split(line) else {
        return fail("unbalanced quotes".into());
    };
    let cli = match Cli::try_parse_from(std::iter::once("k3moduli".to_string()).chain(words)) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string().trim_end().to_string()),
    };
    if cli.batch.is_some() {
        return fail("--batch cannot be nested".into());
    }
    let Some(cmd) = &cli.command else {
        return fail("missing command".into());
    };
    let config = match load_config(&cli, base) {
        Ok(c) => c,
        Err(e) => return fail(e.message),
    };
    match commands::run(cmd, &config) {
        Ok(Output::Report { report, code }) => (report.to_line(), code),
        Ok(Output::Text(_)) => fail("plot data output is not available in batch mode".into()),
        Err(e) => fail(e.message),
    }
}

fn run_batch(path: &Path, config: &Config) -> Result<i32, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let results = k3moduli::sweep::map(&lines, |l| run_line(l, config));
    let mut code = EXIT_OK;
    for (out, c) in results {
        emit(&format!("{out}\n"));
        code = match (code, c) {
            (EXIT_INPUT, _) | (_, EXIT_INPUT) => EXIT_INPUT,
            (EXIT_UNKNOWN, _) | (_, EXIT_UNKNOWN) => EXIT_UNKNOWN,
            _ => EXIT_OK,
        };
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli, &Config::default()).and_then(|config| match (&cli.batch, &cli.command) {
        (Some(_), Some(_)) => Err(CliError::input("--batch cannot be combined with a command")),
        (Some(path), None) => run_batch(path, &config),
        (None, Some(cmd)) => commands::run(cmd, &config).map(|out| match out {
            Output::Report { report, code } => {
                emit(&format!("{}\n", report.to_pretty()));
                code
            }
            Output::Text(t) => {
                emit(&t);
                EXIT_OK
            }
        }),
        (None, None) => Err(CliError::input("a command or --batch FILE is required (see --help)")),
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
