use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

/// Validation failure: reported on standard error with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

macro_rules! from_display {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::input(e.to_string())
            }
        }
    )*};
}

from_display!(
    k3moduli::lattice::LatticeError,
    k3moduli::cones::ConeError,
    k3moduli::moduli::ModuliError,
    k3moduli::rational::ParseRationalError
);

/// Renders a parser diagnostic with a caret under the offending character.
pub fn expr_error(text: &str, e: &k3moduli::autoeq::AutoeqError) -> CliError {
    match e.position() {
        Some(p) => {
            let caret: String = " ".repeat(p) + "^";
            CliError::input(format!("{e}\n  {text}\n  {caret}"))
        }
        None => CliError::input(e.to_string()),
    }
}
