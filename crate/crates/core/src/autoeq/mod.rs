//! Typed rewriting calculus for functors between derived categories.
//!
//! Expressions are built from functor atoms by composition (`∘`), inverse
//! (`^-1`), shift (`[n]`) and the P-twist `P(·)`. Every expression carries a
//! type `source → target` together with a kind (equivalence, P-functor or
//! other functor); ill-typed input is rejected at parse time with a
//! position.
//!
//! The rule table lives in [`RuleSet`]. The oriented rules (R1, R2, R6a–e)
//! drive [`normalize`], which terminates by the ordering in [`order`]. The
//! prover [`prove_equal`] searches with every rule in both directions and
//! returns a replayable [`ProofTrace`].
//!
//! ```
//! use k3moduli::autoeq::{parse, prove_equal, R3Reading, RuleSet};
//! use k3moduli::K3Context;
//!
//! let rules = RuleSet::new(K3Context::new(3).unwrap(), R3Reading::A);
//! let lhs = parse(rules.ctx(), "P(F')").unwrap();
//! let rhs = parse(rules.ctx(), "KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1").unwrap();
//! let out = prove_equal(&rules, &lhs, &rhs, 4, 10_000).unwrap();
//! assert!(out.trace().unwrap().replay().is_ok());
//! ```

mod category;
mod expr;
mod normalize;
pub mod order;
mod parse;
mod prove;
mod random;
mod rules;

use thiserror::Error;

pub use category::Category;
pub use expr::{Atom, Expr, Kind, TypeError, TypeInfo, MAX_PARAM};
pub use normalize::{normalize, normalize_step, NormalStep, Normalized};
pub use order::rpo_gt;
pub use parse::{parse, parse_typed, MAX_FLOP_GENUS};
pub use prove::{
    equivalence_pool, neighbours, prove_equal, prove_many, step_budget_from_env, ProofOutcome, ProofStep, ProofTrace,
    ReplayError, UnknownReason, DEFAULT_STEP_BUDGET, STEP_BUDGET_ENV,
};
pub use random::ExprGen;
pub use rules::{everywhere, Direction, R3Reading, RuleId, RuleInfo, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutoeqError {
    #[error("syntax error at position {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String>, found: String },
    #[error("unknown atom `{name}` at position {position}")]
    UnknownAtom { name: String, position: usize },
    #[error("type error at position {position}: {message}")]
    Type { position: usize, message: String },
    #[error("`{name}` at position {position} is unavailable: {reason}")]
    Unavailable { name: String, position: usize, reason: String },
    #[error("the two sides have different endpoints: {lhs} versus {rhs}")]
    EndpointMismatch { lhs: String, rhs: String },
}

impl AutoeqError {
    pub fn position(&self) -> Option<usize> {
        match self {
            AutoeqError::Syntax { position, .. }
            | AutoeqError::UnknownAtom { position, .. }
            | AutoeqError::Type { position, .. }
            | AutoeqError::Unavailable { position, .. } => Some(*position),
            AutoeqError::EndpointMismatch { .. } => None,
        }
    }
}
