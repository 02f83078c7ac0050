use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "k3moduli",
    version,
    about = "Exact computations on moduli of sheaves on Picard-rank-1 K3 surfaces"
)]
pub struct Cli {
    /// TOML file whose keys mirror the flags (`g`, `depth`, `budget`, `reading`, `max_steps`, `samples`, `bound`);
    /// explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Run one command per line of FILE concurrently and print one JSON report per line, in input order.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mukai lattice: pairing, reflections, orthogonal complements, θ-coordinates, dimensions.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Movable cone of Hilb^g: chambers, ample classes, Pell boundaries.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Hilb^n and Picbar^d: Brauer bounds, equivalence graph, non-birationality certificate.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// Functor expressions: parse, normalize, prove equal, replay proofs.
    #[command(subcommand)]
    Autoeq(AutoeqCmd),
}

#[derive(Debug, Clone, Args)]
pub struct Genus {
    /// Genus g ≥ 2 of the K3 surface (degree 2g−2).
    #[arg(long)]
    pub g: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// ⟨v, w⟩.
    Pair {
        #[command(flatten)]
        genus: Genus,
        /// Mukai vector `r,a,s`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// v + ⟨v,s⟩·s for a spherical s.
    Reflect {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Basis and Gram invariants of v^⊥.
    Perp {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// θ-coordinates (x, y) of u ∈ (1,0,1−g)^⊥, meaning x·H̃ − y·B.
    Theta {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// ⟨v,v⟩ + 2.
    Dim {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Plotdata,
}

#[derive(Debug, Subcommand)]
pub enum ConeCmd {
    /// Chamber label of the class x·H̃ − y·B.
    Classify {
        #[command(flatten)]
        genus: Genus,
        /// Divisor class `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Chamber table and sampled ample-class curve.
    Report {
        #[command(flatten)]
        genus: Genus,
        /// Number of samples of the ample-class curve.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Every intermediate of the ample-class chain at t².
    Bm {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        tsq: String,
    },
    /// Minimal solution of x² − d·y² = N.
    Pell {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: Option<u64>,
        /// Largest y searched.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Raw boundary (1, 2d·y₁/x₁) from x² − d·y² = 5, compared with the flop wall.
    Footnote {
        #[command(flatten)]
        genus: Genus,
        #[arg(long)]
        d: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModuliCmd {
    /// Mukai vector, dimension, Brauer bound and fineness.
    #[command(group(ArgGroup::new("space").required(true).args(["hilb", "picbar"])))]
    Describe {
        #[command(flatten)]
        genus: Genus,
        #[arg(long, allow_hyphen_values = true)]
        hilb: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        picbar: Option<i64>,
    },
    /// Discriminants of Picbar^0 and Picbar^{g−1}.
    TheoremB {
        #[command(flatten)]
        genus: Genus,
    },
    /// Certified derived equivalences among Picbar^d, d in a..b.
    Graph {
        #[command(flatten)]
        genus: Genus,
        /// Inclusive range `a..b`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Calculus {
    /// Genus (default 2).
    #[arg(long)]
    pub g: Option<i64>,
    /// Index reading of the P(AJcomp) rule: `a` = (g−1, g), `b` = (1−g, g).
    #[arg(long)]
    pub reading: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum AutoeqCmd {
    /// Type-check an expression.
    Parse {
        #[command(flatten)]
        calc: Calculus,
        expr: String,
    },
    /// Rewrite with the oriented rules to a normal form.
    Normalize {
        #[command(flatten)]
        calc: Calculus,
        expr: String,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Search for a rewrite proof of LHS = RHS.
    Prove {
        #[command(flatten)]
        calc: Calculus,
        lhs: String,
        rhs: String,
        /// Maximum number of rewrite steps.
        #[arg(long)]
        depth: Option<usize>,
        /// Maximum number of expressions visited (default from K3MODULI_STEP_BUDGET, else 10000).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Re-check a proof trace (a bare trace or a `prove` report).
    Replay {
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
    },
    /// The rule table at genus g.
    Rules {
        #[command(flatten)]
        calc: Calculus,
    },
}
