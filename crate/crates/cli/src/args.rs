//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cosymp",
    version,
    about = "Exact workbench for almost-cosymplectic-contact structures and their duals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

/// Flags that override the structure file's policy block.
#[derive(Debug, Args, Clone, Default)]
pub struct GlobalOpts {
    /// Zero-test mode.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Sample count for sampled zero tests [default: 50].
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Seed for fixtures and sampled zero tests [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Tolerance for sampled zero tests [default: 1e-9].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Print only the summary line.
    #[arg(long, global = true)]
    pub quiet: bool,
}

/// A structure file or a corpus entry.
#[derive(Debug, Args, Clone)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Structure file (TOML).
    pub file: Option<PathBuf>,
    /// Corpus entry name.
    #[arg(long)]
    pub example: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    /// Bracket of generators of symmetries of omega.
    Omega,
    /// Bracket of pairs with conserved first component.
    #[value(name = "Omega")]
    BigOmega,
    /// Bracket of generators of symmetries of the full structure.
    Acc,
    /// Twisted algebroid bracket of sections.
    Algebroid,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a structure and verify every identity of its dual.
    Verify(Input),
    /// Report the structure class.
    Classify(Input),
    /// Compute the dual pair.
    Dual(Input),
    /// Generator conditions and memberships of a pair.
    PairCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        h: String,
    },
    /// Bracket of two pairs or two sections.
    Bracket {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        alg: Algebra,
        /// First operand: `(f, h)`, or `(X_1, ..., X_n; g)` for sections.
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        /// Second operand.
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Run the full invariant suite.
    Suite {
        #[command(flatten)]
        input: Input,
        /// Add 1/100 to one dual component before checking the identities,
        /// e.g. `Lambda:q^p` or `omega:z`.
        #[arg(long, hide = true)]
        tamper: Option<String>,
    },
    /// List the corpus.
    Examples {
        /// Write one structure file per entry into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}
