//! Batch front end: graph documents in, deterministic JSON, CSV and DOT out.

pub mod commands;
pub mod document;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_exchange, cmd_symanzik, cmd_variation, cmd_verify, Outcome};
pub use document::GraphDocument;
pub use error::{exit, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "symanzik", version, about = "Exact Symanzik polynomials, exchange graphs and ratio-variation checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Both polynomials by enumeration and by determinants.
    Symanzik(SymanzikArgs),
    /// Exchange graph components, profiles and the connectivity verdict.
    Exchange(ExchangeArgs),
    /// Boundedness sweep and exact triple-graph identities.
    Variation(VariationArgs),
    /// Every property suite over the generated corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SymanzikArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Evaluation point as comma-separated positive rationals; repeatable.
    /// Defaults to all ones.
    #[arg(long = "y")]
    pub y: Vec<String>,
    /// Fail unless the document carries momenta.
    #[arg(long)]
    pub phi: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExchangeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = symanzik_core::exchange::DEFAULT_VERTEX_BUDGET)]
    pub budget_vertices: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VariationArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Entrywise bound C on the perturbation.
    #[arg(long, default_value = "1")]
    pub bound: String,
    #[arg(long, default_value = "1e1..1e6:decade")]
    pub grid: String,
    /// Base weights y0; defaults to all ones.
    #[arg(long)]
    pub y0: Option<String>,
    /// JSON file holding A as rows of rational strings; sampled from the
    /// seed when absent.
    #[arg(long)]
    pub perturbation: Option<PathBuf>,
    /// Tail range tolerance multiplier.
    #[arg(long, default_value = "1")]
    pub factor: String,
    /// Cap on triple graph vertices.
    #[arg(long, default_value_t = symanzik_core::variation::DEFAULT_TRIPLE_BUDGET)]
    pub budget_vertices: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long, default_value_t = 10)]
    pub max_m: usize,
    /// Seeded samples drawn at `--sample-n` vertices.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Defaults to `max_n + 1`.
    #[arg(long)]
    pub sample_n: Option<usize>,
    #[arg(long, default_value = "1")]
    pub bound: String,
    #[arg(long, default_value = "1e1..1e6:decade")]
    pub grid: String,
    /// Cap on exchange graph vertices.
    #[arg(long, default_value_t = symanzik_core::exchange::DEFAULT_VERTEX_BUDGET)]
    pub budget_vertices: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Symanzik(a) => cmd_symanzik(a),
        Command::Exchange(a) => cmd_exchange(a),
        Command::Variation(a) => cmd_variation(a),
        Command::Verify(a) => cmd_verify(a),
    }
}
