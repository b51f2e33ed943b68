//! Command-line surface of `spincheck`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spincheck_core::catalog::{EpsChoice, Mode};

/// Seed used for oracle test fields unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "spincheck", version, about = "Exact verification of two-spin superintegrable Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for parallel verification (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    #[value(alias = "json-lines")]
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum BasisArg {
    /// Entries of the explicit 4x4 matrices.
    #[default]
    Entries,
    /// Coefficients of the products sigma1a sigma2b.
    Pauli,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the determining equations of [H, Y] for the general scalar integral.
    Derive(DeriveArgs),
    /// Verify catalog entries.
    Verify(VerifyArgs),
    /// Print the symmetrized general scalar operator for given weights.
    Symmetrize(SymmetrizeArgs),
    /// Check the gauge transformation and the gauge-sector bracket tables.
    GaugeCheck,
    /// Print the canonical forms of an entry's Hamiltonian and integrals.
    Dump(DumpArgs),
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    /// Keep only equations from one derivative order.
    #[arg(long)]
    pub order: Option<u32>,

    /// Substitute a potential or weight, e.g. `--set V4=0`.
    #[arg(long = "set", value_name = "NAME=EXPR")]
    pub sets: Vec<String>,

    /// How matrix coefficients are split into scalar equations.
    #[arg(long, value_enum, default_value_t = BasisArg::Entries)]
    pub basis: BasisArg,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Entries to verify: `all`, an id (`18`, `G1`), a range (`3-7`) or a
    /// comma-separated list of these.
    #[arg(long, default_value = "all")]
    pub case: String,

    /// Verify every entry (same as `--case all`).
    #[arg(long, conflicts_with = "case")]
    pub all: bool,

    /// Verification path.
    #[arg(long, value_parser = parse_mode, default_value = "both")]
    pub mode: Mode,

    /// Branch of eps for entries that carry it: `+1`, `-1` or `both`.
    #[arg(long, value_parser = parse_eps, default_value = "both", allow_hyphen_values = true)]
    pub eps: EpsChoice,

    /// Seed of the oracle test fields.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Report null wall times so output is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct SymmetrizeArgs {
    /// File with one `fJ = EXPR` assignment per line; `#` starts a comment.
    pub weights: Option<PathBuf>,

    /// Assign a weight, e.g. `--set f2=1/r`. Applied after the file.
    #[arg(long = "set", value_name = "NAME=EXPR")]
    pub sets: Vec<String>,

    /// Start from fully symbolic weights instead of zero.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    /// Entry whose operators are printed.
    #[arg(long)]
    pub case: Option<String>,

    /// Print a single integral instead, e.g. `Y6` or `J1`.
    #[arg(long)]
    pub integral: Option<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_eps(s: &str) -> Result<EpsChoice, String> {
    s.parse()
}
