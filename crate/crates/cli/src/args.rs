use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Two-site correlations of the integrable O(n) spin chain.
#[derive(Debug, Parser)]
#[command(name = "on-qkz", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residuals of the Yang–Baxter, regularity, unitarity and crossing
    /// relations at random spectral parameters, and of the Hamiltonian density.
    Verify(VerifyArgs),
    /// Functional equations of the density matrix built from the quantum
    /// transfer matrix at finite Trotter number.
    Qkz(QkzArgs),
    /// Table rows of periodic chains by exact diagonalization.
    Ed(EdArgs),
    /// Table rows in the thermodynamic limit.
    Thermo(ThermoArgs),
    /// Finite-L and thermodynamic rows compared with the published tables.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model(s), e.g. `--n 3` or `--n 3,4,5`.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Largest admissible residual.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Random spectral points per model.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct QkzArgs {
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Trotter number N: the transfer matrix acts on n^N dimensions.
    #[arg(long = "trotter-N", default_value_t = on_qkz::qkz::DEFAULT_TROTTER)]
    pub trotter: usize,
    /// Magnitude β of the inhomogeneities (−β, β, −β, ...).
    #[arg(long, default_value_t = on_qkz::qkz::DEFAULT_INHOMOGENEITY, allow_negative_numbers = true)]
    pub inhomogeneity: f64,
    /// Limit replacing the default residual bound of the checks.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Args)]
pub struct EdArgs {
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Even chain length(s), e.g. `--L 2,4,6`.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub lengths: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Solver::Auto)]
    pub solver: Solver,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// Closed forms for n = 3, 4, the contour solver otherwise.
    Auto,
    Contour,
    Series,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Finite chain lengths; the thermodynamic row is always included.
    #[arg(long = "L", value_delimiter = ',', default_values_t = [2, 4, 6])]
    pub lengths: Vec<usize>,
    /// Uniform absolute tolerance replacing the printed-precision policy.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
    /// Allow models without published reference data; rows are computed
    /// but not compared.
    #[arg(long)]
    pub no_reference: bool,
    #[command(flatten)]
    pub output: Output,
}
