//! `mps2`: command-line front end for two-state matrix product states with
//! 2×2 auxiliary matrices.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 invalid input, 3 numerical
//! failure (null state, no convergence, ...).

mod commands;
mod model;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use model::ModelArgs;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<mps2_core::Error> for CliError {
    fn from(e: mps2_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "mps2", version, about = "Matrix product states with 2x2 auxiliary matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct OutArgs {
    /// Write the result here instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the matrices of a model in the pair-file format.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Reduce a pair to its canonical family and parameters.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        /// Relative tolerance for eigenvalue gaps and vanishing entries.
        #[arg(long, default_value_t = mps2_core::classify::CANONICAL_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spin-flip and parity witnesses.
    Witness {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Transfer-matrix eigenvalues and correlation length.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep one or two parameters; CSV table plus a crossing report.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        /// Axis as name:min:max:steps (give twice for a plane).
        #[arg(long = "param", value_name = "SPEC", required = true)]
        params: Vec<String>,
        /// Crossing report (JSON) path; printed to stderr when omitted.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        kink_factor: f64,
        #[arg(long, default_value_t = 1e-9)]
        tie_tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Interaction range, null basis, parent Hamiltonian and Pauli expansion.
    Hamiltonian {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = mps2_core::parent_ham::DEFAULT_K_MAX)]
        k_max: usize,
        /// Weight per symmetry group (default: all 1).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Printed forms to fit: ha, hb, cirac (default picked from the model).
        #[arg(long, value_delimiter = ',')]
        compare: Option<Vec<String>>,
        /// Couplings J and K of the ha form.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        j: f64,
        #[arg(long = "k-coupling", default_value_t = 1.0, allow_negative_numbers = true)]
        k_coupling: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact-diagonalization check that the state is a zero-energy ground state.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        /// Chain lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = mps2_core::parent_ham::DEFAULT_K_MAX)]
        k_max: usize,
        /// Number of lowest eigenvalues reported.
        #[arg(long, default_value_t = 4)]
        lowest: usize,
        /// Directory for the dense states (little-endian re/im f64 pairs).
        #[arg(long, value_name = "DIR")]
        state_dir: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One- and two-point functions against separation r.
    Correlate {
        #[command(flatten)]
        model: ModelArgs,
        /// Pauli letter of the site operator.
        #[arg(long, default_value = "z")]
        op: String,
        #[arg(long, default_value_t = 10)]
        r_max: u64,
        /// Finite periodic chain length (thermodynamic limit when omitted).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = commands::Format::Json)]
        format: commands::Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Explicit similarity S and scale μ between two pairs.
    Equivalence {
        #[command(flatten)]
        model: ModelArgs,
        /// Pair file of the second pair.
        #[arg(long, value_name = "PATH")]
        other: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("MPS2_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::validation(format!("MPS2_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::numerical(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    use commands as c;
    match cli.command {
        Command::Build { model, out } => c::build(&model, &out),
        Command::Classify { model, tol, out } => c::classify(&model, tol, &out),
        Command::Witness { model, out } => c::witness(&model, &out),
        Command::Spectrum { model, out } => c::spectrum(&model, &out),
        Command::Scan { model, params, report, kink_factor, tie_tol, out } => {
            c::scan(&model, &params, report.as_deref(), kink_factor, tie_tol, &out)
        }
        Command::Hamiltonian { model, k_max, weights, compare, j, k_coupling, out } => {
            c::hamiltonian(&model, k_max, weights.as_deref(), compare.as_deref(), (j, k_coupling), &out)
        }
        Command::Verify { model, n, k_max, lowest, state_dir, out } => {
            c::verify(&model, &n, k_max, lowest, state_dir.as_deref(), &out)
        }
        Command::Correlate { model, op, r_max, n, format, out } => c::correlate(&model, &op, r_max, n, format, &out),
        Command::Equivalence { model, other, out } => c::equivalence(&model, &other, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mps2: {e}");
            ExitCode::from(e.code())
        }
    }
}
