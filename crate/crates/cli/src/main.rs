//! `orthopar`: fitting, benchmarking and orthogonality checks from the command line.
//!
//! Exit codes: 0 success, 1 failed `ortho-check`, 2 input error,
//! 3 non-convergence, 4 numerical validity failure.

mod bench;
mod fit;
mod ortho;
mod output;
mod var;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Failure;

#[derive(Parser)]
#[command(name = "orthopar", version, about = "Orthogonal parameterization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a location-scale t distribution to one column of data.
    FitT(fit::FitArgs),
    /// Monte-Carlo comparison of optimizers and parameterizations.
    BenchT(bench::BenchArgs),
    /// Check a built-in orthogonal reparameterization numerically.
    OrthoCheck(ortho::OrthoArgs),
    /// Fit VAR models of every order up to `--order` by the Whittle recursion.
    VarFit(var::VarFitArgs),
    /// Invert a block Toeplitz covariance matrix.
    ToeplitzInverse(var::ToeplitzArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Md => "md",
            Format::Json => "json",
        }
    }
}

/// Convergence flags shared by `fit-t` and `bench-t`.
#[derive(Args, Clone, Debug)]
pub struct CriterionArgs {
    /// Absolute tolerance on the change in mean log-likelihood.
    #[arg(long, default_value_t = 1e-10)]
    value_tol: f64,
    /// Relative tolerance on the parameter change.
    #[arg(long, default_value_t = 1e-8)]
    param_tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

impl CriterionArgs {
    fn criterion(&self) -> Result<orthopar::optimizers::ConvergenceCriterion, Failure> {
        Ok(orthopar::optimizers::ConvergenceCriterion::new(self.value_tol, self.param_tol, self.max_iter)?)
    }

    fn flags(&self) -> Vec<String> {
        vec![
            format!("--value-tol={:?}", self.value_tol),
            format!("--param-tol={:?}", self.param_tol),
            format!("--max-iter={}", self.max_iter),
        ]
    }
}

/// Output destination; standard output when absent.
#[derive(Args, Clone, Debug)]
pub struct OutArgs {
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::FitT(a) => fit::run(a),
        Command::BenchT(a) => bench::run(a),
        Command::OrthoCheck(a) => ortho::run(a),
        Command::VarFit(a) => var::run_fit(a),
        Command::ToeplitzInverse(a) => var::run_inverse(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("orthopar: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
