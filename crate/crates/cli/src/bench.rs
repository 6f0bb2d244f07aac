use clap::Args;
use orthopar::harness::{run_benchmark, BenchConfig, BenchReport, Method, Parameterization, DEFAULT_SEED};
use orthopar::TParams;
use serde::Serialize;

use crate::output::{self, emit, Failure, Provenance};
use crate::{CriterionArgs, Format, OutArgs};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    nu: f64,
    /// Sample size per replication.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "iterative,bfgs,scoring")]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "original,ortho")]
    params: Vec<Parameterization>,
    #[command(flatten)]
    criterion: CriterionArgs,
    /// Record wall time per fit. Timed reports are not reproducible.
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct BenchOutput<'a> {
    provenance: Provenance,
    report: &'a BenchReport,
}

pub fn run(a: BenchArgs) -> Result<u8, Failure> {
    let mut cfg = BenchConfig::new(TParams::new(a.mu, a.sigma, a.nu)?, a.n, a.reps)
        .with_cells(&a.methods, &a.params)
        .with_seed(a.seed);
    cfg.criterion = a.criterion.criterion()?;
    cfg.timing = a.timing;

    let join = |v: Vec<String>| v.join(",");
    let mut flags = vec![
        format!("--mu={}", a.mu),
        format!("--sigma={}", a.sigma),
        format!("--nu={}", a.nu),
        format!("--n={}", a.n),
        format!("--reps={}", a.reps),
        format!("--methods={}", join(a.methods.iter().map(|m| m.to_string()).collect())),
        format!("--params={}", join(a.params.iter().map(|p| p.to_string()).collect())),
    ];
    flags.extend(a.criterion.flags());
    if a.timing {
        flags.push("--timing".into());
    }
    flags.push(format!("--format={}", a.format.as_str()));
    let provenance = Provenance::new("bench-t", flags, Some(a.seed));

    let report = run_benchmark(&cfg)?;
    let text = match a.format {
        Format::Csv => format!("# {}\n{}", provenance.line(), report.to_csv()?),
        Format::Md => format!("<!-- {} -->\n{}", provenance.line(), report.to_markdown()),
        Format::Json => output::json(&BenchOutput { provenance, report: &report })?,
    };
    emit(a.out.out.as_deref(), &text)?;
    Ok(output::OK)
}
