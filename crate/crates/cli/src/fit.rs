use std::path::PathBuf;

use clap::Args;
use orthopar::harness::{fit_t_bounded, Method, Parameterization, NU_BOUNDS};
use orthopar::io::format_sig;
use orthopar::whittle::read_series_csv;
use orthopar::{Interval, Sample};
use serde::Serialize;

use crate::output::{self, emit, md_table, Failure, Provenance};
use crate::{CriterionArgs, Format, OutArgs};

#[derive(Args, Debug)]
pub struct FitArgs {
    /// CSV file with one numeric column (`-` for standard input).
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value = "ortho")]
    param: Parameterization,
    #[arg(long, default_value = "scoring")]
    method: Method,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[arg(long, default_value_t = NU_BOUNDS.0)]
    nu_min: f64,
    #[arg(long, default_value_t = NU_BOUNDS.1)]
    nu_max: f64,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Serialize)]
struct Estimate {
    mu: f64,
    sigma: f64,
    nu: f64,
}

#[derive(Debug, Serialize)]
struct FitReport {
    provenance: Provenance,
    n: usize,
    method: Method,
    parameterization: Parameterization,
    estimate: Estimate,
    /// Optimizer coordinates: `(mu, sigma, nu)` or `(mu, lambda, nu)`.
    argmax: Vec<f64>,
    loglik: f64,
    mean_loglik: f64,
    iterations: usize,
    converged: bool,
    fallbacks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

pub fn run(a: FitArgs) -> Result<u8, Failure> {
    let crit = a.criterion.criterion()?;
    let bounds = Interval::new(a.nu_min, a.nu_max)?;
    let data = read_series_csv(output::read_input(&a.input)?.as_slice())?;
    if data.ncols() != 1 {
        return Err(Failure::input(format!("expected one column, found {}", data.ncols())));
    }
    let sample = Sample::new(data.column(0).iter().copied().collect())?;
    let fit = fit_t_bounded(&sample, a.method, a.param, &crit, bounds)?;

    let mut flags = vec![
        format!("--input={}", a.input.display()),
        format!("--param={}", a.param),
        format!("--method={}", a.method),
    ];
    flags.extend(a.criterion.flags());
    flags.push(format!("--nu-min={}", a.nu_min));
    flags.push(format!("--nu-max={}", a.nu_max));
    flags.push(format!("--format={}", a.format.as_str()));

    let n = sample.n();
    let r = &fit.result;
    let report = FitReport {
        provenance: Provenance::new("fit-t", flags, None),
        n,
        method: a.method,
        parameterization: a.param,
        estimate: Estimate { mu: fit.estimate.mu(), sigma: fit.estimate.sigma(), nu: fit.estimate.nu() },
        argmax: r.argmax.clone(),
        loglik: r.value * n as f64,
        mean_loglik: r.value,
        iterations: r.iterations,
        converged: r.converged,
        fallbacks: r.fallbacks,
        message: r.message.clone(),
    };
    let text = match a.format {
        Format::Json => output::json(&report)?,
        Format::Csv => to_csv(&report),
        Format::Md => to_markdown(&report),
    };
    emit(a.out.out.as_deref(), &text)?;
    if report.converged {
        Ok(output::OK)
    } else {
        eprintln!("orthopar: {} did not converge after {} iterations", a.method, report.iterations);
        Ok(output::NOT_CONVERGED)
    }
}

fn to_csv(r: &FitReport) -> String {
    let e = &r.estimate;
    format!(
        "# {}\nmethod,parameterization,n,mu,sigma,nu,loglik,mean_loglik,iterations,converged,fallbacks\n\
         {},{},{},{},{},{},{},{},{},{},{}\n",
        r.provenance.line(),
        r.method,
        r.parameterization,
        r.n,
        e.mu,
        e.sigma,
        e.nu,
        r.loglik,
        r.mean_loglik,
        r.iterations,
        r.converged,
        r.fallbacks
    )
}

fn to_markdown(r: &FitReport) -> String {
    let f = |x: f64| format_sig(x, 6);
    let rows = vec![
        vec!["μ̂".into(), f(r.estimate.mu)],
        vec!["σ̂".into(), f(r.estimate.sigma)],
        vec!["ν̂".into(), f(r.estimate.nu)],
        vec!["log-likelihood".into(), f(r.loglik)],
        vec!["log-likelihood / n".into(), f(r.mean_loglik)],
        vec!["iterations".into(), r.iterations.to_string()],
        vec!["converged".into(), r.converged.to_string()],
        vec!["scoring fallbacks".into(), r.fallbacks.to_string()],
    ];
    let mut s = format!("<!-- {} -->\n\n", r.provenance.line());
    s.push_str(&format!("{} fit, {} parameterization, n = {}\n\n", r.method, r.parameterization, r.n));
    s.push_str(&md_table(&["Quantity", "Value"], &rows));
    if let Some(m) = &r.message {
        s.push_str(&format!("\n{m}\n"));
    }
    s
}
