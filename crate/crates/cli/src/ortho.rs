use clap::{Args, ValueEnum};
use orthopar::io::format_sig;
use orthopar::reparam::{builtin_case, BUILTIN_CASES};
use serde::Serialize;

use crate::output::{self, emit, md_table, Failure, Provenance};
use crate::{Format, OutArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpecOverride {
    /// Use `λ = γ`, which is not orthogonal; a negative control.
    Identity,
}

#[derive(Args, Debug)]
pub struct OrthoArgs {
    /// Distribution: t, gengamma, gamma2, invgamma2, ls-f1 or ls-f2.
    #[arg(long)]
    dist: String,
    /// Point for the PDE residual, in the family's original parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Option<Vec<f64>>,
    /// Points for the global check, separated by `;`, e.g. `0,1,1;0,2,4`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum)]
    spec_override: Option<SpecOverride>,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Serialize)]
struct OrthoReport {
    provenance: Provenance,
    dist: String,
    parameters: Vec<String>,
    orthogonal: Vec<String>,
    at: Vec<f64>,
    /// Rows: parameters of interest; columns: nuisance parameters.
    pde_residual: Vec<Vec<f64>>,
    pde_residual_max: f64,
    grid_points: usize,
    global_orthogonality: f64,
    tol: f64,
    pass: bool,
}

fn parse_grid(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| Failure::input(format!("grid value {v:?}: {e}"))))
                .collect()
        })
        .collect()
}

pub fn run(a: OrthoArgs) -> Result<u8, Failure> {
    if !(a.tol > 0.0) {
        return Err(Failure::input("--tol must be positive"));
    }
    let mut case = builtin_case(&a.dist)
        .map_err(|_| Failure::input(format!("unknown distribution {}; expected one of {}", a.dist, BUILTIN_CASES.join(", "))))?;
    if a.spec_override == Some(SpecOverride::Identity) {
        case = case.with_identity();
    }
    let at = a.at.clone().unwrap_or_else(|| case.default_point.clone());
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => case.default_grid.clone(),
    };
    if grid.is_empty() {
        return Err(Failure::input("--grid has no points"));
    }
    let residual = case.pde_residual(&at)?;
    let pde_max = residual.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let global = case.global_orthogonality(&grid)?;
    let pass = pde_max < a.tol && global < a.tol;

    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut flags = vec![format!("--dist={}", a.dist), format!("--at={}", join(&at))];
    if a.grid.is_some() {
        flags.push(format!("--grid={}", grid.iter().map(|p| join(p)).collect::<Vec<_>>().join(";")));
    }
    flags.push(format!("--tol={:?}", a.tol));
    if a.spec_override.is_some() {
        flags.push("--spec-override=identity".into());
    }
    flags.push(format!("--format={}", a.format.as_str()));

    let report = OrthoReport {
        provenance: Provenance::new("ortho-check", flags, None),
        dist: a.dist.clone(),
        parameters: case.spec.params().to_vec(),
        orthogonal: case.spec.orthogonal_names().to_vec(),
        at,
        pde_residual: (0..residual.nrows()).map(|i| residual.row(i).iter().copied().collect()).collect(),
        pde_residual_max: pde_max,
        grid_points: grid.len(),
        global_orthogonality: global,
        tol: a.tol,
        pass,
    };
    let text = match a.format {
        Format::Json => output::json(&report)?,
        Format::Csv => format!(
            "# {}\ndist,pde_residual_max,global_orthogonality,tol,pass\n{},{},{},{},{}\n",
            report.provenance.line(),
            report.dist,
            report.pde_residual_max,
            report.global_orthogonality,
            report.tol,
            report.pass
        ),
        Format::Md => {
            let f = |x: f64| format_sig(x, 6);
            let rows = vec![
                vec!["PDE residual (max)".into(), f(pde_max)],
                vec![format!("global orthogonality ({} points)", report.grid_points), f(global)],
                vec!["tolerance".into(), f(a.tol)],
                vec!["result".into(), if pass { "PASS".into() } else { "FAIL".into() }],
            ];
            format!("<!-- {} -->\n\n{}", report.provenance.line(), md_table(&["Check", "Value"], &rows))
        }
    };
    emit(a.out.out.as_deref(), &text)?;
    Ok(if pass { output::OK } else { output::CHECK_FAILED })
}
