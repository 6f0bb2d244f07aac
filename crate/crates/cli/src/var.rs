use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use orthopar::io::format_sig;
use orthopar::whittle::{
    block_toeplitz, block_toeplitz_inverse, matrix_rows, max_abs, read_series_csv, sample_autocov, whittle_recursion,
    yule_walker_residuals, CovSequence, Mat,
};
use serde::Serialize;

use crate::output::{self, emit, read_input, read_text, Failure, Provenance};
use crate::OutArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarFormat {
    Md,
    Json,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["cov", "data"])))]
pub struct VarFitArgs {
    /// Autocovariance file (JSON).
    #[arg(long)]
    cov: Option<PathBuf>,
    /// Series CSV, one row per time point and one column per component.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Highest model order.
    #[arg(long)]
    order: usize,
    /// Largest lag of the sample autocovariances (with `--data`; default `--order`).
    #[arg(long, requires = "data")]
    max_lag: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: VarFormat,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ToeplitzArgs {
    /// Autocovariance file (JSON).
    #[arg(long)]
    cov: PathBuf,
    /// Number of block rows of T.
    #[arg(long)]
    order: usize,
    /// Also invert T densely and report the largest entry difference.
    #[arg(long)]
    check_dense: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Serialize)]
struct OrderFit {
    order: usize,
    forward: Vec<Vec<Vec<f64>>>,
    backward: Vec<Vec<Vec<f64>>>,
    sigma: Vec<Vec<f64>>,
    sigma_tilde: Vec<Vec<f64>>,
    yule_walker_residual_forward: f64,
    yule_walker_residual_backward: f64,
}

#[derive(Debug, Serialize)]
struct VarFitReport {
    provenance: Provenance,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    orders: Vec<OrderFit>,
}

#[derive(Debug, Serialize)]
struct InverseReport {
    provenance: Provenance,
    m: usize,
    order: usize,
    dim: usize,
    inverse: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense_discrepancy: Option<f64>,
}

fn load_cov(path: &std::path::Path) -> Result<CovSequence, Failure> {
    Ok(CovSequence::from_json(&read_text(path)?)?)
}

pub fn run_fit(a: VarFitArgs) -> Result<u8, Failure> {
    let mut flags = Vec::new();
    let (covs, n) = match (&a.cov, &a.data) {
        (Some(path), _) => {
            flags.push(format!("--cov={}", path.display()));
            (load_cov(path)?, None)
        }
        (None, Some(path)) => {
            let max_lag = a.max_lag.unwrap_or(a.order);
            if max_lag < a.order {
                return Err(Failure::input(format!("--max-lag {max_lag} is below --order {}", a.order)));
            }
            flags.push(format!("--data={}", path.display()));
            flags.push(format!("--max-lag={max_lag}"));
            let series = read_series_csv(read_input(path)?.as_slice())?;
            (sample_autocov(&series, max_lag)?, Some(series.nrows()))
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    if a.order > covs.p() {
        return Err(Failure::input(format!("order {} needs lags up to {}, the sequence has {}", a.order, a.order, covs.p())));
    }
    flags.push(format!("--order={}", a.order));
    flags.push(format!("--format={}", if a.format == VarFormat::Json { "json" } else { "md" }));

    let states = whittle_recursion(&covs, a.order)?;
    let orders = states
        .iter()
        .map(|st| {
            let (f, b) = yule_walker_residuals(&covs, st);
            OrderFit {
                order: st.order,
                forward: st.forward.iter().map(matrix_rows).collect(),
                backward: st.backward.iter().map(matrix_rows).collect(),
                sigma: matrix_rows(&st.sigma),
                sigma_tilde: matrix_rows(&st.sigma_tilde),
                yule_walker_residual_forward: f,
                yule_walker_residual_backward: b,
            }
        })
        .collect();
    let report = VarFitReport { provenance: Provenance::new("var-fit", flags, None), m: covs.m(), n, orders };
    let text = match a.format {
        VarFormat::Json => output::json(&report)?,
        VarFormat::Md => var_markdown(&report),
    };
    emit(a.out.out.as_deref(), &text)?;
    Ok(output::OK)
}

fn md_matrix(rows: &[Vec<f64>]) -> String {
    let body: Vec<String> =
        rows.iter().map(|r| r.iter().map(|v| format_sig(*v, 6)).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", body.join("; "))
}

fn var_markdown(r: &VarFitReport) -> String {
    let mut s = format!("<!-- {} -->\n", r.provenance.line());
    for o in &r.orders {
        s.push_str(&format!("\n### Order {}\n\n", o.order));
        let mut rows = Vec::new();
        for (i, (f, b)) in o.forward.iter().zip(&o.backward).enumerate() {
            rows.push(vec![format!("lag {}", i + 1), md_matrix(f), md_matrix(b)]);
        }
        rows.push(vec!["residual covariance".into(), md_matrix(&o.sigma), md_matrix(&o.sigma_tilde)]);
        rows.push(vec![
            "Yule–Walker residual".into(),
            format_sig(o.yule_walker_residual_forward, 6),
            format_sig(o.yule_walker_residual_backward, 6),
        ]);
        s.push_str(&output::md_table(&["Block", "Forward", "Backward"], &rows));
    }
    s
}

pub fn run_inverse(a: ToeplitzArgs) -> Result<u8, Failure> {
    let covs = load_cov(&a.cov)?;
    let inverse = block_toeplitz_inverse(&covs, a.order)?;
    let dense_discrepancy = if a.check_dense {
        let dense: Mat = block_toeplitz(&covs, a.order)?
            .try_inverse()
            .ok_or_else(|| Failure { code: output::NUMERICAL, message: "block Toeplitz matrix is singular".into() })?;
        Some(max_abs(&(&inverse - dense)))
    } else {
        None
    };
    let mut flags = vec![format!("--cov={}", a.cov.display()), format!("--order={}", a.order)];
    if a.check_dense {
        flags.push("--check-dense".into());
    }
    let report = InverseReport {
        provenance: Provenance::new("toeplitz-inverse", flags, None),
        m: covs.m(),
        order: a.order,
        dim: inverse.nrows(),
        inverse: matrix_rows(&inverse),
        dense_discrepancy,
    };
    emit(a.out.out.as_deref(), &output::json(&report)?)?;
    if let Some(d) = dense_discrepancy {
        eprintln!("dense discrepancy: {}", format_sig(d, 6));
    }
    Ok(output::OK)
}
