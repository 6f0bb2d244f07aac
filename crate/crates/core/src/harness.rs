//! Monte-Carlo comparison of the three maximizers in the original and
//! orthogonal t parameterizations.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    from_ortho, t_fisher_info, t_fisher_info_ortho, t_loglik, t_loglik_grad, t_loglik_grad_ortho, t_loglik_ortho,
    t_sample, Sample, TParams, TParamsOrtho,
};
use crate::error::{Error, Result};
use crate::io::{format_sig, to_json_full_precision};
use crate::numerics::Interval;
use crate::optimizers::{
    bfgs_max, coordinate_iterative_max, fisher_scoring_max, ConvergenceCriterion, LineBracket, Objective, OptResult,
};

/// Degrees of freedom are kept inside this interval.
pub const NU_BOUNDS: (f64, f64) = (0.1, 30.0);
/// Starting value for ν.
pub const NU_INIT: f64 = 4.0;
/// Default seed for benchmark runs.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Iterative,
    Bfgs,
    Scoring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    Original,
    Ortho,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Iterative, Method::Bfgs, Method::Scoring];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Iterative => "iterative",
            Method::Bfgs => "bfgs",
            Method::Scoring => "scoring",
        }
    }
}

impl Parameterization {
    pub const ALL: [Parameterization; 2] = [Parameterization::Original, Parameterization::Ortho];

    pub fn as_str(&self) -> &'static str {
        match self {
            Parameterization::Original => "original",
            Parameterization::Ortho => "ortho",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iterative" => Ok(Method::Iterative),
            "bfgs" => Ok(Method::Bfgs),
            "scoring" => Ok(Method::Scoring),
            other => Err(Error::InvalidInput(format!("unknown method {other}; expected iterative, bfgs or scoring"))),
        }
    }
}

impl FromStr for Parameterization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "original" => Ok(Parameterization::Original),
            "ortho" => Ok(Parameterization::Ortho),
            other => Err(Error::InvalidInput(format!("unknown parameterization {other}; expected original or ortho"))),
        }
    }
}

/// Mean log-likelihood objective over `(μ, σ, ν)` or `(μ, λ, ν)`, with ν in [`NU_BOUNDS`].
pub fn t_objective(sample: &Sample, param: Parameterization) -> Objective {
    t_objective_bounded(sample, param, Interval::new(NU_BOUNDS.0, NU_BOUNDS.1).expect("static bounds"))
}

/// As [`t_objective`] with ν clamped to `nu_bounds`.
pub fn t_objective_bounded(sample: &Sample, param: Parameterization, nu_bounds: Interval) -> Objective {
    let n = sample.n() as f64;
    let (s1, s2) = (sample.clone(), sample.clone());
    let obj = match param {
        Parameterization::Original => Objective::new(3, move |x| match TParams::new(x[0], x[1], x[2]) {
            Ok(p) => t_loglik(&s1, &p) / n,
            Err(_) => f64::NEG_INFINITY,
        })
        .with_gradient(move |x| match TParams::new(x[0], x[1], x[2]) {
            Ok(p) => t_loglik_grad(&s2, &p).iter().map(|g| g / n).collect(),
            Err(_) => vec![f64::NAN; 3],
        })
        .with_fisher(|x| t_fisher_info(&TParams::new(x[0], x[1], x[2])?)),
        Parameterization::Ortho => Objective::new(3, move |x| match TParamsOrtho::new(x[0], x[1], x[2]) {
            Ok(p) => t_loglik_ortho(&s1, &p) / n,
            Err(_) => f64::NEG_INFINITY,
        })
        .with_gradient(move |x| match TParamsOrtho::new(x[0], x[1], x[2]) {
            Ok(p) => t_loglik_grad_ortho(&s2, &p).iter().map(|g| g / n).collect(),
            Err(_) => vec![f64::NAN; 3],
        })
        .with_fisher(|x| t_fisher_info_ortho(&TParamsOrtho::new(x[0], x[1], x[2])?)),
    };
    obj.with_bounds(2, nu_bounds)
        .with_bracket(0, LineBracket::Relative { scale_index: 1, width: 10.0 })
        .with_bracket(1, LineBracket::Log { width: 4.0 })
}

/// Starting values `(median, sd, 4)` in `(μ, σ, ν)`.
pub fn initial_params(sample: &Sample) -> Result<TParams> {
    let sd = sample.std_dev();
    if !(sd > 0.0) {
        return Err(Error::InvalidInput("sample standard deviation is zero; scale cannot be initialized".into()));
    }
    TParams::new(sample.median(), sd, NU_INIT)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TFit {
    pub estimate: TParams,
    pub result: OptResult,
}

/// Maximum-likelihood fit of the location-scale t.
///
/// The estimate is always reported in `(μ, σ, ν)`; `result.argmax` is in the
/// coordinates of `param`.
pub fn fit_t(sample: &Sample, method: Method, param: Parameterization, crit: &ConvergenceCriterion) -> Result<TFit> {
    fit_t_bounded(sample, method, param, crit, Interval::new(NU_BOUNDS.0, NU_BOUNDS.1)?)
}

/// As [`fit_t`] with ν restricted to `nu_bounds`. The starting ν is clamped
/// into the interval.
pub fn fit_t_bounded(
    sample: &Sample,
    method: Method,
    param: Parameterization,
    crit: &ConvergenceCriterion,
    nu_bounds: Interval,
) -> Result<TFit> {
    if !(nu_bounds.lo() > 0.0) {
        return Err(Error::InvalidInput(format!("lower ν bound must be positive, got {}", nu_bounds.lo())));
    }
    let p0 = initial_params(sample)?;
    let p0 = TParams::new(p0.mu(), p0.sigma(), nu_bounds.clamp(p0.nu()))?;
    let init = match param {
        Parameterization::Original => vec![p0.mu(), p0.sigma(), p0.nu()],
        Parameterization::Ortho => {
            let q = p0.to_ortho();
            vec![q.mu(), q.lambda(), q.nu()]
        }
    };
    let obj = t_objective_bounded(sample, param, nu_bounds);
    let result = match method {
        Method::Iterative => coordinate_iterative_max(&obj, &init, crit)?,
        Method::Bfgs => bfgs_max(&obj, &init, crit)?,
        Method::Scoring => fisher_scoring_max(&obj, &init, crit)?,
    };
    let x = &result.argmax;
    let estimate = match param {
        Parameterization::Original => TParams::new(x[0], x[1], x[2])?,
        Parameterization::Ortho => from_ortho(&TParamsOrtho::new(x[0], x[1], x[2])?),
    };
    Ok(TFit { estimate, result })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub true_params: TParams,
    pub n: usize,
    pub reps: usize,
    pub methods: Vec<Method>,
    pub parameterizations: Vec<Parameterization>,
    pub seed: u64,
    pub criterion: ConvergenceCriterion,
    /// Record wall time per fit. Off by default so reports are reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl BenchConfig {
    pub fn new(true_params: TParams, n: usize, reps: usize) -> Self {
        Self {
            true_params,
            n,
            reps,
            methods: Method::ALL.to_vec(),
            parameterizations: Parameterization::ALL.to_vec(),
            seed: DEFAULT_SEED,
            criterion: ConvergenceCriterion::default(),
            timing: false,
        }
    }

    pub fn with_cells(mut self, methods: &[Method], params: &[Parameterization]) -> Self {
        self.methods = methods.to_vec();
        self.parameterizations = params.to_vec();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidInput("reps must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidInput("sample size must be at least 2".into()));
        }
        if self.methods.is_empty() || self.parameterizations.is_empty() {
            return Err(Error::InvalidInput("at least one method and one parameterization are required".into()));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(Method, Parameterization)> {
        self.methods
            .iter()
            .flat_map(|&m| self.parameterizations.iter().map(move |&p| (m, p)))
            .collect()
    }
}

/// The generator for replication `r`: the seed's ChaCha8 stream number `r`.
pub fn replication_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// One fit within one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub iterations: usize,
    pub loglik: f64,
    pub mu: f64,
    pub sigma: f64,
    pub nu: f64,
    pub converged: bool,
    pub fallbacks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q500: f64,
    pub q975: f64,
    pub min: f64,
    pub max: f64,
}

/// Type-7 quantile (linear interpolation between order statistics) of
/// already sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Summary {
    /// Mean, sd (n−1 divisor, 0 for one value), quantiles and range.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Self {
            mean,
            sd,
            q025: quantile_sorted(&sorted, 0.025),
            q500: quantile_sorted(&sorted, 0.5),
            q975: quantile_sorted(&sorted, 0.975),
            min: sorted[0],
            max: sorted[n - 1],
        }
    }

    fn get(&self, stat: &str) -> f64 {
        match stat {
            "mean" => self.mean,
            "sd" => self.sd,
            "q025" => self.q025,
            "q500" => self.q500,
            "q975" => self.q975,
            "min" => self.min,
            _ => self.max,
        }
    }
}

const STATISTICS: [&str; 7] = ["mean", "sd", "q025", "q500", "q975", "min", "max"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub method: Method,
    pub parameterization: Parameterization,
    pub reps: usize,
    pub converged_fraction: f64,
    pub fallbacks: usize,
    pub iterations: Summary,
    /// Maximized log-likelihood per observation.
    pub loglik: Summary,
    pub mu: Summary,
    pub sigma: Summary,
    pub nu: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<Summary>,
}

impl CellReport {
    fn from_records(method: Method, parameterization: Parameterization, recs: &[FitRecord]) -> Self {
        let col = |f: fn(&FitRecord) -> f64| Summary::from_values(&recs.iter().map(f).collect::<Vec<_>>());
        let time_ms = if recs.iter().all(|r| r.time_ms.is_some()) {
            Some(col(|r| r.time_ms.unwrap_or(f64::NAN)))
        } else {
            None
        };
        Self {
            method,
            parameterization,
            reps: recs.len(),
            converged_fraction: recs.iter().filter(|r| r.converged).count() as f64 / recs.len() as f64,
            fallbacks: recs.iter().map(|r| r.fallbacks).sum(),
            iterations: col(|r| r.iterations as f64),
            loglik: col(|r| r.loglik),
            mu: col(|r| r.mu),
            sigma: col(|r| r.sigma),
            nu: col(|r| r.nu),
            time_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub cells: Vec<CellReport>,
}

fn fit_record(sample: &Sample, m: Method, p: Parameterization, cfg: &BenchConfig) -> Result<FitRecord> {
    let start = cfg.timing.then(Instant::now);
    let fit = fit_t(sample, m, p, &cfg.criterion)?;
    Ok(FitRecord {
        iterations: fit.result.iterations,
        loglik: fit.result.value,
        mu: fit.estimate.mu(),
        sigma: fit.estimate.sigma(),
        nu: fit.estimate.nu(),
        converged: fit.result.converged,
        fallbacks: fit.result.fallbacks,
        time_ms: start.map(|s| s.elapsed().as_secs_f64() * 1e3),
    })
}

/// Every fit of every replication: `records[r][c]` is cell `c` (methods
/// outer, parameterizations inner) on replication `r`.
pub fn run_replications(cfg: &BenchConfig) -> Result<Vec<Vec<FitRecord>>> {
    cfg.validate()?;
    let cells = cfg.cells();
    (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let sample = t_sample(&mut replication_rng(cfg.seed, r), &cfg.true_params, cfg.n)?;
            cells.iter().map(|&(m, p)| fit_record(&sample, m, p, cfg)).collect()
        })
        .collect()
}

/// Run the configured replications and summarize each cell.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    let records = run_replications(cfg)?;
    Ok(summarize(cfg, &records))
}

pub fn summarize(cfg: &BenchConfig, records: &[Vec<FitRecord>]) -> BenchReport {
    let cells = cfg
        .cells()
        .iter()
        .enumerate()
        .map(|(c, &(m, p))| {
            let recs: Vec<FitRecord> = records.iter().map(|row| row[c].clone()).collect();
            CellReport::from_records(m, p, &recs)
        })
        .collect();
    BenchReport { config: cfg.clone(), cells }
}

impl BenchReport {
    pub fn cell(&self, method: Method, param: Parameterization) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.method == method && c.parameterization == param)
    }

    fn header_lines(&self) -> Vec<String> {
        let c = &self.config;
        let t = &c.true_params;
        vec![
            format!("orthopar bench-t {}", env!("CARGO_PKG_VERSION")),
            format!("true (mu, sigma, nu) = ({}, {}, {}); n = {}; reps = {}; seed = {}", t.mu(), t.sigma(), t.nu(), c.n, c.reps, c.seed),
            format!(
                "criterion: value_tol = {}, param_tol = {}, max_iter = {}; nu bounds [{}, {}]",
                c.criterion.value_tol, c.criterion.param_tol, c.criterion.max_iter, NU_BOUNDS.0, NU_BOUNDS.1
            ),
            "loglik is the maximized log-likelihood divided by n".into(),
        ]
    }

    /// CSV with `#` header lines, one row per cell and statistic.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for line in self.header_lines() {
            out.push_str("# ");
            out.push_str(&line);
            out.push('\n');
        }
        let timing = self.cells.iter().any(|c| c.time_ms.is_some());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "method",
            "parameterization",
            "statistic",
            "iterations",
            "loglik",
            "mu",
            "sigma",
            "nu",
            "converged_fraction",
        ];
        if timing {
            header.push("time_ms");
        }
        w.write_record(&header).map_err(csv_err)?;
        for cell in &self.cells {
            for stat in STATISTICS {
                let mut row = vec![
                    cell.method.to_string(),
                    cell.parameterization.to_string(),
                    stat.to_string(),
                ];
                for s in [&cell.iterations, &cell.loglik, &cell.mu, &cell.sigma, &cell.nu] {
                    row.push(s.get(stat).to_string());
                }
                row.push(cell.converged_fraction.to_string());
                if timing {
                    row.push(cell.time_ms.as_ref().map(|t| t.get(stat).to_string()).unwrap_or_default());
                }
                w.write_record(&row).map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv writes UTF-8"));
        Ok(out)
    }

    /// Means with standard deviations, then the 2.5 / 50 / 97.5% quantiles.
    pub fn to_markdown(&self) -> String {
        let f = |x: f64| format_sig(x, 6);
        let mut s = String::new();
        for line in self.header_lines() {
            s.push_str(&format!("<!-- {line} -->\n"));
        }
        s.push_str("\n### Means (standard deviations)\n\n");
        s.push_str("| Parameterization | Method | Iterations | Log-likelihood | μ̂ | σ̂ | ν̂ | Converged |\n");
        s.push_str("|---|---|---|---|---|---|---|---|\n");
        for c in &self.cells {
            let ms = |x: &Summary| format!("{} ({})", f(x.mean), f(x.sd));
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                c.parameterization,
                c.method,
                ms(&c.iterations),
                ms(&c.loglik),
                ms(&c.mu),
                ms(&c.sigma),
                ms(&c.nu),
                f(c.converged_fraction)
            ));
        }
        s.push_str("\n### Quantiles (2.5%, 50%, 97.5%)\n\n");
        s.push_str("| Parameterization | Method | Iterations | Log-likelihood | μ̂ | σ̂ | ν̂ |\n");
        s.push_str("|---|---|---|---|---|---|---|\n");
        for c in &self.cells {
            let q = |x: &Summary| format!("({}, {}, {})", f(x.q025), f(x.q500), f(x.q975));
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                c.parameterization,
                c.method,
                q(&c.iterations),
                q(&c.loglik),
                q(&c.mu),
                q(&c.sigma),
                q(&c.nu)
            ));
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_full_precision(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("CSV write failed: {e}"))
}
