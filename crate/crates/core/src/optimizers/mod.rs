//! Maximizers used for the t-distribution likelihood: cyclic coordinate
//! search, BFGS and Fisher scoring, all with box constraints.

mod bfgs;
mod coordinate;
mod scoring;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bfgs::bfgs_max;
pub use coordinate::coordinate_iterative_max;
pub use scoring::{fisher_scoring_max, CONDITION_LIMIT};

use crate::distributions::FisherMatrix;
use crate::error::{Error, Result};
use crate::numerics::Interval;

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type FisherFn = Arc<dyn Fn(&[f64]) -> Result<FisherMatrix> + Send + Sync>;

/// Armijo sufficient-increase constant.
pub const ARMIJO_C: f64 = 1e-4;
/// Step shrink factor in backtracking.
pub const BACKTRACK: f64 = 0.5;
/// Smallest step length tried before a line search gives up.
pub const MIN_STEP: f64 = 1e-12;
/// Golden-section tolerance, relative to the bracket's natural scale.
pub const COORD_TOL: f64 = 1e-10;

/// Search interval for one coordinate of [`coordinate_iterative_max`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LineBracket {
    /// `x ± width·|x[scale_index]|` around the current value.
    Relative { scale_index: usize, width: f64 },
    /// `ln x ± width`, searched in log space; the coordinate must be positive.
    Log { width: f64 },
    /// A fixed interval.
    Fixed(Interval),
}

/// A function to maximize with optional derivative information.
#[derive(Clone)]
pub struct Objective {
    dim: usize,
    value: ValueFn,
    gradient: Option<GradientFn>,
    fisher: Option<FisherFn>,
    bounds: Vec<Option<Interval>>,
    brackets: Vec<Option<LineBracket>>,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("dim", &self.dim)
            .field("gradient", &self.gradient.is_some())
            .field("fisher", &self.fisher.is_some())
            .field("bounds", &self.bounds)
            .field("brackets", &self.brackets)
            .finish()
    }
}

impl Objective {
    pub fn new(dim: usize, value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            value: Arc::new(value),
            gradient: None,
            fisher: None,
            bounds: vec![None; dim],
            brackets: vec![None; dim],
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_fisher(mut self, f: impl Fn(&[f64]) -> Result<FisherMatrix> + Send + Sync + 'static) -> Self {
        self.fisher = Some(Arc::new(f));
        self
    }

    pub fn with_bounds(mut self, index: usize, bounds: Interval) -> Self {
        self.bounds[index] = Some(bounds);
        self
    }

    pub fn with_bracket(mut self, index: usize, bracket: LineBracket) -> Self {
        self.brackets[index] = Some(bracket);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &[Option<Interval>] {
        &self.bounds
    }

    /// Objective value; NaN is reported as `−∞`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let v = (self.value)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(x))
    }

    pub fn fisher(&self, x: &[f64]) -> Option<Result<FisherMatrix>> {
        self.fisher.as_ref().map(|f| f(x))
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn has_fisher(&self) -> bool {
        self.fisher.is_some()
    }

    /// Clamp every bounded coordinate into its interval.
    pub fn project(&self, x: &mut [f64]) {
        for (v, b) in x.iter_mut().zip(&self.bounds) {
            if let Some(iv) = b {
                *v = iv.clamp(*v);
            }
        }
    }

    fn check_init(&self, init: &[f64]) -> Result<Vec<f64>> {
        if init.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "initial point has {} coordinates, objective has {}",
                init.len(),
                self.dim
            )));
        }
        if init.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("initial point must be finite".into()));
        }
        let mut x = init.to_vec();
        self.project(&mut x);
        Ok(x)
    }
}

/// Stopping rule shared by all three maximizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCriterion {
    /// Absolute change in the objective between iterations.
    pub value_tol: f64,
    /// Largest `|Δx_i| / max(1, |x_i|)` between iterations.
    pub param_tol: f64,
    pub max_iter: usize,
}

impl Default for ConvergenceCriterion {
    fn default() -> Self {
        Self { value_tol: 1e-10, param_tol: 1e-8, max_iter: 500 }
    }
}

impl ConvergenceCriterion {
    pub fn new(value_tol: f64, param_tol: f64, max_iter: usize) -> Result<Self> {
        if !(value_tol > 0.0 && param_tol > 0.0) || max_iter == 0 {
            return Err(Error::InvalidInput("tolerances must be positive and max_iter at least one".into()));
        }
        Ok(Self { value_tol, param_tol, max_iter })
    }

    fn param_change(old: &[f64], new: &[f64]) -> f64 {
        old.iter().zip(new).map(|(a, b)| (b - a).abs() / b.abs().max(1.0)).fold(0.0, f64::max)
    }

    /// Whether the step `old → new` meets both tolerances.
    pub fn is_met(&self, old: &[f64], f_old: f64, new: &[f64], f_new: f64) -> bool {
        let dv = (f_new - f_old).abs();
        // An unchanged −∞ (or +∞) value counts as no change.
        let dv = if dv.is_nan() { 0.0 } else { dv };
        dv < self.value_tol && Self::param_change(old, new) < self.param_tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Starting point followed by one record per iteration.
    pub trace: Vec<TraceRecord>,
    /// Iterations where scoring fell back to gradient ascent.
    pub fallbacks: usize,
    /// Why the run stopped early, if it did.
    pub message: Option<String>,
}

impl OptResult {
    fn start(x: &[f64], value: f64) -> Self {
        Self {
            argmax: x.to_vec(),
            value,
            iterations: 0,
            converged: false,
            trace: vec![TraceRecord { params: x.to_vec(), value }],
            fallbacks: 0,
            message: None,
        }
    }

    fn record(&mut self, x: &[f64], value: f64) {
        self.iterations += 1;
        self.argmax = x.to_vec();
        self.value = value;
        self.trace.push(TraceRecord { params: x.to_vec(), value });
    }
}

/// Backtracking search from `x` along `dir`, projecting trial points.
///
/// Accepts the first `α ∈ {1, ½, ¼, …}` with `f(x_α) ≥ f(x) + c·gᵀ(x_α − x)`
/// and `f(x_α) ≥ f(x)`. Returns `None` when α falls below [`MIN_STEP`].
fn armijo_search(obj: &Objective, x: &[f64], fx: f64, grad: &[f64], dir: &[f64]) -> Option<(Vec<f64>, f64)> {
    let mut alpha = 1.0;
    while alpha >= MIN_STEP {
        let mut trial: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi + alpha * di).collect();
        obj.project(&mut trial);
        let ft = obj.value(&trial);
        let slope: f64 = grad.iter().zip(trial.iter().zip(x)).map(|(g, (t, xi))| g * (t - xi)).sum();
        if ft.is_finite() && ft >= fx && ft >= fx + ARMIJO_C * slope {
            return Some((trial, ft));
        }
        alpha *= BACKTRACK;
    }
    None
}

/// Coordinates sitting on a bound with the gradient pointing outward; they
/// are held fixed for the step.
pub(super) fn active_bounds(obj: &Objective, x: &[f64], g: &[f64]) -> Vec<bool> {
    obj.bounds()
        .iter()
        .zip(x.iter().zip(g))
        .map(|(b, (xi, gi))| match b {
            Some(iv) => (*xi <= iv.lo() && *gi < 0.0) || (*xi >= iv.hi() && *gi > 0.0),
            None => false,
        })
        .collect()
}

/// True when the step `dir` is already below the parameter tolerance.
fn negligible_step(x: &[f64], dir: &[f64], crit: &ConvergenceCriterion) -> bool {
    x.iter().zip(dir).all(|(xi, di)| di.abs() / xi.abs().max(1.0) < crit.param_tol)
}
