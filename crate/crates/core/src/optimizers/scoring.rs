use nalgebra::DVector;

use super::{active_bounds, armijo_search, negligible_step, ConvergenceCriterion, Objective, OptResult};
use crate::error::{Error, Result};

/// Condition number above which scoring falls back to gradient ascent.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative off-diagonal size below which the information is treated as
/// diagonal and inverted coordinate by coordinate.
const DIAGONAL_REL: f64 = 1e-6;

/// Fisher scoring with backtracking: `x ← Π(x + α I⁻¹ g)`.
///
/// The objective is expected to be a per-observation log-likelihood so that
/// `I` is the per-observation information. A diagonal `I` is inverted
/// per coordinate. Otherwise, when `I` is singular or its condition number
/// exceeds [`CONDITION_LIMIT`], the iteration steps along `g` instead and the
/// event is counted in `fallbacks`. Coordinates held at a bound by an
/// outward gradient are fixed and the system is solved for the rest.
pub fn fisher_scoring_max(obj: &Objective, init: &[f64], crit: &ConvergenceCriterion) -> Result<OptResult> {
    if !(obj.has_gradient() && obj.has_fisher()) {
        return Err(Error::InvalidInput("Fisher scoring needs a gradient and Fisher information".into()));
    }
    let mut x = obj.check_init(init)?;
    let mut fx = obj.value(&x);
    let mut out = OptResult::start(&x, fx);
    for _ in 0..crit.max_iter {
        let g = obj.gradient(&x).expect("checked above");
        let active = active_bounds(obj, &x, &g);
        let dir = match obj.fisher(&x).expect("checked above").and_then(|f| scoring_direction(&f, &g, &active)) {
            Ok(d) => d,
            Err(e) => {
                out.fallbacks += 1;
                out.message = Some(format!("gradient step used: {e}"));
                g.iter().zip(&active).map(|(gi, a)| if *a { 0.0 } else { *gi }).collect()
            }
        };
        let Some((x_new, f_new)) = armijo_search(obj, &x, fx, &g, &dir) else {
            out.converged = negligible_step(&x, &dir, crit);
            if !out.converged {
                out.message = Some("line search found no acceptable step".into());
            }
            return Ok(out);
        };
        let done = crit.is_met(&x, fx, &x_new, f_new);
        x = x_new;
        fx = f_new;
        out.record(&x, fx);
        if done {
            out.converged = true;
            return Ok(out);
        }
    }
    out.message = Some(format!("no convergence within {} iterations", crit.max_iter));
    Ok(out)
}

fn scoring_direction(info: &crate::distributions::FisherMatrix, g: &[f64], active: &[bool]) -> Result<Vec<f64>> {
    let m = info.entries();
    let mut dir = vec![0.0; g.len()];
    if info.is_diagonal(DIAGONAL_REL) {
        for (i, gi) in g.iter().enumerate().filter(|(i, _)| !active[*i]) {
            let d = m[(i, i)];
            if !(d > 0.0) {
                return Err(Error::Conditioning(format!("information entry {i} is not positive")));
            }
            dir[i] = gi / d;
        }
        return Ok(dir);
    }
    let cond = info.condition_number();
    if !(cond <= CONDITION_LIMIT) {
        return Err(Error::Conditioning(format!("information condition number {cond:e}")));
    }
    let free: Vec<usize> = (0..g.len()).filter(|&i| !active[i]).collect();
    if free.is_empty() {
        return Ok(dir);
    }
    let sub = m.select_rows(&free).select_columns(&free);
    let chol = sub.cholesky().ok_or_else(|| Error::Conditioning("information is not positive definite".into()))?;
    let step = chol.solve(&DVector::from_iterator(free.len(), free.iter().map(|&i| g[i])));
    for (k, &i) in free.iter().enumerate() {
        dir[i] = step[k];
    }
    Ok(dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::FisherMatrix;
    use nalgebra::DMatrix;

    #[test]
    fn gaussian_location_single_step() {
        let data = [1.0, 2.5, -0.3, 4.1];
        let mean = data.iter().sum::<f64>() / 4.0;
        let obj = Objective::new(1, move |x| -data.iter().map(|d| (d - x[0]).powi(2)).sum::<f64>() / 8.0)
            .with_gradient(move |x| vec![data.iter().map(|d| d - x[0]).sum::<f64>() / 4.0])
            .with_fisher(|_| FisherMatrix::new(vec!["mu"], DMatrix::from_element(1, 1, 1.0)));
        let r = fisher_scoring_max(&obj, &[10.0], &ConvergenceCriterion::default()).unwrap();
        assert!(r.converged);
        assert!((r.trace[1].params[0] - mean).abs() < 1e-14);
    }

    #[test]
    fn ill_conditioned_information_falls_back() {
        let obj = Objective::new(2, |x| -(x[0] - 1.0).powi(2) - (x[1] - 2.0).powi(2))
            .with_gradient(|x| vec![-2.0 * (x[0] - 1.0), -2.0 * (x[1] - 2.0)])
            .with_fisher(|_| FisherMatrix::new(vec!["a", "b"], DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-14])));
        let r = fisher_scoring_max(&obj, &[0.0, 0.0], &ConvergenceCriterion::default()).unwrap();
        assert!(r.fallbacks > 0);
        assert!((r.argmax[0] - 1.0).abs() < 1e-6 && (r.argmax[1] - 2.0).abs() < 1e-6);
        for w in r.trace.windows(2) {
            assert!(w[1].value >= w[0].value);
        }
    }

    #[test]
    fn full_matrix_newton_on_quadratic() {
        let obj = Objective::new(2, |x| {
            let (u, v) = (x[0] - 1.0, x[1] + 1.0);
            -0.5 * (3.0 * u * u + 2.0 * u * v + 2.0 * v * v)
        })
        .with_gradient(|x| {
            let (u, v) = (x[0] - 1.0, x[1] + 1.0);
            vec![-(3.0 * u + v), -(u + 2.0 * v)]
        })
        .with_fisher(|_| FisherMatrix::new(vec!["a", "b"], DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0])));
        let r = fisher_scoring_max(&obj, &[7.0, 5.0], &ConvergenceCriterion::default()).unwrap();
        assert!((r.trace[1].params[0] - 1.0).abs() < 1e-12);
        assert!((r.trace[1].params[1] + 1.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn active_bound_is_held_fixed() {
        // Unconstrained optimum (1, −1); with y ≥ 0 the maximizer is (2/3, 0).
        let obj = Objective::new(2, |x| {
            let (u, v) = (x[0] - 1.0, x[1] + 1.0);
            -0.5 * (3.0 * u * u + 2.0 * u * v + 2.0 * v * v)
        })
        .with_gradient(|x| {
            let (u, v) = (x[0] - 1.0, x[1] + 1.0);
            vec![-(3.0 * u + v), -(u + 2.0 * v)]
        })
        .with_fisher(|_| FisherMatrix::new(vec!["a", "b"], DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0])))
        .with_bounds(1, crate::numerics::Interval::new(0.0, 5.0).unwrap());
        let r = fisher_scoring_max(&obj, &[3.0, 2.0], &ConvergenceCriterion::default()).unwrap();
        assert!(r.converged);
        assert!((r.argmax[0] - 2.0 / 3.0).abs() < 1e-9, "{:?}", r.argmax);
        assert_eq!(r.argmax[1], 0.0);
    }
}
