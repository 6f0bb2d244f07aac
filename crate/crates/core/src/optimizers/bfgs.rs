use nalgebra::{DMatrix, DVector};

use super::{active_bounds, armijo_search, negligible_step, ConvergenceCriterion, Objective, OptResult};
use crate::error::{Error, Result};

/// BFGS ascent with an inverse-Hessian approximation and Armijo backtracking.
///
/// The approximation starts at the identity and is rescaled by `sᵀy/yᵀy`
/// before the first update. Updates with `sᵀy ≤ 0` are skipped.
pub fn bfgs_max(obj: &Objective, init: &[f64], crit: &ConvergenceCriterion) -> Result<OptResult> {
    if !obj.has_gradient() {
        return Err(Error::InvalidInput("BFGS needs a gradient".into()));
    }
    let d = obj.dim();
    let mut x = obj.check_init(init)?;
    let mut fx = obj.value(&x);
    let mut g = DVector::from_vec(obj.gradient(&x).expect("checked above"));
    let mut h = DMatrix::<f64>::identity(d, d);
    let mut first_update = true;
    let mut out = OptResult::start(&x, fx);
    for _ in 0..crit.max_iter {
        let active = active_bounds(obj, &x, g.as_slice());
        let mut dir = &h * g.map_with_location(|i, _, v| if active[i] { 0.0 } else { v });
        for (i, a) in active.iter().enumerate() {
            if *a {
                dir[i] = 0.0;
            }
        }
        if g.dot(&dir) <= 0.0 {
            h = DMatrix::identity(d, d);
            first_update = true;
            dir = g.map_with_location(|i, _, v| if active[i] { 0.0 } else { v });
        }
        let Some((x_new, f_new)) = armijo_search(obj, &x, fx, g.as_slice(), dir.as_slice()) else {
            out.converged = negligible_step(&x, dir.as_slice(), crit);
            if !out.converged {
                out.message = Some("line search found no acceptable step".into());
            }
            return Ok(out);
        };
        let g_new = DVector::from_vec(obj.gradient(&x_new).expect("checked above"));
        let s = DVector::from_iterator(d, x_new.iter().zip(&x).map(|(a, b)| a - b));
        let y = &g - &g_new;
        let sy = s.dot(&y);
        if sy > 0.0 {
            if first_update {
                h *= sy / y.dot(&y);
                first_update = false;
            }
            let rho = 1.0 / sy;
            let left = DMatrix::identity(d, d) - rho * &s * y.transpose();
            h = &left * &h * left.transpose() + rho * &s * s.transpose();
        }
        let done = crit.is_met(&x, fx, &x_new, f_new);
        x = x_new;
        fx = f_new;
        g = g_new;
        out.record(&x, fx);
        if done {
            out.converged = true;
            return Ok(out);
        }
    }
    out.message = Some(format!("no convergence within {} iterations", crit.max_iter));
    Ok(out)
}
