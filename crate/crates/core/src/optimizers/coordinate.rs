use super::{ConvergenceCriterion, LineBracket, Objective, OptResult, COORD_TOL};
use crate::error::Result;
use crate::numerics::{golden_section_max, Interval};

/// Default half-width multiplier for unbracketed, unbounded coordinates.
const DEFAULT_WIDTH: f64 = 10.0;

/// Cyclic coordinate ascent: each iteration maximizes every coordinate in
/// turn by golden-section search with the others held fixed.
///
/// A coordinate move is kept only if it strictly increases the objective, so
/// the trace is non-decreasing.
pub fn coordinate_iterative_max(obj: &Objective, init: &[f64], crit: &ConvergenceCriterion) -> Result<OptResult> {
    let mut x = obj.check_init(init)?;
    let mut fx = obj.value(&x);
    let mut out = OptResult::start(&x, fx);
    for _ in 0..crit.max_iter {
        let prev = x.clone();
        let f_prev = fx;
        for i in 0..obj.dim() {
            if let Some((xi, fi)) = line_max(obj, &x, i)? {
                if fi > fx {
                    x[i] = xi;
                    fx = fi;
                }
            }
        }
        out.record(&x, fx);
        if crit.is_met(&prev, f_prev, &x, fx) {
            out.converged = true;
            return Ok(out);
        }
    }
    out.message = Some(format!("no convergence within {} iterations", crit.max_iter));
    Ok(out)
}

/// Maximize coordinate `i` of `x`; `None` when the bracket is empty.
fn line_max(obj: &Objective, x: &[f64], i: usize) -> Result<Option<(f64, f64)>> {
    let bound = obj.bounds()[i];
    let bracket = obj.brackets[i].unwrap_or(match bound {
        Some(b) => LineBracket::Fixed(b),
        None => LineBracket::Relative { scale_index: i, width: DEFAULT_WIDTH },
    });
    let mut trial = x.to_vec();
    let mut slice = |v: f64| {
        trial[i] = v;
        obj.value(&trial)
    };
    match bracket {
        LineBracket::Log { width } => {
            let u = x[i].ln();
            let (mut lo, mut hi) = (u - width, u + width);
            if let Some(b) = bound {
                if b.lo() > 0.0 {
                    lo = lo.max(b.lo().ln());
                }
                hi = hi.min(b.hi().ln());
            }
            if !(lo < hi) {
                return Ok(None);
            }
            let (u_best, f_best) = golden_section_max(|u| slice(u.exp()), Interval::new(lo, hi)?, COORD_TOL)?;
            Ok(Some((u_best.exp(), f_best)))
        }
        LineBracket::Relative { scale_index, width } => {
            let scale = if scale_index == i { x[i].abs().max(1.0) } else { x[scale_index].abs() };
            if !(scale > 0.0 && scale.is_finite()) {
                return Ok(None);
            }
            let half = width * scale;
            let iv = clip(Interval::new(x[i] - half, x[i] + half)?, bound);
            match iv {
                Some(iv) => Ok(Some(golden_section_max(&mut slice, iv, COORD_TOL * scale)?)),
                None => Ok(None),
            }
        }
        LineBracket::Fixed(iv) => match clip(iv, bound) {
            Some(iv) => {
                let tol = COORD_TOL * iv.lo().abs().max(iv.hi().abs()).max(1.0);
                Ok(Some(golden_section_max(&mut slice, iv, tol)?))
            }
            None => Ok(None),
        },
    }
}

fn clip(iv: Interval, bound: Option<Interval>) -> Option<Interval> {
    match bound {
        Some(b) => iv.intersect(&b),
        None => Some(iv),
    }
}
