use super::Interval;
use crate::error::{Error, Result};

/// Iteration cap for [`golden_section_max`].
pub const GOLDEN_MAX_ITER: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 - 1) / 2

/// Golden-section search for the maximum of a unimodal `f` on `bracket`.
///
/// Returns `(argmax, max)`. The bracket is shrunk until its half-width is at
/// most `tol`; the midpoint is then compared against both endpoints so a
/// maximum sitting on the boundary is returned exactly.
pub fn golden_section_max<F>(mut f: F, bracket: Interval, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("golden-section tolerance must be positive, got {tol}")));
    }
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let (lo, hi) = (bracket.lo(), bracket.hi());
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    let mut iter = 0;
    while 0.5 * (b - a) > tol && iter < GOLDEN_MAX_ITER {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
        iter += 1;
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, eval(mid));
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    for x in [lo, hi] {
        let v = eval(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}
