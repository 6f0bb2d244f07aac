//! Log-gamma, digamma and trigamma for positive real arguments.
//!
//! All three shift the argument upward with the standard recurrences until it
//! is at least [`SHIFT_THRESHOLD`] and then evaluate the asymptotic (Stirling)
//! series. Ten is large enough that the truncated series is below 1e-16.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT_THRESHOLD: f64 = 10.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn check_positive(x: f64, name: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} requires a positive finite argument, got {x}")))
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x, "log_gamma")?;
    Ok(ln_gamma_unchecked(x))
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    Ok(digamma_unchecked(x))
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma")?;
    Ok(trigamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= SHIFT_THRESHOLD {
        return stirling_ln_gamma(x);
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1)); the product stays well inside
    // f64 range for x >= 1e-300 and k <= 10.
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < SHIFT_THRESHOLD {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling_ln_gamma(shifted) - prod.ln()
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r
        * (1.0 / 12.0
            + r2 * (-1.0 / 360.0
                + r2 * (1.0 / 1260.0
                    + r2 * (-1.0 / 1680.0
                        + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 * (1.0 / 156.0)))))));
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

pub(crate) fn digamma_unchecked(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT_THRESHOLD {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let r = 1.0 / y;
    let r2 = r * r;
    let series = r2
        * (1.0 / 12.0
            - r2 * (1.0 / 120.0
                - r2 * (1.0 / 252.0
                    - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32_760.0 - r2 / 12.0))))));
    acc + y.ln() - 0.5 * r - series
}

pub(crate) fn trigamma_unchecked(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT_THRESHOLD {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let r = 1.0 / y;
    let r2 = r * r;
    // 1/y + 1/(2y^2) + sum B_{2k} / y^{2k+1}
    let series = r
        * r2
        * (1.0 / 6.0
            - r2 * (1.0 / 30.0
                - r2 * (1.0 / 42.0 - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
    acc + r + 0.5 * r2 + series
}

/// Inverse of the digamma function on `(0, ∞)`: returns `x` with `ψ(x) = y`.
///
/// Newton iteration on `ψ` starting from Minka's initial guess; digamma is
/// strictly increasing on the positive axis so the root is unique.
pub fn inverse_digamma(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Domain(format!("inverse_digamma requires a finite argument, got {y}")));
    }
    let mut x = if y >= -2.22 { y.exp() + 0.5 } else { -1.0 / (y + EULER_GAMMA) };
    for _ in 0..100 {
        let step = (digamma_unchecked(x) - y) / trigamma_unchecked(x);
        let mut next = x - step;
        if next <= 0.0 {
            next = 0.5 * x;
        }
        let done = (next - x).abs() <= 4.0 * f64::EPSILON * next;
        x = next;
        if done {
            return Ok(x);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-13);
        assert!((log_gamma(10.0).unwrap() - 362_880f64.ln()).abs() < 1e-12);
        // ln Γ(1e-3) = -ln(1e-3) - γ·1e-3 + O(1e-6)
        let small = log_gamma(1e-3).unwrap();
        assert!((small - 6.907_178_885_383_853_7).abs() < 1e-12, "{small}");
    }

    #[test]
    fn log_gamma_large_argument_relative() {
        // ln Γ(1e6) = 12815504.569147612...
        let v = log_gamma(1e6).unwrap();
        assert!(((v - 12_815_504.569_147_612) / v).abs() < 1e-14);
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-12);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(0.5).unwrap() - half).abs() < 1e-12);
    }

    #[test]
    fn trigamma_known_values() {
        assert!((trigamma(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        assert!((trigamma(2.0).unwrap() - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn recurrences_on_grid() {
        let mut x = 0.1;
        while x <= 100.0 {
            let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
            let t = trigamma(x + 1.0).unwrap() - trigamma(x).unwrap() + 1.0 / (x * x);
            assert!(d.abs() < 1e-10, "digamma recurrence at {x}: {d}");
            assert!(t.abs() < 1e-10, "trigamma recurrence at {x}: {t}");
            x += 0.37;
        }
    }

    #[test]
    fn rejects_non_positive() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(log_gamma(bad), Err(Error::Domain(_))));
            assert!(matches!(digamma(bad), Err(Error::Domain(_))));
            assert!(matches!(trigamma(bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn inverse_digamma_round_trip() {
        for &x in &[1e-3, 0.2, 1.0, 1.461_632, 3.5, 40.0, 1e4] {
            let y = digamma(x).unwrap();
            let back = inverse_digamma(y).unwrap();
            assert!(((back - x) / x).abs() < 1e-12, "{x} -> {back}");
        }
    }
}
