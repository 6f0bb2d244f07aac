/// Default relative step for central differences, `ε^{1/3}`.
pub const DEFAULT_FD_STEP: f64 = 6.055_454_452_393_343e-6;

/// Central-difference gradient of `f` at `x`.
///
/// Coordinate `i` uses the step `h · max(1, |x_i|)`.
pub fn finite_diff_gradient<F>(f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let step = h * x[i].abs().max(1.0);
            probe[i] = x[i] + step;
            let up = f(&probe);
            probe[i] = x[i] - step;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}
