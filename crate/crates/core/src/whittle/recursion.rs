use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use super::{block_toeplitz, max_abs, CovSequence, Mat};
use crate::error::{Error, Result};

/// Forward and backward fits of one order.
///
/// `forward[r - 1]` is `Φ_{k,r}` and `backward[r - 1]` is `Φ̃_{k,r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhittleState {
    pub order: usize,
    pub forward: Vec<Mat>,
    pub backward: Vec<Mat>,
    /// Forward residual covariance `Σ_k`.
    pub sigma: Mat,
    /// Backward residual covariance `Σ̃_k`.
    pub sigma_tilde: Mat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Interior forward update `Φ_{k+1,r} = Φ_{k,r} + Φ_{k+1,k+1} Φ̃_{k,k+1-r}`,
/// followed by the corner block itself.
pub fn forward_update(forward: &[Mat], backward: &[Mat], corner: &Mat) -> Vec<Mat> {
    mirror_update(forward, backward, corner)
}

/// Interior backward update `Φ̃_{k+1,r} = Φ̃_{k,r} + Φ̃_{k+1,k+1} Φ_{k,k+1-r}`,
/// followed by the corner block itself.
pub fn backward_update(backward: &[Mat], forward: &[Mat], corner: &Mat) -> Vec<Mat> {
    mirror_update(backward, forward, corner)
}

fn mirror_update(own: &[Mat], other: &[Mat], corner: &Mat) -> Vec<Mat> {
    let k = own.len();
    assert_eq!(other.len(), k, "forward and backward orders differ");
    let mut out: Vec<Mat> = (0..k).map(|r| &own[r] + corner * &other[k - 1 - r]).collect();
    out.push(corner.clone());
    out
}

/// Whittle recursion up to `target`; element `k` of the result is the order-`k`
/// fit, starting with order 0 (no blocks, `Σ_0 = Σ̃_0 = Γ_0`).
pub fn whittle_recursion(covs: &CovSequence, target: usize) -> Result<Vec<WhittleState>> {
    whittle_recursion_counted(covs, target).map(|(s, _)| s)
}

/// As [`whittle_recursion`], also returning the number of m×m block
/// operations (products and factorizations) scaled by `m³`.
pub fn whittle_recursion_counted(covs: &CovSequence, target: usize) -> Result<(Vec<WhittleState>, u64)> {
    if target > covs.p() {
        return Err(Error::InvalidInput(format!("order {target} exceeds the {} stored lags", covs.p())));
    }
    let m = covs.m();
    let unit = (m * m * m) as u64;
    let mut ops = 0u64;
    let pos = covs.gammas();
    let neg: Vec<Mat> = pos.iter().map(|g| g.transpose()).collect();

    let g0 = &pos[0];
    let mut chol = factor(g0, 0)?;
    let mut chol_tilde = chol.clone();
    ops += unit;
    let mut states = vec![WhittleState {
        order: 0,
        forward: vec![],
        backward: vec![],
        sigma: g0.clone(),
        sigma_tilde: g0.clone(),
    }];

    for k in 0..target {
        let cur = &states[k];
        // Lag-(k+1) mismatch of the order-k fits.
        let mut delta = pos[k + 1].clone();
        let mut delta_tilde = neg[k + 1].clone();
        for r in 1..=k {
            delta += &cur.forward[r - 1] * &pos[k + 1 - r];
            delta_tilde += &cur.backward[r - 1] * &neg[k + 1 - r];
        }
        ops += 2 * k as u64 * unit;

        // A Σ̃_k = −Δ and B Σ_k = −Δ̃, solved through the symmetric factors.
        let a = -chol_tilde.solve(&delta.transpose()).transpose();
        let b = -chol.solve(&delta_tilde.transpose()).transpose();
        ops += 2 * unit;

        let forward = forward_update(&cur.forward, &cur.backward, &a);
        let backward = backward_update(&cur.backward, &cur.forward, &b);
        ops += 2 * k as u64 * unit;

        let sigma = symmetrize(&cur.sigma + &a * &delta_tilde);
        let sigma_tilde = symmetrize(&cur.sigma_tilde + &b * &delta);
        ops += 2 * unit;
        chol = factor(&sigma, k + 1)?;
        chol_tilde = factor(&sigma_tilde, k + 1)?;
        ops += 2 * unit;

        states.push(WhittleState { order: k + 1, forward, backward, sigma, sigma_tilde });
    }
    Ok((states, ops))
}

fn symmetrize(a: Mat) -> Mat {
    (&a + a.transpose()) * 0.5
}

/// Cholesky factor of a residual covariance, rejecting numerically singular ones.
fn factor(s: &Mat, order: usize) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    let scale = s.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let fail = |detail: String| Error::NotPositiveDefinite { order, detail };
    let c = Cholesky::new(s.clone()).ok_or_else(|| fail("Cholesky factorization failed".into()))?;
    let min_pivot = c.l_dirty().diagonal().iter().fold(f64::INFINITY, |a, v| a.min(v * v));
    if !(min_pivot > 1e-14 * scale) {
        return Err(fail(format!("residual covariance is numerically singular (pivot {min_pivot:e})")));
    }
    Ok(c)
}

/// Direct solve of the order-`p` Yule–Walker block system, the oracle for the
/// recursion. Returns `Φ_1 … Φ_p` or `Φ̃_1 … Φ̃_p`.
pub fn yule_walker_dense(covs: &CovSequence, order: usize, direction: Direction) -> Result<Vec<Mat>> {
    if order == 0 {
        return Ok(vec![]);
    }
    if order > covs.p() {
        return Err(Error::InvalidInput(format!("order {order} exceeds the {} stored lags", covs.p())));
    }
    let m = covs.m();
    let t = block_toeplitz(covs, order)?;
    // X T = −R  ⇔  Tᵀ Xᵀ = −Rᵀ.
    let mut rhs = Mat::zeros(m, order * m);
    for s in 1..=order {
        let g = match direction {
            Direction::Forward => covs.gamma(s as i64),
            Direction::Backward => covs.gamma(s as i64 - order as i64 - 1),
        };
        rhs.view_mut((0, (s - 1) * m), (m, m)).copy_from(&g);
    }
    let sol = t
        .transpose()
        .lu()
        .solve(&(-rhs.transpose()))
        .ok_or_else(|| Error::Conditioning(format!("order-{order} block Toeplitz matrix is singular")))?
        .transpose();
    let blocks: Vec<Mat> = (0..order).map(|i| sol.view((0, i * m), (m, m)).into_owned()).collect();
    Ok(match direction {
        Direction::Forward => blocks,
        // The backward system lists Φ̃_p first.
        Direction::Backward => blocks.into_iter().rev().collect(),
    })
}

/// Largest absolute entry of the forward and backward Yule–Walker residuals
/// `Σ_r Φ_r Γ_{s-r} + Γ_s` and `Σ_r Φ̃_r Γ_{r-s} + Γ_{-s}`, `s = 1 … k`.
pub fn yule_walker_residuals(covs: &CovSequence, state: &WhittleState) -> (f64, f64) {
    let k = state.order as i64;
    let mut fwd = 0.0f64;
    let mut bwd = 0.0f64;
    for s in 1..=k {
        let mut f = covs.gamma(s);
        let mut b = covs.gamma(-s);
        for r in 1..=k {
            f += &state.forward[r as usize - 1] * covs.gamma(s - r);
            b += &state.backward[r as usize - 1] * covs.gamma(r - s);
        }
        fwd = fwd.max(max_abs(&f));
        bwd = bwd.max(max_abs(&b));
    }
    (fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::super::max_rel_diff;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn white_noise_gives_zero_blocks() {
        let g0 = Mat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let seq = CovSequence::white_noise(g0.clone(), 4).unwrap();
        for st in whittle_recursion(&seq, 4).unwrap() {
            assert!(st.forward.iter().chain(&st.backward).all(|b| b.iter().all(|v| *v == 0.0)));
            assert_eq!(st.sigma, g0);
            assert_eq!(st.sigma_tilde, g0);
        }
    }

    #[test]
    fn scalar_geometric_sequence() {
        let rho = 0.6;
        let seq = CovSequence::scalar_geometric(rho, 3).unwrap();
        let st = whittle_recursion(&seq, 3).unwrap();
        assert!((st[1].forward[0][(0, 0)] + rho).abs() < 1e-15);
        assert!((st[1].sigma[(0, 0)] - (1.0 - rho * rho)).abs() < 1e-15);
        // An AR(1) sequence has no higher partial autocorrelation.
        assert!(st[3].forward[2][(0, 0)].abs() < 1e-15);
        assert!((st[3].forward[0][(0, 0)] + rho).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_solve_at_every_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let seq = CovSequence::random_stable(&mut rng, 2, 5).unwrap();
        let states = whittle_recursion(&seq, 5).unwrap();
        for st in &states[1..] {
            let f = yule_walker_dense(&seq, st.order, Direction::Forward).unwrap();
            let b = yule_walker_dense(&seq, st.order, Direction::Backward).unwrap();
            assert!(max_rel_diff(&st.forward, &f) < 1e-10);
            assert!(max_rel_diff(&st.backward, &b) < 1e-10);
            let (rf, rb) = yule_walker_residuals(&seq, st);
            assert!(rf < 1e-10 && rb < 1e-10, "{rf} {rb}");
        }
    }

    #[test]
    fn one_block_dense_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq = CovSequence::random_stable(&mut rng, 3, 1).unwrap();
        let f = yule_walker_dense(&seq, 1, Direction::Forward).unwrap();
        let expect = -seq.gamma(1) * seq.gamma(0).try_inverse().unwrap();
        assert!(max_rel_diff(&f, &[expect]) < 1e-12);
    }

    #[test]
    fn reversible_sequence_forward_equals_backward() {
        // Symmetric lags make the process time-reversible.
        let g = [1.0, 0.5, 0.2]
            .iter()
            .map(|&c| Mat::from_row_slice(2, 2, &[c * 2.0, c * 0.3, c * 0.3, c]))
            .collect();
        let seq = CovSequence::new(g).unwrap();
        let f = yule_walker_dense(&seq, 2, Direction::Forward).unwrap();
        let b = yule_walker_dense(&seq, 2, Direction::Backward).unwrap();
        assert!(max_rel_diff(&f, &b) < 1e-12);
    }

    #[test]
    fn residual_covariances_decrease() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq = CovSequence::random_stable(&mut rng, 3, 6).unwrap();
        let st = whittle_recursion(&seq, 6).unwrap();
        for w in st.windows(2) {
            let diff = &w[0].sigma - &w[1].sigma;
            let min_eig = diff.symmetric_eigenvalues().min();
            assert!(min_eig > -1e-12, "{min_eig}");
        }
    }

    #[test]
    fn zero_corner_keeps_lower_order_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let seq = CovSequence::random_stable(&mut rng, 2, 3).unwrap();
        let st = &whittle_recursion(&seq, 3).unwrap()[3];
        let zero = Mat::zeros(2, 2);
        let next = forward_update(&st.forward, &st.backward, &zero);
        assert_eq!(&next[..3], &st.forward[..]);
        let next = backward_update(&st.backward, &st.forward, &zero);
        assert_eq!(&next[..3], &st.backward[..]);
    }

    #[test]
    fn order_beyond_lags_is_rejected() {
        let seq = CovSequence::scalar_geometric(0.5, 2).unwrap();
        assert!(whittle_recursion(&seq, 3).is_err());
        assert!(yule_walker_dense(&seq, 3, Direction::Forward).is_err());
    }

    #[test]
    fn operation_count_is_quadratic_in_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let seq = CovSequence::random_stable(&mut rng, 2, 32).unwrap();
        let c16 = whittle_recursion_counted(&seq, 16).unwrap().1 as f64;
        let c32 = whittle_recursion_counted(&seq, 32).unwrap().1 as f64;
        assert!(c32 / c16 <= 4.5, "{}", c32 / c16);
    }
}
