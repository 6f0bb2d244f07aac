use super::{max_abs, whittle_recursion, whittle_recursion_counted, CovSequence, Mat};
use crate::error::{Error, Result};

/// The `p·m` square block Toeplitz matrix with blocks `T[i][j] = Γ_{j-i}`.
pub fn block_toeplitz(covs: &CovSequence, p: usize) -> Result<Mat> {
    if p == 0 || p > covs.p() + 1 {
        return Err(Error::InvalidInput(format!("block order {p} needs 1 ≤ p ≤ {}", covs.p() + 1)));
    }
    let m = covs.m();
    let mut t = Mat::zeros(p * m, p * m);
    for i in 0..p {
        for j in 0..p {
            t.view_mut((i * m, j * m), (m, m)).copy_from(&covs.gamma(j as i64 - i as i64));
        }
    }
    Ok(t)
}

/// Inverse of the `p·m` block Toeplitz matrix from the order `p − 1` Whittle fits.
pub fn block_toeplitz_inverse(covs: &CovSequence, p: usize) -> Result<Mat> {
    block_toeplitz_inverse_counted(covs, p).map(|(t, _)| t)
}

/// As [`block_toeplitz_inverse`], also returning the block operation count
/// (recursion included) in units of `m³`.
///
/// With `a = (I, Φ_1, …, Φ_{p-1})` and `b = (Φ̃_{p-1}, …, Φ̃_1, I)` from order
/// `p − 1`, the inverse `M` satisfies `M[0][j] = Σ⁻¹ a_j` and
/// `M[i+1][j+1] = M[i][j] + a_{i+1}ᵀ Σ⁻¹ a_{j+1} − b_iᵀ Σ̃⁻¹ b_j`.
pub fn block_toeplitz_inverse_counted(covs: &CovSequence, p: usize) -> Result<(Mat, u64)> {
    if p == 0 || p > covs.p() + 1 {
        return Err(Error::InvalidInput(format!("block order {p} needs 1 ≤ p ≤ {}", covs.p() + 1)));
    }
    let m = covs.m();
    let unit = (m * m * m) as u64;
    let (states, mut ops) = whittle_recursion_counted(covs, p - 1)?;
    let st = &states[p - 1];
    let eye = Mat::identity(m, m);

    let a: Vec<Mat> = std::iter::once(eye.clone()).chain(st.forward.iter().cloned()).collect();
    let b: Vec<Mat> = st.backward.iter().rev().cloned().chain(std::iter::once(eye)).collect();
    let sigma_inv = spd_inverse(&st.sigma, p - 1)?;
    let sigma_tilde_inv = spd_inverse(&st.sigma_tilde, p - 1)?;
    let sa: Vec<Mat> = a.iter().map(|x| &sigma_inv * x).collect();
    let sb: Vec<Mat> = b.iter().map(|x| &sigma_tilde_inv * x).collect();
    ops += (2 * p as u64 + 2) * unit;

    let mut out = Mat::zeros(p * m, p * m);
    for j in 0..p {
        out.view_mut((0, j * m), (m, m)).copy_from(&sa[j]);
        out.view_mut((j * m, 0), (m, m)).copy_from(&sa[j].transpose());
    }
    for i in 0..p - 1 {
        for j in 0..p - 1 {
            let prev = out.view((i * m, j * m), (m, m)).into_owned();
            let next = prev + a[i + 1].transpose() * &sa[j + 1] - b[i].transpose() * &sb[j];
            out.view_mut(((i + 1) * m, (j + 1) * m), (m, m)).copy_from(&next);
        }
    }
    ops += 2 * ((p - 1) * (p - 1)) as u64 * unit;
    Ok((out, ops))
}

fn spd_inverse(s: &Mat, order: usize) -> Result<Mat> {
    nalgebra::Cholesky::new(s.clone()).map(|c| c.inverse()).ok_or_else(|| Error::NotPositiveDefinite {
        order,
        detail: "residual covariance is not positive definite".into(),
    })
}

/// Checks the local-orthogonality identity
/// `∂Φ_{p+1,r}/∂Φ_{p+1,p+1,(u,v)} = E_{u,v} Φ̃_{p,p+1-r}` for every `(u, v)`:
/// the right side comes from the recursion's backward blocks, the left side
/// from a dense solve of `−E_{u,v} (Γ_{-p} ⋯ Γ_{-1}) T⁻¹`. Returns the largest
/// absolute entry difference.
pub fn check_var_orthogonality(covs: &CovSequence, p: usize) -> Result<f64> {
    if p == 0 {
        return Ok(0.0);
    }
    let m = covs.m();
    let states = whittle_recursion(covs, p)?;
    let st = &states[p];
    let t = block_toeplitz(covs, p)?;
    let mut lags = Mat::zeros(m, p * m);
    for s in 0..p {
        lags.view_mut((0, s * m), (m, m)).copy_from(&covs.gamma(s as i64 - p as i64));
    }
    // (Γ_{-p} ⋯ Γ_{-1}) T⁻¹ by solving Tᵀ Yᵀ = (Γ_{-p} ⋯ Γ_{-1})ᵀ.
    let y = t
        .transpose()
        .lu()
        .solve(&lags.transpose())
        .ok_or_else(|| Error::Conditioning(format!("order-{p} block Toeplitz matrix is singular")))?
        .transpose();
    let mut backward_row = Mat::zeros(m, p * m);
    for r in 1..=p {
        backward_row.view_mut((0, (r - 1) * m), (m, m)).copy_from(&st.backward[p - r]);
    }
    let mut worst = 0.0f64;
    for u in 0..m {
        for v in 0..m {
            let mut e = Mat::zeros(m, m);
            e[(u, v)] = 1.0;
            let dense = -(&e * &y);
            let recursive = &e * &backward_row;
            worst = worst.max(max_abs(&(dense - recursive)));
        }
    }
    Ok(worst)
}
