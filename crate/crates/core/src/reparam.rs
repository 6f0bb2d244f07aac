//! Orthogonal reparameterizations and numerical checks of the orthogonality
//! equations `Σ_r I_{γr,γs} ∂γ̄_r/∂ψ_i = −I_{ψi,γs}`.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::distributions::{
    gamma_family_fisher, t_fisher_info, t_shape_integrals, FisherMatrix, GenGammaParams, TParams, TwoSampleGammaParams,
    TwoSampleKind,
};
use crate::error::{Error, Result};
use crate::numerics::{adaptive_quadrature, digamma, inverse_digamma, Domain, Interval};

/// `(ψ, γ) → λ` or `(ψ, λ) → γ`.
pub type MapFn = Arc<dyn Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// Fisher information at a point given in the spec's natural parameter order.
pub type FisherProvider = Arc<dyn Fn(&[f64]) -> Result<FisherMatrix> + Send + Sync>;

/// A reparameterization `(ψ, γ) ↔ (ψ, λ)`.
///
/// Points are given in `params` order; `interest` and `nuisance` pick the ψ
/// and γ coordinates out of it.
#[derive(Clone)]
pub struct ReparamSpec {
    name: String,
    params: Vec<String>,
    interest: Vec<usize>,
    nuisance: Vec<usize>,
    orthogonal: Vec<String>,
    forward: MapFn,
    inverse: MapFn,
}

impl fmt::Debug for ReparamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReparamSpec")
            .field("name", &self.name)
            .field("interest", &self.interest_names())
            .field("nuisance", &self.nuisance_names())
            .field("orthogonal", &self.orthogonal)
            .finish()
    }
}

impl ReparamSpec {
    pub fn new(
        name: &str,
        params: &[&str],
        interest: &[&str],
        nuisance: &[&str],
        orthogonal: &[&str],
        forward: MapFn,
        inverse: MapFn,
    ) -> Result<Self> {
        let find = |n: &&str| {
            params
                .iter()
                .position(|p| p == n)
                .ok_or_else(|| Error::InvalidInput(format!("unknown parameter {n} in spec {name}")))
        };
        let interest = interest.iter().map(find).collect::<Result<Vec<_>>>()?;
        let nuisance = nuisance.iter().map(find).collect::<Result<Vec<_>>>()?;
        if interest.len() + nuisance.len() != params.len() || interest.iter().any(|i| nuisance.contains(i)) {
            return Err(Error::InvalidInput(format!("spec {name} must partition its parameters")));
        }
        if orthogonal.len() != nuisance.len() {
            return Err(Error::InvalidInput(format!("spec {name} needs one orthogonal parameter per nuisance")));
        }
        Ok(Self {
            name: name.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
            interest,
            nuisance,
            orthogonal: orthogonal.iter().map(|s| s.to_string()).collect(),
            forward,
            inverse,
        })
    }

    /// The same partition with `λ = γ`; the nuisance keeps its own name.
    pub fn identity(&self) -> Self {
        let id: MapFn = Arc::new(|_psi: &[f64], x: &[f64]| Ok(x.to_vec()));
        Self {
            name: format!("{}-identity", self.name),
            orthogonal: self.nuisance_names(),
            forward: id.clone(),
            inverse: id,
            ..self.clone()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn interest_names(&self) -> Vec<String> {
        self.interest.iter().map(|&i| self.params[i].clone()).collect()
    }

    pub fn nuisance_names(&self) -> Vec<String> {
        self.nuisance.iter().map(|&i| self.params[i].clone()).collect()
    }

    pub fn orthogonal_names(&self) -> &[String] {
        &self.orthogonal
    }

    /// Split a natural-order point into `(ψ, γ)`.
    pub fn split(&self, point: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if point.len() != self.params.len() {
            return Err(Error::InvalidInput(format!(
                "spec {} expects {} parameters ({}), got {}",
                self.name,
                self.params.len(),
                self.params.join(","),
                point.len()
            )));
        }
        if let Some(bad) = point.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite parameter {bad}")));
        }
        Ok((
            self.interest.iter().map(|&i| point[i]).collect(),
            self.nuisance.iter().map(|&i| point[i]).collect(),
        ))
    }

    /// Reassemble `(ψ, γ)` into natural order.
    pub fn join(&self, psi: &[f64], gamma: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.params.len()];
        for (k, &i) in self.interest.iter().enumerate() {
            out[i] = psi[k];
        }
        for (k, &i) in self.nuisance.iter().enumerate() {
            out[i] = gamma[k];
        }
        out
    }

    pub fn forward(&self, psi: &[f64], gamma: &[f64]) -> Result<Vec<f64>> {
        (self.forward)(psi, gamma)
    }

    pub fn inverse(&self, psi: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        (self.inverse)(psi, lambda)
    }

    /// Largest relative error of `γ̄(ψ, λ(ψ, γ))` against `γ`.
    pub fn round_trip_error(&self, point: &[f64]) -> Result<f64> {
        let (psi, gamma) = self.split(point)?;
        let back = self.inverse(&psi, &self.forward(&psi, &gamma)?)?;
        Ok(gamma.iter().zip(&back).map(|(g, b)| (g - b).abs() / g.abs().max(1.0)).fold(0.0, f64::max))
    }

    fn gamma_at(&self, psi: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
        let g = self
            .inverse(psi, lambda)
            .map_err(|e| Error::Conditioning(format!("inverse mapping failed near the point: {e}")))?;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Conditioning("inverse mapping is not finite near the point".into()));
        }
        Ok(g)
    }

    /// `∂γ̄/∂ψ` (d₂×d₁) by central differences at fixed λ.
    fn d_gamma_d_psi(&self, psi: &[f64], lambda: &[f64]) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.nuisance.len(), psi.len());
        for i in 0..psi.len() {
            let h = PDE_STEP * psi[i].abs().max(1.0);
            let mut up = psi.to_vec();
            let mut dn = psi.to_vec();
            up[i] += h;
            dn[i] -= h;
            let gu = self.gamma_at(&up, lambda)?;
            let gd = self.gamma_at(&dn, lambda)?;
            for r in 0..gu.len() {
                out[(r, i)] = (gu[r] - gd[r]) / (2.0 * h);
            }
        }
        Ok(out)
    }

    /// `∂γ̄/∂λ` (d₂×d₂) by central differences at fixed ψ.
    fn d_gamma_d_lambda(&self, psi: &[f64], lambda: &[f64]) -> Result<DMatrix<f64>> {
        let d2 = lambda.len();
        let mut out = DMatrix::zeros(self.nuisance.len(), d2);
        for j in 0..d2 {
            let h = PDE_STEP * lambda[j].abs().max(1.0);
            let mut up = lambda.to_vec();
            let mut dn = lambda.to_vec();
            up[j] += h;
            dn[j] -= h;
            let gu = self.gamma_at(psi, &up)?;
            let gd = self.gamma_at(psi, &dn)?;
            for r in 0..gu.len() {
                out[(r, j)] = (gu[r] - gd[r]) / (2.0 * h);
            }
        }
        Ok(out)
    }

    fn ordered_fisher(&self, fim: &dyn Fn(&[f64]) -> Result<FisherMatrix>, point: &[f64]) -> Result<FisherMatrix> {
        let order: Vec<String> = self.interest_names().into_iter().chain(self.nuisance_names()).collect();
        fim(point)?.reordered(&order)
    }
}

/// Relative finite-difference step for `∂γ̄/∂ψ` and `∂γ̄/∂λ`.
pub const PDE_STEP: f64 = 1e-5;

/// Residuals `Σ_r I_{γr,γs} ∂γ̄_r/∂ψ_i + I_{ψi,γs}` as a d₁×d₂ matrix.
pub fn check_pde_residual(
    spec: &ReparamSpec,
    fim: &dyn Fn(&[f64]) -> Result<FisherMatrix>,
    point: &[f64],
) -> Result<DMatrix<f64>> {
    let (psi, gamma) = spec.split(point)?;
    let lambda = spec.forward(&psi, &gamma)?;
    let dg = spec.d_gamma_d_psi(&psi, &lambda)?;
    let info = spec.ordered_fisher(fim, point)?;
    let (d1, d2) = (psi.len(), gamma.len());
    let i = info.entries();
    Ok(DMatrix::from_fn(d1, d2, |pi, s| {
        let mut acc = i[(pi, d1 + s)];
        for r in 0..d2 {
            acc += i[(d1 + r, d1 + s)] * dg[(r, pi)];
        }
        acc
    }))
}

/// Fisher information in `(ψ, λ)` at one point via `Jᵀ I J` with
/// `J = ∂(ψ, γ)/∂(ψ, λ)`.
pub fn orthogonal_fisher(
    spec: &ReparamSpec,
    fim: &dyn Fn(&[f64]) -> Result<FisherMatrix>,
    point: &[f64],
) -> Result<FisherMatrix> {
    let (psi, gamma) = spec.split(point)?;
    let lambda = spec.forward(&psi, &gamma)?;
    let (d1, d2) = (psi.len(), gamma.len());
    let dpsi = spec.d_gamma_d_psi(&psi, &lambda)?;
    let dlam = spec.d_gamma_d_lambda(&psi, &lambda)?;
    let det = dlam.determinant();
    let scale = dlam.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(d2 as i32);
    if !(det.abs() > 1e-12 * scale) {
        return Err(Error::Conditioning(format!("Jacobian of the inverse mapping is singular at {point:?}")));
    }
    let mut j = DMatrix::zeros(d1 + d2, d1 + d2);
    for k in 0..d1 {
        j[(k, k)] = 1.0;
    }
    for r in 0..d2 {
        for i in 0..d1 {
            j[(d1 + r, i)] = dpsi[(r, i)];
        }
        for c in 0..d2 {
            j[(d1 + r, d1 + c)] = dlam[(r, c)];
        }
    }
    let labels: Vec<String> = spec.interest_names().into_iter().chain(spec.orthogonal.iter().cloned()).collect();
    spec.ordered_fisher(fim, point)?.congruence(&j, labels)
}

/// Largest `|I_{ψi,λj}|` over `grid` after transforming to `(ψ, λ)`.
pub fn check_global_orthogonality(
    spec: &ReparamSpec,
    fim: &dyn Fn(&[f64]) -> Result<FisherMatrix>,
    grid: &[Vec<f64>],
) -> Result<f64> {
    let d1 = spec.interest.len();
    let mut worst: f64 = 0.0;
    for point in grid {
        let f = orthogonal_fisher(spec, fim, point)?;
        let e = f.entries();
        for i in 0..d1 {
            for j in d1..f.dim() {
                worst = worst.max(e[(i, j)].abs());
            }
        }
    }
    Ok(worst)
}

/// `λ = a exp(ψ(d/p)/p)`.
pub fn gen_gamma_ortho(p: &GenGammaParams) -> f64 {
    // d/p is positive by construction, so digamma cannot fail.
    p.a() * (digamma(p.d() / p.p()).unwrap_or(f64::NAN) / p.p()).exp()
}

/// `θ(α₁+α₂)` for the Gamma kind, `(α₁+α₂)/β` for the inverse-Gamma kind.
pub fn two_gamma_ortho(p: &TwoSampleGammaParams) -> f64 {
    let s = p.alpha1() + p.alpha2();
    match p.kind() {
        TwoSampleKind::GammaScale => p.theta_or_beta() * s,
        TwoSampleKind::InverseGammaScale => s / p.theta_or_beta(),
    }
}

/// `λ = σ exp(−∫_{θ_ref}^{θ} numer/denom)` by adaptive quadrature.
pub fn ls_ortho_scale<N, D>(numer: N, denom: D, theta: f64, sigma: f64, theta_ref: f64, tol: f64) -> Result<f64>
where
    N: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    Ok(sigma * (-ratio_integral(&numer, &denom, theta_ref, theta, tol)?).exp())
}

fn ratio_integral<N, D>(numer: &N, denom: &D, from: f64, to: f64, tol: f64) -> Result<f64>
where
    N: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if from == to {
        return Ok(0.0);
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |t: f64| match numer(t).and_then(|n| denom(t).map(|d| n / d)) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let iv = Interval::new(from.min(to), from.max(to))?;
    let value = adaptive_quadrature(integrand, Domain::Finite(iv), tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = value?;
    Ok(if to > from { value } else { -value })
}

/// Tolerance for the shape integrals nested inside the location-scale maps.
const LS_INNER_TOL: f64 = 1e-11;
/// Tolerance for the outer integral over the shape parameter.
const LS_OUTER_TOL: f64 = 1e-12;
/// Reference degrees of freedom fixing the antiderivative constants.
pub const LS_THETA_REF: f64 = 1.0;

fn t_f1(nu: f64) -> Result<f64> {
    t_shape_integrals(nu, LS_INNER_TOL).map(|s| s.0)
}

fn t_f2(nu: f64) -> Result<f64> {
    t_shape_integrals(nu, LS_INNER_TOL).map(|s| s.1)
}

fn t_f3(nu: f64) -> Result<f64> {
    t_shape_integrals(nu, LS_INNER_TOL).map(|s| s.2)
}

/// `F₁(ν) = ∫_{ref}^{ν} f₃/f₁` for the t family.
fn t_big_f1(nu: f64) -> Result<f64> {
    ratio_integral(&t_f3, &t_f1, LS_THETA_REF, nu, LS_OUTER_TOL)
}

/// Solve `F₁(ν) = target` for ν by safeguarded Newton in `ln ν`.
fn t_big_f1_inverse(target: f64) -> Result<f64> {
    let (mut lo, mut hi) = ((1e-2f64).ln(), (1e3f64).ln());
    let g_hi = t_big_f1(hi.exp())? - target;
    let g_lo = t_big_f1(lo.exp())? - target;
    if g_hi < 0.0 || g_lo > 0.0 {
        return Err(Error::Domain(format!("no degrees of freedom in [0.01, 1000] give F1 = {target}")));
    }
    let mut x = 0.0f64.clamp(lo, hi);
    for _ in 0..100 {
        let nu = x.exp();
        let g = t_big_f1(nu)? - target;
        if g == 0.0 {
            return Ok(nu);
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = nu * t_f3(nu)? / t_f1(nu)?;
        let mut next = x - g / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            return Ok(next.exp());
        }
        x = next;
    }
    Ok(x.exp())
}

fn t_fisher_provider() -> FisherProvider {
    Arc::new(|x: &[f64]| t_fisher_info(&TParams::new(x[0], x[1], x[2])?))
}

/// t with `ψ = (μ, ν)`, `γ = σ` and `λ = σ(ν+1)/ν`.
pub fn t_spec() -> ReparamSpec {
    ReparamSpec::new(
        "t",
        &["mu", "sigma", "nu"],
        &["mu", "nu"],
        &["sigma"],
        &["lambda"],
        Arc::new(|psi: &[f64], g: &[f64]| Ok(vec![g[0] * (psi[1] + 1.0) / psi[1]])),
        Arc::new(|psi: &[f64], l: &[f64]| Ok(vec![l[0] * psi[1] / (psi[1] + 1.0)])),
    )
    .expect("static spec")
}

/// Location-scale t with `ψ = (μ, ν)`, `γ = σ`, `λ = σ exp(−F₂(ν))`, `F₂`
/// integrated numerically from the shape integrals.
pub fn ls_f2_spec() -> ReparamSpec {
    let f2 = |nu: f64| ratio_integral(&t_f1, &t_f2, LS_THETA_REF, nu, LS_OUTER_TOL);
    ReparamSpec::new(
        "ls-f2",
        &["mu", "sigma", "nu"],
        &["mu", "nu"],
        &["sigma"],
        &["lambda"],
        Arc::new(move |psi: &[f64], g: &[f64]| Ok(vec![g[0] * (-f2(psi[1])?).exp()])),
        Arc::new(move |psi: &[f64], l: &[f64]| Ok(vec![l[0] * f2(psi[1])?.exp()])),
    )
    .expect("static spec")
}

/// Location-scale t with `ψ = (μ, σ)`, `γ = ν`, `λ = σ exp(−F₁(ν))`.
pub fn ls_f1_spec() -> ReparamSpec {
    ReparamSpec::new(
        "ls-f1",
        &["mu", "sigma", "nu"],
        &["mu", "sigma"],
        &["nu"],
        &["lambda"],
        Arc::new(|psi: &[f64], g: &[f64]| Ok(vec![psi[1] * (-t_big_f1(g[0])?).exp()])),
        Arc::new(|psi: &[f64], l: &[f64]| {
            if !(psi[1] > 0.0 && l[0] > 0.0) {
                return Err(Error::Domain("scale and λ must be positive".into()));
            }
            Ok(vec![t_big_f1_inverse((psi[1] / l[0]).ln())?])
        }),
    )
    .expect("static spec")
}

/// Generalized Gamma with `ψ = (a, p)`, `γ = d`, `λ = a exp(ψ(d/p)/p)`.
pub fn gen_gamma_spec() -> ReparamSpec {
    ReparamSpec::new(
        "gengamma",
        &["a", "d", "p"],
        &["a", "p"],
        &["d"],
        &["lambda"],
        Arc::new(|psi: &[f64], g: &[f64]| Ok(vec![gen_gamma_ortho(&GenGammaParams::new(psi[0], g[0], psi[1])?)])),
        Arc::new(|psi: &[f64], l: &[f64]| {
            let (a, p) = (psi[0], psi[1]);
            if !(a > 0.0 && p > 0.0 && l[0] > 0.0) {
                return Err(Error::Domain("a, p and λ must be positive".into()));
            }
            Ok(vec![p * inverse_digamma(p * (l[0] / a).ln())?])
        }),
    )
    .expect("static spec")
}

fn two_sample_spec(kind: TwoSampleKind) -> ReparamSpec {
    let (name, scale) = match kind {
        TwoSampleKind::GammaScale => ("gamma2", "theta"),
        TwoSampleKind::InverseGammaScale => ("invgamma2", "beta"),
    };
    ReparamSpec::new(
        name,
        &["alpha1", "alpha2", scale],
        &["alpha1", "alpha2"],
        &[scale],
        &["lambda"],
        Arc::new(move |psi: &[f64], g: &[f64]| {
            Ok(vec![two_gamma_ortho(&TwoSampleGammaParams::new(psi[0], psi[1], g[0], kind)?)])
        }),
        Arc::new(move |psi: &[f64], l: &[f64]| {
            let s = psi[0] + psi[1];
            Ok(vec![match kind {
                TwoSampleKind::GammaScale => l[0] / s,
                TwoSampleKind::InverseGammaScale => s / l[0],
            }])
        }),
    )
    .expect("static spec")
}

/// Two Gamma samples sharing scale θ: `λ = θ(α₁+α₂)`.
pub fn gamma2_spec() -> ReparamSpec {
    two_sample_spec(TwoSampleKind::GammaScale)
}

/// Two inverse-Gamma samples sharing scale β: `λ = (α₁+α₂)/β`.
pub fn invgamma2_spec() -> ReparamSpec {
    two_sample_spec(TwoSampleKind::InverseGammaScale)
}

/// A spec bundled with its Fisher provider and default evaluation points.
#[derive(Clone)]
pub struct OrthoCase {
    pub spec: ReparamSpec,
    pub fisher: FisherProvider,
    pub default_point: Vec<f64>,
    pub default_grid: Vec<Vec<f64>>,
}

impl fmt::Debug for OrthoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrthoCase")
            .field("spec", &self.spec)
            .field("default_point", &self.default_point)
            .finish()
    }
}

impl OrthoCase {
    pub fn pde_residual(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        check_pde_residual(&self.spec, self.fisher.as_ref(), point)
    }

    pub fn global_orthogonality(&self, grid: &[Vec<f64>]) -> Result<f64> {
        check_global_orthogonality(&self.spec, self.fisher.as_ref(), grid)
    }

    /// Replace the reparameterization with `λ = γ`.
    pub fn with_identity(mut self) -> Self {
        self.spec = self.spec.identity();
        self
    }
}

/// Names accepted by [`builtin_case`].
pub const BUILTIN_CASES: [&str; 7] = ["t", "t-identity", "gengamma", "ls-f1", "ls-f2", "gamma2", "invgamma2"];

fn product(axes: &[&[f64]]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

pub fn builtin_case(name: &str) -> Result<OrthoCase> {
    let t_grid = product(&[&[0.0], &[0.5, 1.0, 2.0], &[0.5, 1.0, 2.0, 4.0]]);
    let gamma_fisher = |kind: TwoSampleKind| -> FisherProvider {
        Arc::new(move |x: &[f64]| gamma_family_fisher(TwoSampleGammaParams::new(x[0], x[1], x[2], kind)?))
    };
    let case = match name {
        "t" => OrthoCase {
            spec: t_spec(),
            fisher: t_fisher_provider(),
            default_point: vec![0.0, 1.0, 1.0],
            default_grid: t_grid,
        },
        "t-identity" => OrthoCase {
            spec: t_spec().identity(),
            fisher: t_fisher_provider(),
            default_point: vec![0.0, 1.0, 1.0],
            default_grid: t_grid,
        },
        "ls-f2" => OrthoCase {
            spec: ls_f2_spec(),
            fisher: t_fisher_provider(),
            default_point: vec![0.0, 1.0, 1.0],
            default_grid: t_grid,
        },
        "ls-f1" => OrthoCase {
            spec: ls_f1_spec(),
            fisher: t_fisher_provider(),
            default_point: vec![0.0, 1.0, 1.0],
            default_grid: product(&[&[0.0], &[0.5, 2.0], &[0.5, 2.0]]),
        },
        "gengamma" => OrthoCase {
            spec: gen_gamma_spec(),
            fisher: Arc::new(|x: &[f64]| gamma_family_fisher(GenGammaParams::new(x[0], x[1], x[2])?)),
            default_point: vec![1.0, 1.0, 1.0],
            default_grid: product(&[&[0.5, 2.0], &[0.7, 2.0], &[0.8, 1.5]]),
        },
        "gamma2" => OrthoCase {
            spec: gamma2_spec(),
            fisher: gamma_fisher(TwoSampleKind::GammaScale),
            default_point: vec![1.0, 2.0, 3.0],
            default_grid: product(&[&[0.5, 2.0], &[1.0, 3.0], &[0.5, 3.0]]),
        },
        "invgamma2" => OrthoCase {
            spec: invgamma2_spec(),
            fisher: gamma_fisher(TwoSampleKind::InverseGammaScale),
            default_point: vec![1.0, 1.0, 1.0],
            default_grid: product(&[&[0.5, 2.0], &[1.0, 3.0], &[0.5, 3.0]]),
        },
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown distribution {other}; expected one of {}",
                BUILTIN_CASES.join(", ")
            )))
        }
    };
    Ok(case)
}
