use orthopar::harness::{quantile_sorted, run_benchmark, BenchConfig, Method, Parameterization};
use orthopar::TParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[test]
fn reports_do_not_depend_on_thread_count() {
    let cfg = BenchConfig::new(TParams::new(0.0, 1.0, 2.0).unwrap(), 60, 24);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_benchmark(&cfg).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.to_json().unwrap(), four.to_json().unwrap());
    assert_eq!(one.to_csv().unwrap(), four.to_csv().unwrap());
}

#[test]
fn extreme_quantiles_within_monte_carlo_bands() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let n = 10_000;
    let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    v.sort_by(f64::total_cmp);
    // sd of an empirical p-quantile is sqrt(p(1 − p)/n) / φ(z_p) ≈ 0.027 here.
    let z: f64 = 1.959_963_984_540_054;
    let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let band = 4.0 * (0.025f64 * 0.975 / n as f64).sqrt() / phi;
    assert!((quantile_sorted(&v, 0.025) + z).abs() < band);
    assert!((quantile_sorted(&v, 0.975) - z).abs() < band);
}

/// The published log-likelihood columns are per observation and leave out
/// the constant `−½ ln π`; add it back before comparing.
#[test]
fn mean_loglik_matches_published_cells() {
    let half_ln_pi = 0.5 * std::f64::consts::PI.ln();
    let cases = [(0.5, -3.082), (1.0, -1.945)];
    for (nu, published) in cases {
        let cfg = BenchConfig::new(TParams::new(0.0, 1.0, nu).unwrap(), 100, 1000)
            .with_cells(&[Method::Iterative, Method::Scoring], &[Parameterization::Ortho]);
        let report = run_benchmark(&cfg).unwrap();
        for cell in &report.cells {
            assert!(cell.converged_fraction >= 0.99);
            let got = cell.loglik.mean + half_ln_pi;
            let band = 4.0 * cell.loglik.sd / (cell.reps as f64).sqrt();
            assert!((got - published).abs() < band, "nu {nu} {:?}: {got} vs {published} ± {band}", cell.method);
        }
    }
}
