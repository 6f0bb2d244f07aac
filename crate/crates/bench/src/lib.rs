//! Seeded inputs shared by the benchmarks.

use orthopar::distributions::t_sample;
use orthopar::harness::replication_rng;
use orthopar::whittle::CovSequence;
use orthopar::{Sample, TParams};

const SEED: u64 = 0x5eed;

/// A standard t sample with `nu` degrees of freedom.
pub fn t_fixture(nu: f64, n: usize) -> Sample {
    let p = TParams::new(0.0, 1.0, nu).expect("valid parameters");
    t_sample(&mut replication_rng(SEED, 0), &p, n).expect("positive size")
}

/// Autocovariances of a random stable process, lags `0..=p`.
pub fn cov_fixture(m: usize, p: usize) -> CovSequence {
    CovSequence::random_stable(&mut replication_rng(SEED, m), m, p).expect("stable by construction")
}
