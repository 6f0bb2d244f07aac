use nalgebra::DMatrix;
use orthopar::whittle::{
    block_toeplitz, block_toeplitz_inverse, check_var_orthogonality, forward_update, max_abs, max_rel_diff,
    whittle_recursion, yule_walker_dense, yule_walker_residuals, CovSequence, Direction,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sequence(seed: u64, m: usize, p: usize) -> CovSequence {
    CovSequence::random_stable(&mut ChaCha8Rng::seed_from_u64(seed), m, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_matches_dense_at_every_order(seed in any::<u64>(), m in 1usize..=4, p in 1usize..=12) {
        let seq = sequence(seed, m, p);
        for st in &whittle_recursion(&seq, p).unwrap()[1..] {
            let f = yule_walker_dense(&seq, st.order, Direction::Forward).unwrap();
            let b = yule_walker_dense(&seq, st.order, Direction::Backward).unwrap();
            prop_assert!(max_rel_diff(&st.forward, &f) < 1e-10);
            prop_assert!(max_rel_diff(&st.backward, &b) < 1e-10);
            let (rf, rb) = yule_walker_residuals(&seq, st);
            prop_assert!(rf < 1e-10 && rb < 1e-10);
        }
    }

    #[test]
    fn residual_covariance_never_increases(seed in any::<u64>(), m in 1usize..=3, p in 1usize..=10) {
        let seq = sequence(seed, m, p);
        let states = whittle_recursion(&seq, p).unwrap();
        for w in states.windows(2) {
            for (a, b) in [(&w[0].sigma, &w[1].sigma), (&w[0].sigma_tilde, &w[1].sigma_tilde)] {
                let min_eig = (a - b).symmetric_eigenvalues().min();
                prop_assert!(min_eig >= -1e-12 * max_abs(a), "{min_eig}");
            }
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity(seed in any::<u64>(), m in 1usize..=3, p in 1usize..=30) {
        let seq = sequence(seed, m, p);
        let t = block_toeplitz(&seq, p).unwrap();
        let inv = block_toeplitz_inverse(&seq, p).unwrap();
        prop_assert!(max_abs(&(&t * inv - DMatrix::identity(p * m, p * m))) < 1e-8);
    }

    #[test]
    fn orthogonality_identity_holds(seed in any::<u64>(), m in 1usize..=3, p in 1usize..=5) {
        let seq = sequence(seed, m, p);
        prop_assert!(check_var_orthogonality(&seq, p).unwrap() < 1e-9);
    }

    #[test]
    fn zero_corner_reduces_to_lower_order(seed in any::<u64>(), m in 1usize..=3, p in 1usize..=6) {
        let seq = sequence(seed, m, p);
        let st = &whittle_recursion(&seq, p).unwrap()[p];
        let next = forward_update(&st.forward, &st.backward, &DMatrix::zeros(m, m));
        prop_assert_eq!(&next[..p], &st.forward[..]);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), m in 1usize..=3, p in 0usize..=4) {
        let seq = sequence(seed, m, p);
        prop_assert_eq!(CovSequence::from_json(&seq.to_json().unwrap()).unwrap(), seq);
    }
}
