//! Randomized invariant checks over the public API.

use gmrd_core::inner::{inner_bound, semantic_mismatch};
use gmrd_core::mathkit::{
    binary_convolve, binary_entropy, gm_posterior_entropy, minimize_scalar, q_function,
    EntropyMethod,
};
use gmrd_core::outer::{conditional_rd_bound, error_prob_bound, outer_bound_closed};
use gmrd_core::source::{sample, semantic_entropy};
use gmrd_core::{DistortionBudget, GaussianMixtureSpec, Probability};
use proptest::prelude::*;

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

proptest! {
    #[test]
    fn entropy_symmetric(v in 0.0f64..=1.0) {
        let a = binary_entropy(p(v)).get();
        let b = binary_entropy(p(1.0 - v)).get();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn convolve_commutative_associative(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0) {
        let ab = binary_convolve(p(a), p(b)).get();
        let ba = binary_convolve(p(b), p(a)).get();
        prop_assert!((ab - ba).abs() <= 1e-12);
        let left = binary_convolve(binary_convolve(p(a), p(b)), p(c)).get();
        let right = binary_convolve(p(a), binary_convolve(p(b), p(c))).get();
        prop_assert!((left - right).abs() <= 1e-12);
    }

    #[test]
    fn q_function_complementary(x in -8.0f64..=8.0) {
        let s = q_function(x).get() + q_function(-x).get();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mismatch_nonnegative(
        d1 in 0.0f64..=0.5,
        d2 in 0.0f64..=0.5,
        p1 in 0.0f64..=0.5,
        p2 in 0.0f64..=0.5,
    ) {
        let v = semantic_mismatch(d1, d2, p1, p2).unwrap().get();
        prop_assert!(v >= 0.0);
        prop_assert!(v <= 1.0 + 1e-12);
    }

    #[test]
    fn error_bound_monotone_and_capped(t1 in 0.0f64..=2.0, t2 in 0.0f64..=2.0) {
        let spec = GaussianMixtureSpec::example_one();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let a = error_prob_bound(lo, &spec).unwrap().get();
        let b = error_prob_bound(hi, &spec).unwrap().get();
        prop_assert!(a <= b + 1e-9);
        prop_assert!(b <= 1.0);
    }

    #[test]
    fn minimizer_matches_dense_grid_on_convex(
        center in -3.0f64..=3.0,
        curvature in 0.1f64..=10.0,
    ) {
        let f = |x: f64| curvature * (x - center) * (x - center);
        let (x, _) = minimize_scalar(&f, -5.0, 5.0, 1e-9).unwrap();
        let mut best = f64::INFINITY;
        let mut best_x = 0.0;
        for i in 0..=100_000 {
            let g = -5.0 + 10.0 * i as f64 / 100_000.0;
            if f(g) < best {
                best = f(g);
                best_x = g;
            }
        }
        prop_assert!((x - best_x).abs() <= 1e-4 + 1e-9);
    }

    #[test]
    fn sampling_deterministic(seed in any::<u64>()) {
        let spec = GaussianMixtureSpec::example_one();
        let a = sample(&spec, 256, seed).unwrap();
        let b = sample(&spec, 256, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn posterior_entropy_in_range(sigma2 in 0.05f64..=2.0, seed in any::<u64>()) {
        let spec = GaussianMixtureSpec::symmetric_binary(sigma2).unwrap();
        let est = gm_posterior_entropy(&spec, EntropyMethod::MonteCarlo, 20_000, seed).unwrap();
        let h = semantic_entropy(&spec).get();
        prop_assert!(est.bits.get() >= -3.0 * est.std_error);
        prop_assert!(est.bits.get() <= h + 3.0 * est.std_error);
    }

    #[test]
    fn outer_dominates_conditional_rd(
        d_s in 0.05f64..=1.4,
        f1 in 0.05f64..=1.0,
        f2 in 0.05f64..=1.0,
    ) {
        let spec = GaussianMixtureSpec::example_one();
        let d_x = vec![f1 * spec.covariance(0, 0), f2 * spec.covariance(1, 1)];
        let budget = DistortionBudget::new(d_s, d_x.clone()).unwrap();
        let outer = outer_bound_closed(&budget, &spec).unwrap().rate.get();
        let cond = conditional_rd_bound(&d_x, &spec).unwrap().get();
        prop_assert!(outer >= cond - 1e-9, "outer {outer} cond {cond}");
    }

    #[test]
    fn inner_at_least_outer(
        d_s in 0.06f64..=1.0,
        f1 in 0.1f64..=1.0,
        f2 in 0.1f64..=1.0,
    ) {
        let spec = GaussianMixtureSpec::symmetric_binary(0.25).unwrap();
        let d_x = vec![f1 * 0.25, f2 * 0.25];
        let budget = DistortionBudget::new(d_s, d_x).unwrap();
        let inner = inner_bound(&budget, &spec).unwrap().rate.get();
        let outer = outer_bound_closed(&budget, &spec).unwrap().rate.get();
        prop_assert!(inner >= outer - 1e-9, "inner {inner} outer {outer}");
    }
}
