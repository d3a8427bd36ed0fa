use proptest::prelude::*;

use roughwave::chaos::{
    alpha_index_set, alpha_majorant, chaos_kernel_hat_sorted, chaos_norm_upper_bound,
    chaos_norm_white, chaos_norm_white_mc, increment_weight,
};
use roughwave::greens::{green_hat, green_wave_1d};
use roughwave::mc::McConfig;
use roughwave::moments::{lower_exponents, second_moment_lower, second_moment_upper};
use roughwave::params::{exponents, validate_params, ModelParams};
use roughwave::quad::{integrate, QuadratureSpec};
use roughwave::regularity::sine_increment_cap;
use roughwave::spectral::fbm_sine_identity;

fn solvable() -> impl Strategy<Value = (f64, f64)> {
    (0.26f64..0.49).prop_flat_map(|h| ((3.0 - 4.0 * h + 1e-3)..=2.0, Just(h)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn green_symbol_is_bounded(t in 0.0f64..20.0, xi in -1e4f64..1e4, k in 0.1f64..2.0) {
        let g = green_hat(t, xi, k);
        let w = xi.abs().powf(0.5 * k);
        prop_assert!(g.abs() <= t * (1.0 + 1e-12));
        if w > 0.0 {
            prop_assert!(g.abs() <= (1.0 / w) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn green_symbol_solves_oscillator(t in 0.5f64..5.0, xi in 0.1f64..3.0, k in 0.5f64..2.0) {
        let d = 1e-3;
        let second = (green_hat(t + d, xi, k) - 2.0 * green_hat(t, xi, k) + green_hat(t - d, xi, k)) / (d * d);
        let rhs = -xi.powf(k) * green_hat(t, xi, k);
        prop_assert!((second - rhs).abs() < 1e-5 * (1.0 + rhs.abs()));
        let slope = (green_hat(d, xi, k) - green_hat(0.0, xi, k)) / d;
        prop_assert!((slope - 1.0).abs() < 1e-5);
    }

    #[test]
    fn one_dimensional_kernel_transforms_to_symbol(t in 0.1f64..3.0, xi in 0.05f64..8.0) {
        let n = 64;
        let edges: Vec<f64> = (0..=n).map(|j| -t + 2.0 * t * j as f64 / n as f64).collect();
        let f = integrate(|x: f64| green_wave_1d(t, x) * (xi * x).cos(), &edges, 1e-14, 1e-12, 10_000).unwrap();
        prop_assert!((f.value - green_hat(t, xi, 2.0)).abs() < 1e-10);
    }

    #[test]
    fn identity_rhs_is_symmetric(r in 0.1f64..3.0, s in 0.1f64..3.0, h in 0.05f64..0.95) {
        let q = QuadratureSpec::default().with_tolerance(1e-4);
        let a = fbm_sine_identity(r, s, h, &q).unwrap();
        let b = fbm_sine_identity(s, r, h, &q).unwrap();
        prop_assert_eq!(a.rhs, b.rhs);
        prop_assert!((a.lhs - b.lhs).abs() <= 1e-9 * a.lhs.abs().max(1e-12));
    }

    #[test]
    fn triangle_majorant_dominates(eta in prop::collection::vec(-50.0f64..50.0, 1..=5), h in 0.01f64..0.5) {
        prop_assert!(increment_weight(&eta, h) <= alpha_majorant(&eta, h) * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_is_permutation_invariant(
        pairs in prop::collection::vec((0.01f64..0.99, -20.0f64..20.0), 1..=5),
        seed in any::<u64>(),
        k in 0.5f64..2.0,
    ) {
        let s: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let xi: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let mut dedup = s.clone();
        dedup.sort_by(f64::total_cmp);
        dedup.dedup();
        prop_assume!(dedup.len() == s.len());
        let mut idx: Vec<usize> = (0..s.len()).collect();
        let mut st = seed;
        for i in (1..idx.len()).rev() {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            idx.swap(i, (st >> 33) as usize % (i + 1));
        }
        let ps: Vec<f64> = idx.iter().map(|&i| s[i]).collect();
        let px: Vec<f64> = idx.iter().map(|&i| xi[i]).collect();
        let a = chaos_kernel_hat_sorted(&s, &xi, 1.0, 0.3, k).unwrap();
        let b = chaos_kernel_hat_sorted(&ps, &px, 1.0, 0.3, k).unwrap();
        prop_assert!((a.norm() - b.norm()).abs() <= 1e-14 * a.norm().max(1e-300));
    }

    #[test]
    fn sine_increment_cap_holds(t in 0.0f64..10.0, h in 1e-5f64..1.0, x in -1e4f64..1e4, g in 0.001f64..1.0) {
        let (l, r) = sine_increment_cap(t, h, x, g).unwrap();
        prop_assert!(l <= r * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn growth_increases_with_temporal_hurst((k, h) in solvable(), a in 0.51f64..0.98, b in 0.51f64..0.98) {
        prop_assume!(a < b);
        let ga = exponents(&validate_params(ModelParams::colored(k, h, a)).unwrap()).unwrap().growth;
        let gb = exponents(&validate_params(ModelParams::colored(k, h, b)).unwrap()).unwrap().growth;
        prop_assert!(ga < gb);
    }

    #[test]
    fn series_power_in_range((k, h) in solvable(), h0 in 0.51f64..0.99) {
        let p = validate_params(ModelParams::colored(k, h, h0)).unwrap();
        let a = exponents(&p).unwrap().chaos_series_power;
        prop_assert!(a > 1.0 && a <= 2.0, "a = {a}");
        let (g, _) = lower_exponents(&p);
        prop_assert!(g > 0.0);
    }

    #[test]
    fn upper_series_is_monotone_in_time((k, h) in solvable(), t in 0.1f64..4.0, dt in 0.01f64..1.0) {
        let p = validate_params(ModelParams::white(k, h)).unwrap();
        let a = second_moment_upper(t, &p, 200).unwrap();
        let b = second_moment_upper(t + dt, &p, 200).unwrap();
        prop_assert!(a.partial_sum <= b.partial_sum);
        for n in 1..6 {
            prop_assert!(chaos_norm_upper_bound(n, t, &p).unwrap() <= chaos_norm_upper_bound(n, t + dt, &p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lower_series_sits_below_upper((k, h) in solvable(), t in 0.2f64..6.0) {
        let p = validate_params(ModelParams::white(k, h)).unwrap();
        let q = QuadratureSpec::default();
        let c = roughwave::moments::lower_c_constant(&p, &q).unwrap().value;
        let n = roughwave::moments::default_order(t);
        let u = second_moment_upper(t, &p, n).unwrap();
        let l = second_moment_lower(t, &p, n, c).unwrap();
        prop_assert!(l.log_partial_sum <= u.log_partial_sum);
    }

    #[test]
    fn first_order_respects_bound((k, h) in solvable(), t in 0.1f64..3.0) {
        let p = validate_params(ModelParams::white(k, h)).unwrap();
        let v = chaos_norm_white(1, t, &p, &QuadratureSpec::default(), &McConfig::default()).unwrap();
        let b = chaos_norm_upper_bound(1, t, &p).unwrap();
        prop_assert!(v.value <= b + v.error_estimate + 1e-12 * b);
    }
}

#[test]
fn index_set_generates_the_polynomial() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for n in 1..=6 {
        let set = alpha_index_set(n).unwrap();
        assert_eq!(set.len(), 1 << (n - 1));
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 10.0 + 1e-3).collect();
            let mut lhs = x[0];
            for j in 1..n {
                lhs *= x[j] + x[j - 1];
            }
            let rhs: f64 = set.iter().map(|a| a.monomial(&x)).sum();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs, "n={n}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn first_order_monte_carlo_matches_quadrature() {
    let q = QuadratureSpec::default();
    for (k, h) in [(2.0, 0.3), (1.9, 0.4)] {
        let p = validate_params(ModelParams::white(k, h)).unwrap();
        let exact = chaos_norm_white(1, 1.0, &p, &q, &McConfig::default()).unwrap();
        let mc = chaos_norm_white_mc(1, 1.0, &p, &McConfig { seed: 11, samples: 1 << 21 }).unwrap();
        assert!((mc.value - exact.value).abs() <= mc.error_estimate, "{mc:?} vs {exact:?}");
    }
}

#[test]
fn second_order_monte_carlo_matches_quadrature() {
    let q = QuadratureSpec::default();
    for (k, h) in [(2.0, 0.3), (2.0, 0.45)] {
        let p = validate_params(ModelParams::white(k, h)).unwrap();
        let exact = chaos_norm_white(2, 1.0, &p, &q, &McConfig::default()).unwrap();
        let mc = chaos_norm_white_mc(2, 1.0, &p, &McConfig { seed: 12, samples: 1 << 22 }).unwrap();
        assert!((mc.value - exact.value).abs() <= mc.error_estimate, "{mc:?} vs {exact:?}");
    }
}
