use ascent_core::fixtures::{random_hermitian_with_norm, random_unit_state, seeded_rng};
use ascent_core::trotter::{
    fm_evaluate_with, fm_quadrature_crosscheck, noncomm_limit, LimitOptions, Propagator, TailMode, Verdict,
};
use ascent_core::{cos_sqrt_sum_oracle, spectral_apply, sum_of_squares, trotter_product, HermitianOperator, StateVector};
use proptest::prelude::*;

fn pair(seed: u64, dim: usize) -> (HermitianOperator, HermitianOperator, StateVector) {
    let mut rng = seeded_rng(seed);
    let a = random_hermitian_with_norm(dim, 1.0, &mut rng).unwrap();
    let b = random_hermitian_with_norm(dim, 1.0, &mut rng).unwrap();
    (a, b, random_unit_state(dim, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tail_bound_is_sound(seed in any::<u64>(), m in 1usize..16, t in 0.0f64..0.6) {
        let (a, b, h) = pair(seed, 3);
        let ops = [a, b];
        let tol = 1e-6;
        let cut = fm_evaluate_with(&ops, &h, m, t, tol, TailMode::Strict, Propagator::Cos).unwrap();
        let fine = fm_evaluate_with(&ops, &h, m, t, 1e-15, TailMode::Strict, Propagator::Cos).unwrap();
        let dropped = cut.state.distance(&fine.state).unwrap();
        prop_assert!(dropped <= cut.tail_bound.unwrap() + 1e-14);
    }

    #[test]
    fn cosine_even_sine_odd_in_t(seed in any::<u64>(), m in 1usize..10, t in 0.0f64..0.6) {
        let (a, b, h) = pair(seed, 3);
        let ops = [a, b];
        let ev = |t: f64, p| fm_evaluate_with(&ops, &h, m, t, 1e-13, TailMode::Strict, p).unwrap().state;
        prop_assert!(ev(t, Propagator::Cos).distance(&ev(-t, Propagator::Cos)).unwrap() <= 1e-14);
        let (sp, sm) = (ev(t, Propagator::Sin), ev(-t, Propagator::Sin));
        prop_assert!((sp.entries() + sm.entries()).norm() <= 1e-14);
    }

    #[test]
    fn series_matches_ball_quadrature(seed in any::<u64>(), m in 1usize..=2, t in 0.0f64..0.4) {
        let (a, b, h) = pair(seed, 3);
        let series = fm_evaluate_with(&[a.clone(), b.clone()], &h, m, t, 1e-14, TailMode::Strict, Propagator::Cos).unwrap();
        let quad = fm_quadrature_crosscheck(&a, &b, &h, m, t, None).unwrap();
        prop_assert!(series.state.distance(&quad.state).unwrap() <= 10.0 * quad.certified_error + 1e-12);
    }

    #[test]
    fn trotter_heat_product_rate(seed in any::<u64>(), rho in 0.2f64..1.0) {
        let (a, b, _) = pair(seed, 4);
        let s = sum_of_squares(&[a.clone(), b.clone()]).unwrap();
        let target = spectral_apply(&s, |l| (-rho * l).exp()).unwrap();
        let err = |m| (trotter_product(&a, &b, rho, m).unwrap() - target.matrix()).norm();
        let (e1, e2) = (err(64), err(128));
        if e1 > 1e-12 {
            prop_assert!((e1 / e2 - 2.0).abs() <= 0.4, "{e1} {e2}");
        }
    }
}

#[test]
fn decay_rate_at_least_first_order() {
    for seed in [1u64, 2, 3] {
        let (a, b, h) = pair(seed, 4);
        let t = 0.3;
        let reference = cos_sqrt_sum_oracle(&[a.clone(), b.clone()], t).unwrap().apply(&h).unwrap();
        let opts = LimitOptions {
            m0: 8,
            m_cap: 32,
            reference: Some(reference),
            ..LimitOptions::default()
        };
        let (_, report) = noncomm_limit(&[a, b], &h, t, 1e-14, &opts).unwrap();
        let e = &report.errors;
        assert!(e.windows(2).all(|w| w[1] < w[0]));
        let slope = (e[0] / e[2]).log2() / 2.0;
        assert!(slope >= 0.9, "{slope}");
        assert!(e[2] <= 1e-2);
        assert_eq!(report.verdict, Verdict::Slow);
    }
}
