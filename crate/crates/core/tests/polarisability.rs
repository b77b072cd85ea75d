mod common;

use common::oracles::*;
use common::*;
use nanotrap::polarisability::{
    alignment_analytic, case_b_weights, polarisability_tensor, summed_angular_factor, Coupling, StateLabel,
    DEFAULT_GUARD_CM,
};
use nanotrap::special_math::{clebsch_gordan, rational_to};
use proptest::prelude::*;

#[test]
fn case_a_alignment_matches_rotation_matrix_quadrature() {
    for j in 1..=4 {
        for omega in -j.min(2)..=j.min(2) {
            for m in -j..=j {
                let state = StateLabel::case_a(hi(0), hi(2), hi(omega), 0, hi(j), hi(m));
                let Ok(state) = state else { continue };
                let a: [f64; 3] = alignment_analytic(&state).unwrap();
                assert!((a[2] - cos2_quadrature(j, omega, m)).abs() < 1e-10, "J={j} Ω={omega} M={m}");
            }
        }
    }
}

#[test]
fn case_b_alignment_matches_uncoupled_basis() {
    for (n, lambda, j) in [(0, 0, 1), (1, 0, 1), (2, 0, 1), (2, 0, 2), (2, 0, 3), (1, 1, 2), (3, 1, 3)] {
        for m in -j..=j {
            let state = StateLabel::case_b(hi(lambda), hi(1), hi(n), 0, hi(j), hi(m)).unwrap();
            let a: [f64; 3] = alignment_analytic(&state).unwrap();
            let mut want = 0.0;
            for ms in -1..=1 {
                let mn = m - ms;
                if mn.abs() > n {
                    continue;
                }
                let c: f64 = clebsch_gordan(hi(n), hi(mn), hi(1), hi(ms), hi(j), hi(m)).unwrap();
                want += c * c * cos2_quadrature(n, lambda, mn);
            }
            assert!((a[2] - want).abs() < 1e-10, "N={n} Λ={lambda} J={j} M={m}: {} vs {want}", a[2]);
        }
    }
}

#[test]
fn case_a_strength_sums_match_closure() {
    for (j, sigma, m) in [(1, 1, 0), (1, 0, 0), (1, -1, 1), (2, 1, -2), (3, 0, 1)] {
        let state = StateLabel::case_a(hi(0), hi(1), hi(sigma), 0, hi(j), hi(m)).unwrap();
        for mu in -1..=1 {
            let par: f64 = rational_to(&summed_angular_factor(&state, 0, mu).unwrap());
            let perp: f64 = rational_to(&summed_angular_factor(&state, 1, mu).unwrap());
            assert!((par - case_a_closure(j, sigma, m, mu, &[0])).abs() < 1e-10);
            assert!((perp - case_a_closure(j, sigma, m, mu, &[1, -1])).abs() < 1e-10);
        }
    }
}

#[test]
fn case_b_strength_sums_match_recoupling() {
    for (n, lambda, j) in [(0, 0, 1), (2, 0, 1), (2, 0, 2), (2, 0, 3), (1, 1, 1), (2, 1, 2)] {
        for m in -j..=j {
            let state = StateLabel::case_b(hi(lambda), hi(1), hi(n), 0, hi(j), hi(m)).unwrap();
            let weights = case_b_weights(&state).unwrap();
            for mu in -1..=1 {
                for final_lambda in [lambda, (lambda - 1).abs(), lambda + 1] {
                    let got: f64 = rational_to(&summed_angular_factor(&state, final_lambda, mu).unwrap());
                    let uncoupled = case_b_uncoupled(n, lambda, 1, j, m, mu, final_lambda);
                    assert!((got - uncoupled).abs() < 1e-10, "N={n} Λ={lambda} J={j} M={m} μ={mu} Λ'={final_lambda}");
                    let mut via_a = 0.0;
                    for (sigma, w) in &weights {
                        let a = StateLabel { coupling: Coupling::A { sigma: *sigma }, ..state };
                        let s: f64 = rational_to(&summed_angular_factor(&a, final_lambda, mu).unwrap());
                        via_a += rational_to::<f64>(w) * s;
                    }
                    assert!((got - via_a).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn case_b_n0_tensor_independent_of_m() {
    let table = synthetic_table();
    for wn in [WAVENUMBER_2, WAVENUMBER_1] {
        let tensors: Vec<_> = (-1..=1)
            .map(|m| polarisability_tensor(&label(&format!("b:L=0,S=1,N=0,v=0,J=1,M={m}")), wn, &table, DEFAULT_GUARD_CM).unwrap())
            .collect();
        for t in &tensors {
            for i in 0..3 {
                assert!((t.cartesian[i] - tensors[0].cartesian[i]).abs() < 1e-10 * tensors[0].scalar.abs());
                assert!((t.cartesian[i] - t.scalar).abs() < 1e-10 * t.scalar.abs());
            }
        }
    }
}

fn state_strategy() -> impl Strategy<Value = StateLabel> {
    let case_a = (1..=4i32, -1..=1i32, 0..=8i32).prop_filter_map("valid", |(j, sigma, mk)| {
        let m = mk - 4;
        StateLabel::case_a(hi(0), hi(1), hi(sigma), 0, hi(j), hi(m)).ok()
    });
    let case_b = (0..=3i32, -1..=1i32, 0..=8i32).prop_filter_map("valid", |(n, dj, mk)| {
        let j = n + dj;
        StateLabel::case_b(hi(0), hi(1), hi(n), 0, hi(j), hi(mk - 4)).ok()
    });
    prop_oneof![case_a, case_b]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alignment_is_a_distribution(state in state_strategy()) {
        let a: [f64; 3] = alignment_analytic(&state).unwrap();
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(a.iter().all(|x| *x >= 0.0 && *x <= 1.0));
        prop_assert_eq!(a[0], a[1]);
    }

    #[test]
    fn tensor_obeys_parallel_perpendicular_model(state in state_strategy(), wn in 0.0f64..9000.0) {
        let t = polarisability_tensor(&state, wn, &synthetic_table(), DEFAULT_GUARD_CM).unwrap();
        let (par, perp) = (t.parallel.unwrap(), t.perpendicular.unwrap());
        for i in 0..3 {
            let model = t.alignment[i] * par + (1.0 - t.alignment[i]) * perp;
            prop_assert!((model - t.cartesian[i]).abs() <= 1e-8 * t.cartesian[i].abs().max(1.0));
        }
        prop_assert!(t.cartesian.iter().all(|c| *c > 0.0));
    }

    #[test]
    fn m_average_is_isotropic(j in 1..=5i32, sigma in -1..=1i32) {
        let total: f64 = (-j..=j)
            .map(|m| alignment_analytic::<f64>(&StateLabel::case_a(hi(0), hi(1), hi(sigma), 0, hi(j), hi(m)).unwrap()).unwrap()[2])
            .sum();
        prop_assert!((total / (2 * j + 1) as f64 - 1.0 / 3.0).abs() < 1e-12);
    }
}
