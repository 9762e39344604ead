mod common;

use common::normal_sf_reference;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ris_evt::special::{
    chernoff_optimal_eps, marcum_q_chernoff, marcum_q_half, regularized_upper_gamma_int, upper_gamma_int,
};
use ris_evt::ChernoffEps;

#[test]
fn marcum_is_a_probability_and_decreasing_in_b() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let a: f64 = rng.gen_range(0.0..30.0);
        let b1: f64 = rng.gen_range(0.0..40.0);
        let b2 = b1 + rng.gen_range(0.0..5.0);
        let (q1, q2) = (marcum_q_half(a, b1).unwrap(), marcum_q_half(a, b2).unwrap());
        assert!((0.0..=1.0).contains(&q1));
        assert!(q2 <= q1);
    }
}

#[test]
fn marcum_increasing_in_a() {
    for b in [0.5, 2.0, 7.0, 20.0] {
        let mut prev = 0.0;
        for i in 0..200 {
            let q = marcum_q_half(0.1 * f64::from(i), b).unwrap();
            assert!(q >= prev);
            prev = q;
        }
    }
}

#[test]
fn marcum_at_zero_noncentrality_is_two_sided_tail() {
    for b in [0.0, 0.3, 1.0, 2.5, 6.0] {
        let q = marcum_q_half(0.0, b).unwrap();
        assert!((q - 2.0 * normal_sf_reference(b)).abs() < 1e-14);
    }
}

#[test]
fn marcum_rejects_bad_input() {
    assert!(marcum_q_half(-1.0, 1.0).is_err());
    assert!(marcum_q_half(1.0, f64::NAN).is_err());
}

#[test]
fn chernoff_bounds_central_case() {
    // With zero noncentrality the asymptote is a genuine Chernoff bound.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let y: f64 = rng.gen_range(0.1..12.0);
        let e = ChernoffEps::new(rng.gen_range(0.01..0.49)).unwrap();
        let bound = marcum_q_chernoff(0.5, 0.0, y, e).unwrap().value;
        assert!(bound >= marcum_q_half(0.0, y).unwrap());
    }
}

#[test]
fn chernoff_gap_shrinks_deep_in_the_tail() {
    let x = 1.5;
    let mut prev = f64::INFINITY;
    for y in [6.0, 8.0, 10.0, 12.0, 14.0] {
        let e = chernoff_optimal_eps(0.5, x, y).unwrap();
        let ch = marcum_q_chernoff(0.5, x, y, e).unwrap();
        assert!(ch.in_validity_region);
        let gap = (ch.value - marcum_q_half(x, y).unwrap()).abs();
        assert!(gap < prev);
        prev = gap;
    }
}

#[test]
fn optimal_eps_beats_other_choices() {
    for (x, y) in [(0.5, 5.0), (1.0, 8.0), (2.0, 12.0)] {
        let e0 = chernoff_optimal_eps(0.5, x, y).unwrap();
        let best = marcum_q_chernoff(0.5, x, y, e0).unwrap().value;
        for f in [0.5, 0.8, 1.1] {
            if let Ok(e) = ChernoffEps::new(e0.value() * f) {
                assert!(marcum_q_chernoff(0.5, x, y, e).unwrap().value >= best * (1.0 - 1e-12));
            }
        }
    }
}

#[test]
fn regularized_upper_gamma_is_a_survival_function() {
    for k in 1..=6u32 {
        assert_eq!(regularized_upper_gamma_int(k, 0.0).unwrap(), 1.0);
        let mut prev = 1.0;
        for i in 1..500 {
            let v = regularized_upper_gamma_int(k, 0.1 * f64::from(i)).unwrap();
            assert!(v <= prev && v >= 0.0);
            prev = v;
        }
        assert!(prev < 1e-10);
    }
}

#[test]
fn upper_gamma_recurrence() {
    // Γ(k+1, x) = k Γ(k, x) + x^k e^{−x}
    for k in 1..=8u32 {
        for x in [0.2, 1.0, 3.7, 11.0] {
            let lhs = upper_gamma_int(k + 1, x).unwrap();
            let rhs = f64::from(k) * upper_gamma_int(k, x).unwrap() + x.powi(k as i32) * (-x).exp();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }
    }
}
