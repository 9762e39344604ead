mod common;

use common::equal_split;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_evt::dist::{for_elements, sample_physical};
use ris_evt::oracle::exact_kth_cdf;
use ris_evt::sim::{ks_distance, run_orders};
use ris_evt::{EmpiricalCdf, Level};

#[test]
fn physical_samples_follow_gaussian_approximation() {
    let d = for_elements(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let xs: Vec<f64> = (0..100_000).map(|_| sample_physical(64, &mut rng).unwrap()).collect();
    let ks = ks_distance(&EmpiricalCdf::new(xs).unwrap(), |g| d.cdf(g.max(0.0)).unwrap()).unwrap();
    assert!(ks <= 0.01, "ks={ks}");
}

#[test]
fn physical_and_nccs_samplers_agree_for_large_surfaces() {
    let mut worst: f64 = 0.0;
    for n in [32u32, 64] {
        let d = for_elements(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32 + u64::from(n));
        let a: Vec<f64> = (0..100_000).map(|_| d.sample(&mut rng)).collect();
        let b = EmpiricalCdf::new((0..100_000).map(|_| sample_physical(n, &mut rng).unwrap()).collect()).unwrap();
        let ks = ks_distance(&EmpiricalCdf::new(a).unwrap(), |g| b.eval(g)).unwrap();
        println!("N={n}: KS(nccs, physical)={ks:.4}");
        worst = worst.max(ks);
    }
    assert!(worst <= 0.02, "ks={worst}");
}

#[test]
fn ks_to_exact_shrinks_with_more_trials() {
    let p = equal_split(&[10, 8, 6], 24);
    let ks: Vec<f64> = [2_000u64, 8_000, 32_000, 128_000]
        .iter()
        .map(|&n| {
            let e = run_orders(&p, n, &[1], Level::Nccs, 34).unwrap();
            ks_distance(&e[0], |g| exact_kth_cdf(&p, 1, g.max(0.0)).unwrap()).unwrap()
        })
        .collect();
    for (&d, n) in ks.iter().zip([2_000f64, 8_000.0, 32_000.0, 128_000.0]) {
        assert!(d <= 4.0 / n.sqrt(), "ks={d} n={n}");
    }
    assert!(ks[3] < ks[0]);
}

#[test]
fn same_seed_same_samples() {
    let p = equal_split(&[10, 8], 8);
    let a = run_orders(&p, 1000, &[1, 2], Level::Physical, 35).unwrap();
    let b = run_orders(&p, 1000, &[1, 2], Level::Physical, 35).unwrap();
    assert_eq!(a[0].sorted_samples(), b[0].sorted_samples());
    assert_eq!(a[1].sorted_samples(), b[1].sorted_samples());
}
