//! Test-only reference evaluators, kept independent of the library code paths
//! they are used to check.
#![allow(dead_code)]

use ris_evt::dist::NccsDist;
use ris_evt::quad::{integrate, QuadSpec};
use ris_evt::{build_population, RisGroupSpec, RisPopulation};

pub fn pop(groups: &[(u32, u32)]) -> RisPopulation {
    let specs: Vec<_> = groups
        .iter()
        .map(|&(n, r)| RisGroupSpec { n_elements: n, multiplicity: r })
        .collect();
    build_population(&specs).unwrap()
}

pub fn equal_split(ns: &[u32], total_r: u32) -> RisPopulation {
    RisPopulation::split(ns, &vec![1; ns.len()], total_r).unwrap()
}

/// Per-link CDF values at `gamma`, in population link order.
pub fn link_cdfs(pop: &RisPopulation, gamma: f64) -> Vec<f64> {
    pop.links()
        .map(|(_, p)| NccsDist::new(p).unwrap().cdf(gamma).unwrap())
        .collect()
}

/// CDF of the k-th largest by literal enumeration over which links fall at or
/// below γ: sum over m = R−k+1..=R of all size-m "below" sets.
pub fn enumerated_kth_cdf(link_cdf: &[f64], k: usize) -> f64 {
    let r = link_cdf.len();
    assert!(r <= 16);
    let mut total = 0.0;
    for mask in 0u32..(1 << r) {
        let m = mask.count_ones() as usize;
        if m + k < r + 1 {
            continue;
        }
        let mut prod = 1.0;
        for (j, &f) in link_cdf.iter().enumerate() {
            prod *= if mask & (1 << j) != 0 { f } else { 1.0 - f };
        }
        total += prod;
    }
    total
}

/// erfc via the regularized upper incomplete gamma Q(1/2, x²): power series for
/// small arguments, modified Lentz continued fraction otherwise.
pub fn erfc_reference(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_reference(-x);
    }
    let z = x * x;
    let a = 0.5f64;
    let ln_gamma_half = 0.5 * std::f64::consts::PI.ln();
    if z < a + 1.0 {
        // P(a, z) by series.
        let mut sum = 1.0 / a;
        let mut term = sum;
        let mut n = 1.0;
        while term.abs() > sum.abs() * 1e-17 {
            term *= z / (a + n);
            sum += term;
            n += 1.0;
        }
        let p = sum * (-z + a * z.ln() - ln_gamma_half).exp();
        1.0 - p
    } else {
        let tiny = 1e-300;
        let mut b = z + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-z + a * z.ln() - ln_gamma_half).exp() * h
    }
}

pub fn normal_sf_reference(x: f64) -> f64 {
    0.5 * erfc_reference(x / std::f64::consts::SQRT_2)
}

/// Modified Bessel function I_{−1/2}(z) by its ascending series.
fn bessel_i_minus_half(z: f64) -> f64 {
    // Σ (z/2)^{2m − 1/2} / (m! Γ(m + 1/2))
    let half = 0.5 * z;
    let mut term = half.powf(-0.5) / std::f64::consts::PI.sqrt();
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= half * half / (m * (m - 0.5));
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// `Q_{1/2}(a, b)` by quadrature of the defining integral
/// `∫_b^∞ x (x/a)^{−1/2} exp(−(x² + a²)/2) I_{−1/2}(a x) dx`.
pub fn marcum_half_quadrature(a: f64, b: f64) -> f64 {
    assert!(a > 0.0);
    let upper = a.max(b) + 40.0;
    let spec = QuadSpec { abs_tol: 1e-13, rel_tol: 0.0, max_intervals: 5000 };
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let damp = (-(x * x + a * a) / 2.0).exp();
        if damp == 0.0 {
            return 0.0;
        }
        x * (x / a).powf(-0.5) * damp * bessel_i_minus_half(a * x)
    };
    integrate(f, b, upper, &spec).unwrap().value
}

/// Binomial standard error of a frequency with success probability `p`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

pub fn report(id: &str, pass: bool, detail: &str) {
    println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
}
