//! Exact order-statistic CDFs for a finite population, with no asymptotics.

use crate::dist::NccsDist;
use crate::error::{domain, Result};
use crate::ris::RisPopulation;

fn group_dists(pop: &RisPopulation) -> Vec<(NccsDist, u32)> {
    pop.groups()
        .iter()
        .map(|g| (NccsDist::new(g.params).expect("population parameters are valid"), g.spec.multiplicity))
        .collect()
}

/// `Π_i F_i(γ)^{R_i}`.
pub fn exact_max_cdf(pop: &RisPopulation, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(domain(format!("SNR must be >= 0, got {gamma}")));
    }
    Ok(group_dists(pop)
        .iter()
        .map(|(d, r)| d.cdf_unchecked(gamma).powi(*r as i32))
        .product())
}

/// Poisson-binomial recursion over links for the exceedance count at `gamma`.
///
/// Entry `j < k` holds `P(exactly j links exceed γ)`; entry `k` absorbs
/// `P(at least k links exceed γ)`.
pub fn exceedance_counts(pop: &RisPopulation, k: u32, gamma: f64) -> Vec<f64> {
    let k = k as usize;
    let mut dp = vec![0.0; k + 1];
    dp[0] = 1.0;
    for (d, r) in group_dists(pop) {
        let q = d.sf_unchecked(gamma);
        let f = 1.0 - q;
        for _ in 0..r {
            dp[k] += dp[k - 1] * q;
            for j in (1..k).rev() {
                dp[j] = dp[j] * f + dp[j - 1] * q;
            }
            dp[0] *= f;
        }
    }
    dp
}

/// CDF of the k-th largest SNR: `P(fewer than k links exceed γ)`.
pub fn exact_kth_cdf(pop: &RisPopulation, k: u32, gamma: f64) -> Result<f64> {
    if k == 0 || k > pop.total_r() {
        return Err(domain(format!(
            "order k = {k} must lie in 1..={}",
            pop.total_r()
        )));
    }
    if !(gamma >= 0.0) {
        return Err(domain(format!("SNR must be >= 0, got {gamma}")));
    }
    let dp = exceedance_counts(pop, k, gamma);
    let tail = dp[k as usize];
    // Near 1 the complement of the small tail is the accurate route.
    let cdf = if tail < 0.5 {
        1.0 - tail
    } else {
        dp[..k as usize].iter().sum::<f64>()
    };
    Ok(cdf.clamp(0.0, 1.0))
}
