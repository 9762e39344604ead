//! Outage and throughput of the k-th best link, analytic and empirical.
//!
//! The selected SNR is `γ_a · γ_(R−k+1:R)`: `γ_a` is a deterministic scale
//! (transmit SNR) applied on top of the unit-scale link SNRs.

use crate::error::{domain, Result};
use crate::evt::{EvtModel, Mode};
use crate::quad::{integrate, QuadResult, QuadSpec};
use crate::sim::EmpiricalCdf;

fn check_scale(gamma_a: f64) -> Result<()> {
    if gamma_a > 0.0 && gamma_a.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("SNR scale gamma_a must be positive and finite, got {gamma_a}")))
    }
}

fn check_threshold(gamma_th: f64) -> Result<()> {
    if gamma_th >= 0.0 && gamma_th.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("threshold must be finite and >= 0, got {gamma_th}")))
    }
}

/// `P(γ_a γ_(k) ≤ γ_th)`, i.e. the k-th-maximum CDF at `γ_th / γ_a`.
pub fn outage_probability(model: &EvtModel, k: u32, gamma_th: f64, gamma_a: f64, mode: Mode) -> Result<f64> {
    check_threshold(gamma_th)?;
    check_scale(gamma_a)?;
    model.kth_cdf(k, gamma_th / gamma_a, mode)
}

/// `log₂(1 + γ_th) · (1 − F(γ_th))`, with the CDF evaluated at the unscaled threshold.
pub fn outage_capacity(model: &EvtModel, k: u32, gamma_th: f64, mode: Mode) -> Result<f64> {
    check_threshold(gamma_th)?;
    let cdf = model.kth_cdf(k, gamma_th, mode)?;
    Ok(gamma_th.ln_1p() / std::f64::consts::LN_2 * (1.0 - cdf))
}

/// Integration window `[b_R − 20a_R, b_R + 40a_R]` for the k-th-maximum density.
pub fn density_window(model: &EvtModel) -> (f64, f64) {
    (model.b_r - 20.0 * model.a_r, model.b_r + 40.0 * model.a_r)
}

/// `E[log₂(1 + γ_a γ_(k))]` under the limiting k-th-maximum density, integrated
/// over the density window clipped at zero.
pub fn avg_throughput(model: &EvtModel, k: u32, gamma_a: f64, spec: &QuadSpec) -> Result<QuadResult> {
    check_scale(gamma_a)?;
    model.kth_pdf(k, 0.0)?;
    let (lo, hi) = density_window(model);
    integrate(
        |g| {
            let pdf = model.kth_pdf(k, g).unwrap_or(0.0);
            if pdf == 0.0 {
                0.0
            } else {
                (gamma_a * g).ln_1p() / std::f64::consts::LN_2 * pdf
            }
        },
        lo.max(0.0),
        hi,
        spec,
    )
}

/// Total mass of the k-th-maximum density over the unclipped window.
pub fn density_mass(model: &EvtModel, k: u32, spec: &QuadSpec) -> Result<QuadResult> {
    model.kth_pdf(k, 0.0)?;
    let (lo, hi) = density_window(model);
    integrate(|g| model.kth_pdf(k, g).unwrap_or(0.0), lo, hi, spec)
}

/// Fraction of trials with `γ_a γ_(k) ≤ γ_th`.
pub fn empirical_outage(emp: &EmpiricalCdf, gamma_th: f64, gamma_a: f64) -> Result<f64> {
    check_threshold(gamma_th)?;
    check_scale(gamma_a)?;
    Ok(emp.eval(gamma_th / gamma_a))
}

/// Sample mean of `log₂(1 + γ_a γ_(k))`.
pub fn empirical_throughput(emp: &EmpiricalCdf, gamma_a: f64) -> Result<f64> {
    check_scale(gamma_a)?;
    if emp.is_empty() {
        return Err(crate::error::validation("empirical throughput needs samples"));
    }
    Ok(emp.mean_of(|g| (gamma_a * g).ln_1p() / std::f64::consts::LN_2))
}
