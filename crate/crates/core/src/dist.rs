//! Single-link SNR law: non-central chi-square with one degree of freedom,
//! i.e. the square of a Gaussian amplitude with mean `√λ` and variance `σ²`.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{domain, Result};
use crate::ris::{params_from_elements, NccsParams};
use crate::special::marcum_q_half_unchecked;

#[derive(Debug, Clone, Copy)]
pub struct NccsDist {
    params: NccsParams,
    amplitude: Normal<f64>,
}

impl NccsDist {
    pub fn new(params: NccsParams) -> Result<Self> {
        if !(params.lambda > 0.0 && params.sigma_sq > 0.0)
            || !params.lambda.is_finite()
            || !params.sigma_sq.is_finite()
        {
            return Err(domain(format!("invalid NCCS parameters {params:?}")));
        }
        let amplitude = Normal::new(params.amplitude_mean(), params.sigma())
            .map_err(|e| domain(e.to_string()))?;
        Ok(Self { params, amplitude })
    }

    pub fn params(&self) -> NccsParams {
        self.params
    }

    /// `F(γ) = 1 − Q_{1/2}(√λ/σ, √γ/σ)`.
    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(domain(format!("SNR must be >= 0, got {gamma}")));
        }
        Ok(self.cdf_unchecked(gamma))
    }

    #[inline]
    pub(crate) fn cdf_unchecked(&self, gamma: f64) -> f64 {
        let s = self.params.sigma();
        1.0 - marcum_q_half_unchecked(self.params.amplitude_mean() / s, gamma.sqrt() / s)
    }

    /// Survival function `Q_{1/2}(√λ/σ, √γ/σ)`, without the cancellation of `1 − cdf`.
    #[inline]
    pub(crate) fn sf_unchecked(&self, gamma: f64) -> f64 {
        let s = self.params.sigma();
        marcum_q_half_unchecked(self.params.amplitude_mean() / s, gamma.sqrt() / s)
    }

    /// Density in γ; infinite at γ = 0.
    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(domain(format!("SNR must be >= 0, got {gamma}")));
        }
        let s = self.params.sigma();
        let mu = self.params.amplitude_mean();
        let r = gamma.sqrt();
        let norm = (2.0 * std::f64::consts::PI).sqrt() * s;
        let dens = |x: f64| (-0.5 * (x / s).powi(2)).exp() / norm;
        Ok((dens(r - mu) + dens(r + mu)) / (2.0 * r))
    }

    /// Inverse CDF by bisection; the returned point satisfies `|cdf(q) − p| ≤ 1e-10`
    /// unless the bracket collapses to adjacent floats first.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        let mut lo = 0.0;
        let mut hi = (self.params.amplitude_mean() + 10.0 * self.params.sigma()).powi(2).max(1.0);
        while self.cdf_unchecked(hi) < p {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            let f = self.cdf_unchecked(mid);
            if (f - p).abs() <= 1e-10 || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if f < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// CLT-level draw: the square of the Gaussian amplitude.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.amplitude.sample(rng);
        a * a
    }
}

/// Draws one coherently combined SNR from the underlying fading model:
/// `(Σ η_i β_i)²` with all `2N` amplitudes Rayleigh of unit mean square.
pub fn sample_physical<R: Rng + ?Sized>(n_elements: u32, rng: &mut R) -> Result<f64> {
    if n_elements == 0 {
        return Err(domain("element count must be at least 1"));
    }
    Ok(sample_physical_unchecked(n_elements, rng))
}

#[inline]
pub(crate) fn sample_physical_unchecked<R: Rng + ?Sized>(n_elements: u32, rng: &mut R) -> f64 {
    let mut amp = 0.0;
    for _ in 0..n_elements {
        amp += rayleigh_unit_power(rng) * rayleigh_unit_power(rng);
    }
    amp * amp
}

/// Rayleigh with scale 1/√2, so that E[η²] = 1.
#[inline]
pub(crate) fn rayleigh_unit_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    (-u.ln()).sqrt()
}

/// Convenience: the distribution of a surface with `n` elements.
pub fn for_elements(n: u32) -> Result<NccsDist> {
    NccsDist::new(params_from_elements(n)?)
}
