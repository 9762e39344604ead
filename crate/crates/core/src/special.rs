//! Scalar special functions: the standard normal CDF, the half-order Marcum-Q
//! function together with its Chernoff-type asymptote, and the upper incomplete
//! gamma function at integer order.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{domain, Result};

/// Chernoff parameter of the exponential Marcum-Q asymptote, restricted to the
/// open interval (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChernoffEps(f64);

impl ChernoffEps {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 0.5 {
            Ok(Self(value))
        } else {
            Err(domain(format!(
                "Chernoff parameter must lie in (0, 0.5), got {value}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Standard normal CDF Φ(x).
pub fn gaussian_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("gaussian_cdf needs a finite argument, got {x}")));
    }
    Ok(phi(x))
}

/// Standard normal survival function 1 − Φ(x), accurate in the upper tail.
pub fn gaussian_sf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("gaussian_sf needs a finite argument, got {x}")));
    }
    Ok(phi_upper(x))
}

#[inline]
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

#[inline]
pub(crate) fn phi_upper(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Marcum-Q function of order 1/2.
///
/// For half order the defining integral collapses to a pair of Gaussian tails,
/// `Q_{1/2}(a, b) = Φ̄(b − a) + Φ̄(b + a)`, which is what is evaluated here.
pub fn marcum_q_half(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || a.is_infinite() {
        return Err(domain(format!(
            "marcum_q_half needs finite a >= 0 and b >= 0, got a={a}, b={b}"
        )));
    }
    Ok(marcum_q_half_unchecked(a, b))
}

#[inline]
pub(crate) fn marcum_q_half_unchecked(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 1.0;
    }
    if b.is_infinite() {
        return 0.0;
    }
    (phi_upper(b - a) + phi_upper(b + a)).min(1.0)
}

/// Value of the Chernoff-type Marcum-Q asymptote together with a flag telling
/// whether `(n, x, y)` was inside the region `y² > n(x² + 2)` where the
/// asymptote is meant to be used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffAsymptote {
    pub value: f64,
    pub in_validity_region: bool,
}

/// Exponential asymptote of the generalized Marcum-Q function
/// `Q_n(x, y) ≃ (1 − 2ε)^{−n} exp(−εy²) exp(nεx² / (1 − 2ε))`.
///
/// Leaving the validity region is not an error; the result carries the flag.
pub fn marcum_q_chernoff(n: f64, x: f64, y: f64, eps: ChernoffEps) -> Result<ChernoffAsymptote> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(domain(format!("Marcum order must be positive, got {n}")));
    }
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(domain(format!(
            "marcum_q_chernoff needs finite x >= 0 and y >= 0, got x={x}, y={y}"
        )));
    }
    let e = eps.value();
    let one_m = 1.0 - 2.0 * e;
    let log_value = -n * one_m.ln() - e * y * y + n * e * x * x / one_m;
    Ok(ChernoffAsymptote {
        value: log_value.exp(),
        in_validity_region: y * y > n * (x * x + 2.0),
    })
}

/// Minimizer over ε of the Chernoff asymptote at `(n, x, y)`:
/// `ε₀ = ½(1 − n/y² − (n/y²)·√(1 + x²y²/n))`.
///
/// Returns `None` when ε₀ falls outside (0, 1/2), which happens outside the
/// validity region.
pub fn chernoff_optimal_eps(n: f64, x: f64, y: f64) -> Option<ChernoffEps> {
    if !(n > 0.0 && y > 0.0) {
        return None;
    }
    let r = n / (y * y);
    let e0 = 0.5 * (1.0 - r - r * (1.0 + x * x * y * y / n).sqrt());
    ChernoffEps::new(e0).ok()
}

/// Upper incomplete gamma function Γ(k, x) for integer order
/// `k ≥ 1`: `(k − 1)! e^{−x} Σ_{r<k} x^r / r!`.
pub fn upper_gamma_int(k: u32, x: f64) -> Result<f64> {
    check_gamma_args(k, x)?;
    Ok(factorial(k - 1) * regularized_upper_gamma_unchecked(k, x))
}

/// Regularized form Γ(k, x) / Γ(k), i.e. the survival function of a
/// Gamma(k, 1) variable at `x`.
pub fn regularized_upper_gamma_int(k: u32, x: f64) -> Result<f64> {
    check_gamma_args(k, x)?;
    Ok(regularized_upper_gamma_unchecked(k, x))
}

fn check_gamma_args(k: u32, x: f64) -> Result<()> {
    if k == 0 {
        return Err(domain("incomplete gamma order must be at least 1"));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("incomplete gamma argument must be >= 0, got {x}")));
    }
    Ok(())
}

/// Γ(k) = (k − 1)! as a float.
pub fn gamma_int(k: u32) -> f64 {
    factorial(k.saturating_sub(1))
}

fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

pub(crate) fn regularized_upper_gamma_unchecked(k: u32, x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    if k > 1 && x < f64::from(k) {
        1.0 - lower_series(k, x)
    } else if x <= 700.0 {
        series_direct(k, x)
    } else {
        series_log(k, x)
    }
}

// k = 1 must stay exactly exp(-x).
fn series_direct(k: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for r in 1..k {
        term *= x / f64::from(r);
        sum += term;
    }
    (-x).exp() * sum
}

// P(k, x) = e^{−x} Σ_{r≥k} x^r / r!; for x below k the complement is the
// accurate route, since Q is then close to 1.
fn lower_series(k: u32, x: f64) -> f64 {
    let mut term = (-x).exp();
    for r in 1..=k {
        term *= x / f64::from(r);
    }
    let mut sum = 0.0;
    let mut r = k;
    while term > sum * 1e-17 {
        sum += term;
        r += 1;
        term *= x / f64::from(r);
    }
    sum
}

// Each term formed in log space so large x does not overflow the partial sums.
fn series_log(k: u32, x: f64) -> f64 {
    let ln_x = x.ln();
    let mut ln_fact = 0.0;
    let mut total = 0.0;
    for r in 0..k {
        if r > 0 {
            ln_fact += f64::from(r).ln();
        }
        total += (f64::from(r) * ln_x - ln_fact - x).exp();
    }
    total
}
