//! Gumbel-domain asymptotics for the best and k-th best of `R` independent,
//! non-identically distributed one-degree-of-freedom NCCS SNRs.
//!
//! A population of `P` groups, each with parameters `(λ_i, σ_i²)` and
//! multiplicity `R_i`, is normalized with
//!
//! ```text
//! a_R = σ̃² / ε
//! b_R = (σ̃² / ε) · (log R̃ − c₁)
//! c₁  = −(1/θ̃) · [ −½ log(1 − 2ε) + ε/(2(1 − 2ε)) · λ̃/σ̃² ]
//! ```
//!
//! where σ̃², λ̃ and R̃ are the largest group variance, noncentrality and
//! multiplicity, `θ_i = σ̃²/σ_i²` and `θ̃ = min θ_i`. The normalized maximum has
//! CDF `exp(−ũ(γ))` with either the limiting `ũ(γ) = e^{−γ}` or the finite-`R`
//! form `ũ(γ) = Σ_i p_i e^{−θ_i γ}`, and the k-th maximum has CDF
//! `Γ(k, ũ(γ)) / Γ(k)`.

use crate::error::{domain, validation, Error, Result};
use crate::ris::RisPopulation;
use crate::special::{gamma_int, regularized_upper_gamma_unchecked, ChernoffEps};

/// How the Chernoff parameter is chosen when building a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsChoice {
    /// `ε = √(σ̃ / λ̃)` (note: σ̃, not σ̃²).
    Auto,
    Fixed(ChernoffEps),
}

/// Which tail function `ũ` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `ũ(γ) = Σ p_i e^{−θ_i γ}`, the form meant for finite `R`.
    Finite,
    /// `ũ(γ) = e^{−γ}`, the `R → ∞` limit.
    Asymptotic,
}

/// Beyond this many scale units from the location the CDF is clamped to 0 or 1.
const Z_CLAMP: f64 = 40.0;

/// Normalizing constants and tail weights derived from a population.
#[derive(Debug, Clone, PartialEq)]
pub struct EvtModel {
    pub sigma_tilde_sq: f64,
    pub lambda_tilde: f64,
    pub r_tilde: u32,
    pub theta: Vec<f64>,
    pub theta_tilde: f64,
    pub eps: ChernoffEps,
    pub c1: f64,
    pub a_r: f64,
    pub b_r: f64,
    pub p: Vec<f64>,
    /// Index of the group holding σ̃ (and λ̃).
    pub maximal_group: usize,
}

/// `−½ log(1 − 2ε) + ε/(2(1 − 2ε)) · ratio`, the exponent shared by c₁ and p_i.
fn chernoff_exponent(eps: f64, ratio: f64) -> f64 {
    let one_m = 1.0 - 2.0 * eps;
    -0.5 * one_m.ln() + eps / (2.0 * one_m) * ratio
}

pub fn auto_eps(pop: &RisPopulation) -> Result<ChernoffEps> {
    let (s2, lam) = pop
        .groups()
        .iter()
        .fold((0.0f64, 0.0f64), |(s, l), g| (s.max(g.params.sigma_sq), l.max(g.params.lambda)));
    let value = (s2.sqrt() / lam).sqrt();
    ChernoffEps::new(value).map_err(|_| {
        Error::Config(format!(
            "automatic Chernoff parameter sqrt(sigma/lambda) = {value} is outside (0, 0.5); \
             supply an explicit eps"
        ))
    })
}

pub fn build_evt_model(pop: &RisPopulation, eps: EpsChoice) -> Result<EvtModel> {
    let eps = match eps {
        EpsChoice::Auto => auto_eps(pop)?,
        EpsChoice::Fixed(e) => e,
    };
    let groups = pop.groups();

    // Largest N holds both σ̃ and λ̃; element counts are distinct.
    let maximal_group = groups
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.params.sigma_sq.total_cmp(&b.1.params.sigma_sq))
        .map(|(i, _)| i)
        .expect("population is nonempty");
    let sigma_tilde_sq = groups[maximal_group].params.sigma_sq;
    let lambda_tilde = groups.iter().map(|g| g.params.lambda).fold(f64::MIN, f64::max);
    let r_tilde = groups.iter().map(|g| g.spec.multiplicity).max().expect("nonempty");

    let theta: Vec<f64> = groups.iter().map(|g| sigma_tilde_sq / g.params.sigma_sq).collect();
    let theta_tilde = theta.iter().copied().fold(f64::INFINITY, f64::min);

    let e = eps.value();
    let top_exponent = chernoff_exponent(e, lambda_tilde / sigma_tilde_sq);
    let c1 = -top_exponent / theta_tilde;
    let a_r = sigma_tilde_sq / e;
    let b_r = a_r * (f64::from(r_tilde).ln() - c1);

    let rt = f64::from(r_tilde);
    let p = groups
        .iter()
        .zip(&theta)
        .map(|(g, &th)| {
            let own = chernoff_exponent(e, g.params.lambda / g.params.sigma_sq);
            let exponent = own - th / theta_tilde * top_exponent;
            f64::from(g.spec.multiplicity) / rt.powf(th) * exponent.exp()
        })
        .collect();

    Ok(EvtModel {
        sigma_tilde_sq,
        lambda_tilde,
        r_tilde,
        theta,
        theta_tilde,
        eps,
        c1,
        a_r,
        b_r,
        p,
        maximal_group,
    })
}

/// Closed-form constants for `r` identical surfaces with `n` elements each:
/// `c₁ = −[−½ log(1 − 2ε) + ε/(2(1 − 2ε)) · λ/σ²]`, `a_R = σ²/ε`,
/// `b_R = a_R (log R − c₁)`, and a single unit tail weight.
pub fn build_iid_model(n: u32, r: u32, eps: EpsChoice) -> Result<EvtModel> {
    let pop = crate::ris::build_population(&[crate::ris::RisGroupSpec::new(n, r)?])?;
    let eps = match eps {
        EpsChoice::Auto => auto_eps(&pop)?,
        EpsChoice::Fixed(e) => e,
    };
    let params = pop.groups()[0].params;
    let e = eps.value();
    let c1 = -chernoff_exponent(e, params.lambda / params.sigma_sq);
    let a_r = params.sigma_sq / e;
    let b_r = a_r * (f64::from(r).ln() - c1);
    Ok(EvtModel {
        sigma_tilde_sq: params.sigma_sq,
        lambda_tilde: params.lambda,
        r_tilde: r,
        theta: vec![1.0],
        theta_tilde: 1.0,
        eps,
        c1,
        a_r,
        b_r,
        p: vec![1.0],
        maximal_group: 0,
    })
}

/// Limiting tail function `e^{−γ}`.
#[inline]
pub fn u_tilde_asymptotic(gamma_norm: f64) -> f64 {
    (-gamma_norm).exp()
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(domain("order k must be at least 1"))
    } else {
        Ok(())
    }
}

impl EvtModel {
    /// Number of groups P.
    pub fn num_groups(&self) -> usize {
        self.p.len()
    }

    /// Finite-R tail function `Σ p_i e^{−θ_i γ}`.
    pub fn u_tilde_finite(&self, gamma_norm: f64) -> f64 {
        self.p
            .iter()
            .zip(&self.theta)
            .map(|(&p, &th)| p * (-th * gamma_norm).exp())
            .sum()
    }

    pub fn u_tilde(&self, gamma_norm: f64, mode: Mode) -> f64 {
        match mode {
            Mode::Finite => self.u_tilde_finite(gamma_norm),
            Mode::Asymptotic => u_tilde_asymptotic(gamma_norm),
        }
    }

    /// CDF of the normalized maximum, `exp(−ũ(γ))`.
    pub fn max_cdf_normalized(&self, gamma_norm: f64, mode: Mode) -> f64 {
        if let Some(v) = clamp(gamma_norm) {
            return v;
        }
        (-self.u_tilde(gamma_norm, mode)).exp()
    }

    /// CDF of the normalized k-th maximum, `Γ(k, ũ(γ)) / Γ(k)`.
    pub fn kth_cdf_normalized(&self, k: u32, gamma_norm: f64, mode: Mode) -> Result<f64> {
        check_k(k)?;
        if let Some(v) = clamp(gamma_norm) {
            return Ok(v);
        }
        Ok(regularized_upper_gamma_unchecked(k, self.u_tilde(gamma_norm, mode)))
    }

    /// Maps an SNR onto the normalized scale, `(γ − b_R)/a_R`.
    #[inline]
    pub fn normalize(&self, gamma: f64) -> f64 {
        (gamma - self.b_r) / self.a_r
    }

    /// CDF of the k-th largest SNR itself.
    pub fn kth_cdf(&self, k: u32, gamma: f64, mode: Mode) -> Result<f64> {
        self.kth_cdf_normalized(k, self.normalize(gamma), mode)
    }

    /// Density of the k-th largest SNR under the limiting tail function:
    /// `exp(−e^{−z}) · e^{−kz} / (a_R Γ(k))` with `z = (γ − b_R)/a_R`.
    pub fn kth_pdf(&self, k: u32, gamma: f64) -> Result<f64> {
        check_k(k)?;
        let z = self.normalize(gamma);
        if z < -Z_CLAMP {
            return Ok(0.0);
        }
        let u = (-z).exp();
        let log_density = -u - f64::from(k) * z - self.a_r.ln() - gamma_int(k).ln();
        Ok(log_density.exp())
    }

    /// Same model expressed for the scaled SNR `γ_a · γ`.
    pub fn scaled(&self, gamma_a: f64) -> Result<Self> {
        if !(gamma_a > 0.0 && gamma_a.is_finite()) {
            return Err(domain(format!("SNR scale must be positive, got {gamma_a}")));
        }
        Ok(Self {
            a_r: self.a_r * gamma_a,
            b_r: self.b_r * gamma_a,
            ..self.clone()
        })
    }
}

#[inline]
fn clamp(z: f64) -> Option<f64> {
    if z < -Z_CLAMP {
        Some(0.0)
    } else if z > Z_CLAMP {
        Some(1.0)
    } else {
        None
    }
}

/// Evaluates a normalized statistic CDF at the SNR `gamma`.
pub fn unnormalize<F: Fn(f64) -> f64>(model: &EvtModel, normalized_cdf: F, gamma: f64) -> f64 {
    normalized_cdf(model.normalize(gamma))
}

/// Verdict of [`stochastic_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticOrder {
    /// Both directions hold on the grid.
    Equal,
    /// A ≤st B.
    ALeB,
    /// B ≤st A.
    BLeA,
    Incomparable,
}

/// Checks the sufficient dominance condition
/// `exp((b_B − γ)/a_B) ≥ exp((b_A − γ)/a_A)` (giving A ≤st B) and its mirror at
/// every grid point. The comparison is done on the exponents.
pub fn stochastic_compare(
    model_a: &EvtModel,
    model_b: &EvtModel,
    k: u32,
    grid: &[f64],
) -> Result<StochasticOrder> {
    check_k(k)?;
    if grid.is_empty() {
        return Err(validation("stochastic comparison needs a nonempty SNR grid"));
    }
    let mut a_le_b = true;
    let mut b_le_a = true;
    for &g in grid {
        let ea = (model_a.b_r - g) / model_a.a_r;
        let eb = (model_b.b_r - g) / model_b.a_r;
        a_le_b &= eb >= ea;
        b_le_a &= ea >= eb;
    }
    Ok(match (a_le_b, b_le_a) {
        (true, true) => StochasticOrder::Equal,
        (true, false) => StochasticOrder::ALeB,
        (false, true) => StochasticOrder::BLeA,
        (false, false) => StochasticOrder::Incomparable,
    })
}
