//! Experiment configuration files (TOML). Fields ending in `_db` are decibels;
//! everything is converted to linear scale here and nowhere else.

use std::path::Path;

use ris_evt::{EpsChoice, Level, RisPopulation};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub level: Option<LevelName>,
    /// Chernoff parameter; chosen from the population when absent.
    pub eps: Option<f64>,
    #[serde(default)]
    pub population: Vec<PopulationCfg>,
    pub cdf: Option<CdfCfg>,
    pub outage: Option<OutageCfg>,
    pub throughput: Option<ThroughputCfg>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum LevelName {
    Nccs,
    Physical,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Exact,
    FiniteEvt,
    AsymptoticEvt,
    MonteCarlo,
}

impl ModeName {
    pub fn label(self) -> &'static str {
        match self {
            ModeName::Exact => "exact",
            ModeName::FiniteEvt => "finite-evt",
            ModeName::AsymptoticEvt => "asymptotic-evt",
            ModeName::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationCfg {
    pub name: Option<String>,
    pub elements: Vec<u32>,
    pub weights: Option<Vec<u32>>,
    pub total_r: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdfCfg {
    pub k: Vec<u32>,
    pub modes: Vec<ModeName>,
    pub grid: LinearGrid,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageCfg {
    pub k: Vec<u32>,
    pub gamma_th_db: f64,
    pub snr_db: StepGrid,
    #[serde(default = "default_outage_modes")]
    pub modes: Vec<ModeName>,
}

fn default_outage_modes() -> Vec<ModeName> {
    vec![ModeName::FiniteEvt]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThroughputCfg {
    pub k: Vec<u32>,
    pub gamma_a_db: Vec<f64>,
    pub abs_tol: Option<f64>,
}

/// A population at one particular total R.
pub struct Instance {
    pub name: String,
    pub total_r: u32,
    pub pop: RisPopulation,
}

pub struct Loaded {
    pub config: Config,
    pub bytes: Vec<u8>,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Validation(format!("{}: not UTF-8: {e}", path.display())))?;
    let config: Config =
        toml::from_str(text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(Loaded { config, bytes })
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{path}: {msg}"))
}

impl Config {
    pub fn level(&self) -> Level {
        match self.level {
            Some(LevelName::Physical) => Level::Physical,
            _ => Level::Nccs,
        }
    }

    pub fn eps_choice(&self) -> Result<EpsChoice, CliError> {
        match self.eps {
            None => Ok(EpsChoice::Auto),
            Some(e) => ris_evt::ChernoffEps::new(e)
                .map(EpsChoice::Fixed)
                .map_err(|err| invalid("eps", err)),
        }
    }

    /// Every (population, R) pair in file order.
    pub fn instances(&self) -> Result<Vec<Instance>, CliError> {
        if self.population.is_empty() {
            return Err(invalid("population", "at least one [[population]] table is required"));
        }
        let mut out = Vec::new();
        for (i, p) in self.population.iter().enumerate() {
            let path = format!("population[{i}]");
            if p.elements.is_empty() {
                return Err(invalid(&format!("{path}.elements"), "must not be empty"));
            }
            if p.total_r.is_empty() {
                return Err(invalid(&format!("{path}.total_r"), "must not be empty"));
            }
            let weights = p.weights.clone().unwrap_or_else(|| vec![1; p.elements.len()]);
            let name = p.name.clone().unwrap_or_else(|| {
                let ns: Vec<String> = p.elements.iter().map(u32::to_string).collect();
                format!("N{}", ns.join("-"))
            });
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                return Err(invalid(&format!("{path}.name"), "use letters, digits, '-', '_' or '.'"));
            }
            for (j, &r) in p.total_r.iter().enumerate() {
                let pop = RisPopulation::split(&p.elements, &weights, r)
                    .map_err(|e| invalid(&format!("{path}.total_r[{j}]"), e))?;
                out.push(Instance { name: name.clone(), total_r: r, pop });
            }
        }
        Ok(out)
    }
}

pub fn check_orders(ks: &[u32], section: &str, instances: &[Instance]) -> Result<(), CliError> {
    if ks.is_empty() {
        return Err(invalid(&format!("{section}.k"), "must not be empty"));
    }
    for (i, &k) in ks.iter().enumerate() {
        if k == 0 {
            return Err(invalid(&format!("{section}.k[{i}]"), "orders start at 1"));
        }
        if let Some(inst) = instances.iter().find(|inst| k > inst.total_r) {
            return Err(invalid(
                &format!("{section}.k[{i}]"),
                format!("k = {k} exceeds R = {} of population {}", inst.total_r, inst.name),
            ));
        }
    }
    Ok(())
}

impl LinearGrid {
    pub fn values(&self, path: &str) -> Result<Vec<f64>, CliError> {
        if self.points == 0 {
            return Err(invalid(&format!("{path}.points"), "grid is empty"));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start >= 0.0 && self.stop >= self.start) {
            return Err(invalid(path, "need finite 0 <= start <= stop"));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let h = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.start + h * i as f64).collect())
    }
}

impl StepGrid {
    pub fn values(&self, path: &str) -> Result<Vec<f64>, CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(invalid(path, "start, stop and step must be finite"));
        }
        if !(self.step > 0.0) {
            return Err(invalid(&format!("{path}.step"), "must be positive"));
        }
        if self.stop < self.start {
            return Err(invalid(path, "grid is empty (stop < start)"));
        }
        // Index-based so the endpoint is not lost to accumulated rounding.
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.start + self.step * i as f64).collect())
    }
}
