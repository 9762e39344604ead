//! The `cdf`, `outage` and `throughput` experiment runners.

use std::cell::RefCell;

use rayon::prelude::*;
use ris_evt::metrics::{avg_throughput, empirical_throughput, outage_capacity, outage_probability};
use ris_evt::oracle::exact_kth_cdf;
use ris_evt::quad::QuadSpec;
use ris_evt::sim::{ks_distance, run_orders};
use ris_evt::{build_evt_model, EmpiricalCdf, EvtModel, Mode, RisPopulation};

use crate::config::{check_orders, db_to_linear, Config, Instance, ModeName};
use crate::csvout::{float, Meta, Table};
use crate::{CliError, RunOptions};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_TRIALS: u64 = 100_000;

struct Settings {
    seed: u64,
    trials: u64,
}

fn settings(cfg: &Config, opts: &RunOptions) -> Settings {
    Settings {
        seed: opts.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
        trials: opts.trials.or(cfg.trials).unwrap_or(DEFAULT_TRIALS),
    }
}

/// Monte Carlo runs of different (population, R) pairs use neighbouring seeds.
fn instance_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

fn analytic_cdf(mode: ModeName, model: &EvtModel, pop: &RisPopulation, k: u32, gamma: f64) -> Result<f64, CliError> {
    Ok(match mode {
        ModeName::Exact => exact_kth_cdf(pop, k, gamma.max(0.0))?,
        ModeName::FiniteEvt => model.kth_cdf(k, gamma, Mode::Finite)?,
        ModeName::AsymptoticEvt => model.kth_cdf(k, gamma, Mode::Asymptotic)?,
        ModeName::MonteCarlo => unreachable!("Monte Carlo has no analytic CDF"),
    })
}

fn check_modes(modes: &[ModeName], section: &str, trials: u64) -> Result<(), CliError> {
    if modes.is_empty() {
        return Err(CliError::Validation(format!("{section}.modes: must not be empty")));
    }
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(CliError::Validation(format!("{section}.modes[{i}]: duplicate mode {}", m.label())));
        }
    }
    if modes.contains(&ModeName::MonteCarlo) && trials == 0 {
        return Err(CliError::Validation(format!("{section}.modes: monte-carlo needs trials > 0")));
    }
    Ok(())
}

fn simulate(inst: &Instance, ks: &[u32], cfg: &Config, s: &Settings, index: usize) -> Result<Vec<EmpiricalCdf>, CliError> {
    Ok(run_orders(&inst.pop, s.trials, ks, cfg.level(), instance_seed(s.seed, index))?)
}

pub fn cdf(cfg: &Config, bytes: &[u8], opts: &RunOptions) -> Result<(), CliError> {
    let section = cfg
        .cdf
        .as_ref()
        .ok_or_else(|| CliError::Validation("cdf: config has no [cdf] section".into()))?;
    let s = settings(cfg, opts);
    let instances = cfg.instances()?;
    check_orders(&section.k, "cdf", &instances)?;
    check_modes(&section.modes, "cdf", s.trials)?;
    let grid = section.grid.values("cdf.grid")?;
    let eps = cfg.eps_choice()?;
    let with_mc = section.modes.contains(&ModeName::MonteCarlo);
    let meta = Meta::new("cdf", Some(bytes), s.seed, if with_mc { s.trials } else { 0 });

    for (index, inst) in instances.iter().enumerate() {
        let model = build_evt_model(&inst.pop, eps)?;
        let emps = if with_mc { simulate(inst, &section.k, cfg, &s, index)? } else { Vec::new() };
        let column = |k_idx: usize, mode: ModeName, g: f64| -> Result<f64, CliError> {
            match mode {
                ModeName::MonteCarlo => Ok(emps[k_idx].eval(g)),
                _ => analytic_cdf(mode, &model, &inst.pop, section.k[k_idx], g),
            }
        };

        let mut header = vec!["gamma".to_string()];
        for k in &section.k {
            for m in &section.modes {
                header.push(format!("{}_k{k}", m.label()));
            }
        }
        let rows: Vec<Vec<String>> = grid
            .par_iter()
            .map(|&g| {
                let mut row = vec![float(g)];
                for k_idx in 0..section.k.len() {
                    for &m in &section.modes {
                        row.push(float(column(k_idx, m, g)?));
                    }
                }
                Ok(row)
            })
            .collect::<Result<_, CliError>>()?;
        let mut table = Table::new(header);
        rows.into_iter().for_each(|r| table.push(r));

        // Pairwise distances: against Monte Carlo the one-sample KS statistic,
        // between analytic curves the largest gap on the grid.
        let mut ks_table = Table::new(
            ["k", "mode_a", "mode_b", "distance", "method"].map(String::from).to_vec(),
        );
        for (k_idx, &k) in section.k.iter().enumerate() {
            for (i, &a) in section.modes.iter().enumerate() {
                for &b in &section.modes[i + 1..] {
                    let (d, method) = match (a, b) {
                        (ModeName::MonteCarlo, other) | (other, ModeName::MonteCarlo) => {
                            let err = RefCell::new(None);
                            let d = ks_distance(&emps[k_idx], |g| {
                                analytic_cdf(other, &model, &inst.pop, k, g).unwrap_or_else(|e| {
                                    err.borrow_mut().get_or_insert(e);
                                    f64::NAN
                                })
                            })?;
                            if let Some(e) = err.into_inner() {
                                return Err(e);
                            }
                            (d, "sample")
                        }
                        _ => {
                            let mut d: f64 = 0.0;
                            for &g in &grid {
                                d = d.max((column(k_idx, a, g)? - column(k_idx, b, g)?).abs());
                            }
                            (d, "grid")
                        }
                    };
                    ks_table.push(vec![k.to_string(), a.label().into(), b.label().into(), float(d), method.into()]);
                }
            }
        }

        let stem = format!("cdf_{}_R{}", inst.name, inst.total_r);
        let extra = population_meta(inst, &model);
        let path = table.write(&opts.out, &format!("{stem}.csv"), &meta, &extra)?;
        let ks_path = ks_table.write(&opts.out, &format!("{stem}_ks.csv"), &meta, &extra)?;
        println!("{}\n{}", path.display(), ks_path.display());
    }
    Ok(())
}

fn population_meta(inst: &Instance, model: &EvtModel) -> Vec<(&'static str, String)> {
    let groups: Vec<String> = inst
        .pop
        .groups()
        .iter()
        .map(|g| format!("{}x{}", g.spec.n_elements, g.spec.multiplicity))
        .collect();
    vec![
        ("population", format!("{} R={} groups={}", inst.name, inst.total_r, groups.join(" "))),
        ("eps", float(model.eps.value())),
        ("a_r", float(model.a_r)),
        ("b_r", float(model.b_r)),
    ]
}

pub fn outage(cfg: &Config, bytes: &[u8], opts: &RunOptions) -> Result<(), CliError> {
    let section = cfg
        .outage
        .as_ref()
        .ok_or_else(|| CliError::Validation("outage: config has no [outage] section".into()))?;
    let s = settings(cfg, opts);
    let instances = cfg.instances()?;
    check_orders(&section.k, "outage", &instances)?;
    check_modes(&section.modes, "outage", s.trials)?;
    if !section.gamma_th_db.is_finite() {
        return Err(CliError::Validation(format!(
            "outage.gamma_th_db: threshold must be finite, got {}",
            section.gamma_th_db
        )));
    }
    let gamma_th = db_to_linear(section.gamma_th_db);
    let snr_db = section.snr_db.values("outage.snr_db")?;
    let eps = cfg.eps_choice()?;
    let with_mc = section.modes.contains(&ModeName::MonteCarlo);
    let meta = Meta::new("outage", Some(bytes), s.seed, if with_mc { s.trials } else { 0 });
    let bits = gamma_th.ln_1p() / std::f64::consts::LN_2;

    let mut header = vec!["snr_db".to_string()];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (index, inst) in instances.iter().enumerate() {
        let model = build_evt_model(&inst.pop, eps)?;
        let emps = if with_mc { simulate(inst, &section.k, cfg, &s, index)? } else { Vec::new() };
        for (k_idx, &k) in section.k.iter().enumerate() {
            for &m in &section.modes {
                let prefix = format!("{}_R{}_k{k}_{}", inst.name, inst.total_r, m.label());
                header.push(format!("{prefix}_cout"));
                header.push(format!("{prefix}_pout"));
                let mut cout = Vec::with_capacity(snr_db.len());
                let mut pout = Vec::with_capacity(snr_db.len());
                for &sdb in &snr_db {
                    let ga = db_to_linear(sdb);
                    // C_out is taken on the selected SNR γ_a·γ, i.e. on the scaled model.
                    let (c, p) = match m {
                        ModeName::FiniteEvt | ModeName::AsymptoticEvt => {
                            let mode = if m == ModeName::FiniteEvt { Mode::Finite } else { Mode::Asymptotic };
                            (
                                outage_capacity(&model.scaled(ga)?, k, gamma_th, mode)?,
                                outage_probability(&model, k, gamma_th, ga, mode)?,
                            )
                        }
                        ModeName::Exact => {
                            let p = exact_kth_cdf(&inst.pop, k, gamma_th / ga)?;
                            (bits * (1.0 - p), p)
                        }
                        ModeName::MonteCarlo => {
                            let p = emps[k_idx].eval(gamma_th / ga);
                            (bits * (1.0 - p), p)
                        }
                    };
                    cout.push(c);
                    pout.push(p);
                }
                columns.push(cout);
                columns.push(pout);
            }
        }
    }
    let mut table = Table::new(header);
    for (i, &sdb) in snr_db.iter().enumerate() {
        let mut row = vec![float(sdb)];
        row.extend(columns.iter().map(|c| float(c[i])));
        table.push(row);
    }
    let path = table.write(&opts.out, "outage.csv", &meta, &[("gamma_th_db", float(section.gamma_th_db))])?;
    println!("{}", path.display());
    Ok(())
}

pub fn throughput(cfg: &Config, bytes: &[u8], opts: &RunOptions) -> Result<(), CliError> {
    let section = cfg
        .throughput
        .as_ref()
        .ok_or_else(|| CliError::Validation("throughput: config has no [throughput] section".into()))?;
    let s = settings(cfg, opts);
    let instances = cfg.instances()?;
    check_orders(&section.k, "throughput", &instances)?;
    if section.gamma_a_db.is_empty() {
        return Err(CliError::Validation("throughput.gamma_a_db: must not be empty".into()));
    }
    if let Some(i) = section.gamma_a_db.iter().position(|g| !g.is_finite()) {
        return Err(CliError::Validation(format!("throughput.gamma_a_db[{i}]: must be finite")));
    }
    let mut spec = QuadSpec::default();
    if let Some(t) = section.abs_tol {
        if !(t > 0.0) {
            return Err(CliError::Validation("throughput.abs_tol: must be positive".into()));
        }
        spec.abs_tol = t;
    }
    let eps = cfg.eps_choice()?;
    let with_mc = s.trials > 0;
    let meta = Meta::new("throughput", Some(bytes), s.seed, s.trials);

    let mut header: Vec<String> =
        ["population", "total_r", "k", "gamma_a_db", "analytic", "quad_error"].map(String::from).to_vec();
    if with_mc {
        header.extend(["monte_carlo", "rel_gap"].map(String::from));
    }
    let mut table = Table::new(header);
    for (index, inst) in instances.iter().enumerate() {
        let model = build_evt_model(&inst.pop, eps)?;
        let emps = if with_mc { simulate(inst, &section.k, cfg, &s, index)? } else { Vec::new() };
        for (k_idx, &k) in section.k.iter().enumerate() {
            let rows: Vec<Vec<String>> = section
                .gamma_a_db
                .par_iter()
                .map(|&gdb| {
                    let ga = db_to_linear(gdb);
                    let q = avg_throughput(&model, k, ga, &spec)?;
                    let mut row = vec![
                        inst.name.clone(),
                        inst.total_r.to_string(),
                        k.to_string(),
                        float(gdb),
                        float(q.value),
                        float(q.error_estimate),
                    ];
                    if with_mc {
                        let mc = empirical_throughput(&emps[k_idx], ga)?;
                        row.push(float(mc));
                        row.push(float((q.value - mc) / mc));
                    }
                    Ok(row)
                })
                .collect::<Result<_, CliError>>()?;
            rows.into_iter().for_each(|r| table.push(r));
        }
    }
    let path = table.write(&opts.out, "throughput.csv", &meta, &[])?;
    println!("{}", path.display());
    Ok(())
}
