//! Monte Carlo engine: per trial, draw every link SNR, rank them and keep the
//! selected order statistic(s).
//!
//! Each trial owns its own ChaCha stream derived from `(seed, trial)`, and links
//! are drawn in population order within that stream, so results do not depend
//! on how trials are spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{sample_physical_unchecked, NccsDist};
use crate::error::{validation, Result};
use crate::ris::RisPopulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Squared Gaussian amplitude (the CLT model).
    Nccs,
    /// Sum of Rayleigh products, squared.
    Physical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub pop: RisPopulation,
    pub num_trials: u64,
    pub k: u32,
    pub level: Level,
    pub seed: u64,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        validate_run(&self.pop, self.num_trials, &[self.k])
    }
}

fn validate_run(pop: &RisPopulation, num_trials: u64, ks: &[u32]) -> Result<()> {
    if num_trials == 0 {
        return Err(validation("num_trials must be at least 1"));
    }
    if ks.is_empty() {
        return Err(validation("at least one order k is required"));
    }
    for &k in ks {
        if k == 0 || k > pop.total_r() {
            return Err(validation(format!("order k = {k} must lie in 1..={}", pop.total_r())));
        }
    }
    Ok(())
}

/// Sorted Monte Carlo sample with right-continuous step-function evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Sorts the samples; NaNs are rejected.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(validation("empirical sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `≤ gamma`.
    pub fn eval(&self, gamma: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&x| x <= gamma) as f64 / self.sorted.len() as f64
    }

    /// Sample mean of `f(x)`.
    pub fn mean_of<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.sorted.iter().map(|&x| f(x)).sum::<f64>() / self.sorted.len() as f64
    }
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n − F|`.
///
/// At each distinct sample value both the right limit `F_n(x)` and the left
/// limit `F_n(x−)` are compared, the latter against `F` just below `x`.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalCdf, analytic: F) -> Result<f64> {
    let xs = emp.sorted_samples();
    if xs.is_empty() {
        return Err(validation("KS distance needs a nonempty sample"));
    }
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((at - analytic(x)).abs()).max((below - analytic(x.next_down())).abs());
        i = j;
    }
    Ok(d)
}

fn trial_rng(base: &ChaCha8Rng, trial: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(trial);
    rng.set_word_pos(0);
    rng
}

/// Runs the selection experiment and returns the empirical law of the k-th largest SNR.
pub fn run(sim: &SimConfig) -> Result<EmpiricalCdf> {
    sim.validate()?;
    let mut out = run_orders(&sim.pop, sim.num_trials, &[sim.k], sim.level, sim.seed)?;
    Ok(out.pop().expect("one order requested"))
}

/// Like [`run`], but records several orders from the same trials; the result
/// is aligned with `ks`.
pub fn run_orders(
    pop: &RisPopulation,
    num_trials: u64,
    ks: &[u32],
    level: Level,
    seed: u64,
) -> Result<Vec<EmpiricalCdf>> {
    validate_run(pop, num_trials, ks)?;
    let links: Vec<(u32, NccsDist)> = pop
        .links()
        .map(|(n, p)| (n, NccsDist::new(p).expect("population parameters are valid")))
        .collect();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let max_k = *ks.iter().max().expect("nonempty") as usize;

    let per_trial: Vec<Vec<f64>> = (0..num_trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(links.len()),
            |buf: &mut Vec<f64>, t| {
                let mut rng = trial_rng(&base, t);
                buf.clear();
                for (n, d) in &links {
                    buf.push(match level {
                        Level::Nccs => d.sample(&mut rng),
                        Level::Physical => sample_physical_unchecked(*n, &mut rng),
                    });
                }
                // Descending; ties keep the lower link index first.
                buf.sort_by(|a, b| b.total_cmp(a));
                buf[..max_k].to_vec()
            },
        )
        .collect();

    ks.iter()
        .map(|&k| EmpiricalCdf::new(per_trial.iter().map(|v| v[k as usize - 1]).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ris::{build_population, RisGroupSpec};

    fn pop(groups: &[(u32, u32)]) -> RisPopulation {
        let specs: Vec<_> = groups
            .iter()
            .map(|&(n, r)| RisGroupSpec { n_elements: n, multiplicity: r })
            .collect();
        build_population(&specs).unwrap()
    }

    #[test]
    fn single_draw() {
        let cfg = SimConfig { pop: pop(&[(10, 1)]), num_trials: 1, k: 1, level: Level::Nccs, seed: 3 };
        let e = run(&cfg).unwrap();
        assert_eq!(e.len(), 1);
        let mut rng = trial_rng(&ChaCha8Rng::seed_from_u64(3), 0);
        let d = crate::dist::for_elements(10).unwrap();
        assert_eq!(e.sorted_samples()[0], d.sample(&mut rng));
    }

    #[test]
    fn deterministic_for_seed() {
        let cfg = SimConfig { pop: pop(&[(10, 4), (8, 4)]), num_trials: 5000, k: 2, level: Level::Nccs, seed: 77 };
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert!(a.sorted_samples().iter().zip(b.sorted_samples()).all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = run(&SimConfig { seed: 78, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn independent_of_thread_count() {
        let cfg = SimConfig { pop: pop(&[(10, 6), (7, 6)]), num_trials: 4000, k: 1, level: Level::Nccs, seed: 1 };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run(&cfg).unwrap());
        let b = four.install(|| run(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_configs() {
        let p = pop(&[(10, 3)]);
        let base = SimConfig { pop: p, num_trials: 10, k: 1, level: Level::Nccs, seed: 0 };
        assert!(run(&SimConfig { num_trials: 0, ..base.clone() }).is_err());
        assert!(run(&SimConfig { k: 0, ..base.clone() }).is_err());
        assert!(run(&SimConfig { k: 4, ..base }).is_err());
    }

    #[test]
    fn empirical_eval_is_step() {
        let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(1.0), 0.25);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(10.0), 1.0);
        assert!(EmpiricalCdf::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ks_against_own_step_is_zero() {
        let e = EmpiricalCdf::new(vec![0.3, 1.7, 1.7, 2.2, 9.0]).unwrap();
        assert_eq!(ks_distance(&e, |x| e.eval(x)).unwrap(), 0.0);
        let empty = EmpiricalCdf::new(vec![]).unwrap();
        assert!(ks_distance(&empty, |x| x).is_err());
    }

    #[test]
    fn ks_uniform_example() {
        // Samples at 0.5 against U(0,1): F_n jumps 0 → 1 at 0.5.
        let e = EmpiricalCdf::new(vec![0.5]).unwrap();
        let d = ks_distance(&e, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn max_dominates_second() {
        let p = pop(&[(10, 4), (8, 4), (6, 4)]);
        let es = run_orders(&p, 3000, &[1, 2], Level::Nccs, 9).unwrap();
        for i in 0..400 {
            let g = f64::from(i) * 0.5;
            assert!(es[0].eval(g) <= es[1].eval(g));
        }
    }
}
