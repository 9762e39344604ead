//! Built-in self-check suite: special functions, oracle identities and
//! seeded Monte Carlo agreement, each reported with its measured value.

use ris_evt::metrics::density_mass;
use ris_evt::oracle::{exact_kth_cdf, exact_max_cdf};
use ris_evt::quad::QuadSpec;
use ris_evt::sim::{ks_distance, run_orders};
use ris_evt::special::marcum_q_half;
use ris_evt::{
    build_evt_model, build_iid_model, build_population, params_from_elements, EpsChoice, Level, Mode,
    RisGroupSpec, RisPopulation,
};

use crate::csvout::{float, Meta, Table};
use crate::{CliError, RunOptions};

const DEFAULT_SEED: u64 = 20_240_601;
const DEFAULT_TRIALS: u64 = 100_000;
/// Gross-error gate for EVT-vs-simulation agreement; catches broken
/// normalizing constants, not the model's own finite-R bias.
const EVT_KS_GATE: f64 = 0.10;

struct Check {
    name: &'static str,
    measured: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Check {
    Check { name, measured, tolerance, pass: measured <= tolerance, detail }
}

fn groups(specs: &[(u32, u32)]) -> Result<RisPopulation, CliError> {
    let specs: Vec<_> = specs.iter().map(|&(n, r)| RisGroupSpec { n_elements: n, multiplicity: r }).collect();
    Ok(build_population(&specs)?)
}

// Sum over all "at or below γ" subsets large enough to leave fewer than k above.
fn enumerated_kth_cdf(cdfs: &[f64], k: usize) -> f64 {
    let r = cdfs.len();
    (0u32..1 << r)
        .filter(|m| m.count_ones() as usize + k > r)
        .map(|m| {
            cdfs.iter()
                .enumerate()
                .map(|(j, &f)| if m & (1 << j) != 0 { f } else { 1.0 - f })
                .product::<f64>()
        })
        .sum()
}

pub fn run(opts: &RunOptions, perturb: bool) -> Result<bool, CliError> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let trials = opts.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Validation("--trials: the check suite needs trials > 0".into()));
    }
    let mut checks = Vec::new();

    let p60 = params_from_elements(60)?;
    checks.push(check(
        "parameters N=60 lambda",
        (p60.lambda - 2220.7).abs(),
        0.1,
        format!("lambda={:.4}", p60.lambda),
    ));
    checks.push(check(
        "parameters N=60 sigma",
        (p60.sigma() - 4.79).abs(),
        0.01,
        format!("sigma={:.4}", p60.sigma()),
    ));

    // Q_{1/2}(a, b) = Φ̄(b − a) + Φ̄(b + a), against tabulated normal tails.
    let reference = [
        (0.0, 1.0, 0.317_310_507_862_914_1),
        (0.0, 2.0, 0.045_500_263_896_358_42),
        (0.0, 3.0, 0.002_699_796_063_260_187),
        (1.0, 1.0, 0.522_750_131_948_179_2),
        (2.0, 1.0, 0.841_344_746_068_542_9 + 0.001_349_898_031_630_094_6),
    ];
    let mut worst: f64 = 0.0;
    for (a, b, want) in reference {
        worst = worst.max((marcum_q_half(a, b)? - want).abs());
    }
    checks.push(check("marcum-q tabulated values", worst, 1e-15, format!("max gap={worst:.3e}")));

    // Oracle: DP against enumeration and against the product form.
    let mut worst_enum: f64 = 0.0;
    let mut worst_prod: f64 = 0.0;
    for specs in [vec![(10, 2), (8, 2), (6, 2)], vec![(20, 1), (5, 4)], vec![(12, 6)]] {
        let pop = groups(&specs)?;
        for i in 0..60 {
            let g = 2.0 * f64::from(i);
            let cdfs: Vec<f64> = pop
                .links()
                .map(|(_, p)| ris_evt::dist::NccsDist::new(p).and_then(|d| d.cdf(g)))
                .collect::<Result<_, _>>()?;
            for k in 1..=pop.total_r() {
                worst_enum = worst_enum.max((exact_kth_cdf(&pop, k, g)? - enumerated_kth_cdf(&cdfs, k as usize)).abs());
            }
            worst_prod = worst_prod.max((exact_max_cdf(&pop, g)? - exact_kth_cdf(&pop, 1, g)?).abs());
        }
    }
    checks.push(check("oracle dp vs enumeration", worst_enum, 1e-12, format!("max gap={worst_enum:.3e}")));
    checks.push(check("oracle product vs dp", worst_prod, 1e-13, format!("max gap={worst_prod:.3e}")));

    // Single-group population against the closed-form i.i.d. constants.
    let single = build_evt_model(&groups(&[(10, 24)])?, EpsChoice::Auto)?;
    let iid = build_iid_model(10, 24, EpsChoice::Auto)?;
    let same = single.a_r.to_bits() == iid.a_r.to_bits()
        && single.b_r.to_bits() == iid.b_r.to_bits()
        && single.c1.to_bits() == iid.c1.to_bits();
    checks.push(check("iid path equivalence", if same { 0.0 } else { 1.0 }, 0.0, format!("bitwise equal: {same}")));

    // Seeded simulation at R = 48, N = (10, 8, 6).
    let pop = RisPopulation::split(&[10, 8, 6], &[1, 1, 1], 48)?;
    let mut model = build_evt_model(&pop, EpsChoice::Auto)?;
    if perturb {
        model.c1 = -model.c1;
        model.b_r = model.a_r * (f64::from(model.r_tilde).ln() - model.c1);
    }
    let emp = run_orders(&pop, trials, &[1], Level::Nccs, seed)?.remove(0);
    let dkw = 1.36 / (trials as f64).sqrt();
    let d_exact = ks_distance(&emp, |g| exact_max_cdf(&pop, g.max(0.0)).unwrap_or(f64::NAN))?;
    checks.push(check("simulation vs exact (KS)", d_exact, dkw, format!("KS={d_exact:.5} bound={dkw:.5}")));
    let d_evt = ks_distance(&emp, |g| model.kth_cdf(1, g, Mode::Finite).unwrap_or(f64::NAN))?;
    checks.push(check("simulation vs finite EVT (KS)", d_evt, EVT_KS_GATE, format!("KS={d_evt:.5}")));

    let mut worst_mass: f64 = 0.0;
    for k in 1..=3 {
        worst_mass = worst_mass.max((density_mass(&model, k, &QuadSpec::default())?.value - 1.0).abs());
    }
    checks.push(check("density mass", worst_mass, 1e-6, format!("max |mass-1|={worst_mass:.3e}")));

    let mut table = Table::new(["check", "status", "measured", "tolerance"].map(String::from).to_vec());
    for c in &checks {
        println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        table.push(vec![
            c.name.into(),
            if c.pass { "pass" } else { "fail" }.into(),
            float(c.measured),
            float(c.tolerance),
        ]);
    }
    if opts.out_given {
        let meta = Meta::new("validate", None, seed, trials);
        let path = table.write(&opts.out, "validate.csv", &meta, &[("perturb", perturb.to_string())])?;
        println!("{}", path.display());
    }
    Ok(checks.iter().all(|c| c.pass))
}
