//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        // Gauss nodes sit at the odd Kronrod indices.
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the summed
/// error estimate drops below `max(abs_tol, rel_tol·|I|)`.
///
/// Exhausting the interval budget yields [`Error::Numerical`] carrying the
/// partial estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, intervals: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, spec)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }

    let mut segments = vec![kronrod(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(Error::Numerical {
                message: "integrand produced a non-finite value".into(),
                partial: value,
                error_estimate: error,
            });
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult { value, error_estimate: error, intervals: segments.len() });
        }
        if segments.len() >= spec.max_intervals {
            return Err(Error::Numerical {
                message: format!("quadrature did not converge within {} intervals", spec.max_intervals),
                partial: value,
                error_estimate: error,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::Numerical {
                message: "segment width fell below floating-point resolution".into(),
                partial: value,
                error_estimate: error,
            });
        }
        segments.push(kronrod(&f, seg.a, mid));
        segments.push(kronrod(&f, mid, seg.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, &QuadSpec::default()).unwrap();
        assert!((r.value - 13.5).abs() < 1e-13);
    }

    #[test]
    fn peaked_gaussian() {
        let spec = QuadSpec { abs_tol: 1e-12, ..Default::default() };
        let r = integrate(|x| (-(x - 3.0) * (x - 3.0) / 0.02).exp(), -5.0, 10.0, &spec).unwrap();
        let exact = (0.02 * std::f64::consts::PI).sqrt();
        assert!((r.value - exact).abs() < 1e-11, "{} vs {}", r.value, exact);
        assert!(r.error_estimate <= 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let r = integrate(|x| x.exp(), 1.0, 0.0, &QuadSpec::default()).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let spec = QuadSpec { abs_tol: 1e-14, rel_tol: 0.0, max_intervals: 3 };
        match integrate(|x| (1.0 / x).sin(), 1e-4, 1.0, &spec) {
            Err(Error::Numerical { partial, .. }) => assert!(partial.is_finite()),
            other => panic!("expected numerical error, got {other:?}"),
        }
    }
}
