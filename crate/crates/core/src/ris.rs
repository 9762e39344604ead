//! Reflecting-surface populations and the SNR parameters they induce.
//!
//! A surface with `N` elements under unit-power Rayleigh hops has a coherent
//! amplitude that is approximately Gaussian with mean `Nπ/4` and variance
//! `N(1 − π²/16)`; its SNR is the square of that amplitude.

use std::f64::consts::PI;

use crate::error::{domain, validation, Result};

/// One homogeneous group: `multiplicity` surfaces with `n_elements` elements each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RisGroupSpec {
    pub n_elements: u32,
    pub multiplicity: u32,
}

impl RisGroupSpec {
    pub fn new(n_elements: u32, multiplicity: u32) -> Result<Self> {
        if n_elements == 0 {
            return Err(validation("a group needs at least one reflecting element"));
        }
        if multiplicity == 0 {
            return Err(validation("a group needs a multiplicity of at least one"));
        }
        Ok(Self { n_elements, multiplicity })
    }
}

/// Parameters of a one-degree-of-freedom non-central chi-square SNR:
/// noncentrality `lambda` (squared amplitude mean) and `sigma_sq` (amplitude variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NccsParams {
    pub lambda: f64,
    pub sigma_sq: f64,
}

impl NccsParams {
    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }

    /// Mean of the underlying Gaussian amplitude, `√λ`.
    #[inline]
    pub fn amplitude_mean(&self) -> f64 {
        self.lambda.sqrt()
    }
}

pub fn params_from_elements(n: u32) -> Result<NccsParams> {
    if n == 0 {
        return Err(domain("element count must be at least 1"));
    }
    let n = f64::from(n);
    Ok(NccsParams {
        lambda: (n * PI / 4.0).powi(2),
        sigma_sq: n * (1.0 - PI * PI / 16.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisGroup {
    pub spec: RisGroupSpec,
    pub params: NccsParams,
}

/// A validated collection of groups with pairwise distinct element counts.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPopulation {
    groups: Vec<RisGroup>,
    total_r: u32,
}

pub fn build_population(groups: &[RisGroupSpec]) -> Result<RisPopulation> {
    if groups.is_empty() {
        return Err(validation("population needs at least one group"));
    }
    let mut out = Vec::with_capacity(groups.len());
    let mut total: u32 = 0;
    for (i, g) in groups.iter().enumerate() {
        let g = RisGroupSpec::new(g.n_elements, g.multiplicity)?;
        if groups[..i].iter().any(|h| h.n_elements == g.n_elements) {
            return Err(validation(format!(
                "duplicate group with {} elements; merge multiplicities before building",
                g.n_elements
            )));
        }
        total = total
            .checked_add(g.multiplicity)
            .ok_or_else(|| validation("total multiplicity overflows"))?;
        out.push(RisGroup { spec: g, params: params_from_elements(g.n_elements)? });
    }
    Ok(RisPopulation { groups: out, total_r: total })
}

impl RisPopulation {
    /// Splits `total_r` surfaces over `elements` in proportion to `weights`.
    /// The split must be exact.
    pub fn split(elements: &[u32], weights: &[u32], total_r: u32) -> Result<Self> {
        if elements.len() != weights.len() {
            return Err(validation(format!(
                "{} element counts but {} weights",
                elements.len(),
                weights.len()
            )));
        }
        let wsum: u64 = weights.iter().map(|&w| u64::from(w)).sum();
        if wsum == 0 {
            return Err(validation("weights must not all be zero"));
        }
        let specs = elements
            .iter()
            .zip(weights)
            .map(|(&n, &w)| {
                let share = u64::from(total_r) * u64::from(w);
                if share % wsum != 0 {
                    return Err(validation(format!(
                        "total_r = {total_r} does not split exactly with weights {weights:?}"
                    )));
                }
                Ok(RisGroupSpec { n_elements: n, multiplicity: (share / wsum) as u32 })
            })
            .collect::<Result<Vec<_>>>()?;
        build_population(&specs)
    }

    pub fn groups(&self) -> &[RisGroup] {
        &self.groups
    }

    /// Number of distinct groups (P).
    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn total_r(&self) -> u32 {
        self.total_r
    }

    /// Per-link parameters, each group expanded `multiplicity` times in group order.
    pub fn links(&self) -> impl Iterator<Item = (u32, NccsParams)> + '_ {
        self.groups.iter().flat_map(|g| {
            std::iter::repeat_n((g.spec.n_elements, g.params), g.spec.multiplicity as usize)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixty_elements_match_reported_values() {
        let p = params_from_elements(60).unwrap();
        assert!((p.lambda - 2220.7).abs() <= 0.1, "{}", p.lambda);
        assert!((p.sigma() - 4.79).abs() <= 0.01, "{}", p.sigma());
    }

    #[test]
    fn single_element() {
        let p = params_from_elements(1).unwrap();
        assert_eq!(p.lambda, (PI / 4.0).powi(2));
        assert!((p.lambda - PI * PI / 16.0).abs() < 1e-16);
        assert!((p.sigma_sq - (1.0 - PI * PI / 16.0)).abs() < 1e-16);
    }

    #[test]
    fn ten_elements() {
        let p = params_from_elements(10).unwrap();
        assert!((p.lambda - 61.685).abs() < 1e-3);
        assert!((p.sigma_sq - 3.8315).abs() < 1e-4);
    }

    #[test]
    fn zero_elements_rejected() {
        assert!(params_from_elements(0).is_err());
    }

    #[test]
    fn monotone_and_linear_ratio() {
        let c = (PI * PI / 16.0) / (1.0 - PI * PI / 16.0);
        let mut prev = params_from_elements(1).unwrap();
        for n in 2..=1000u32 {
            let p = params_from_elements(n).unwrap();
            assert!(p.lambda > prev.lambda && p.sigma_sq > prev.sigma_sq);
            let ratio = p.lambda / p.sigma_sq;
            assert!((ratio - c * f64::from(n)).abs() <= 1e-12 * ratio);
            prev = p;
        }
    }

    #[test]
    fn equal_split_population() {
        let pop = build_population(&[
            RisGroupSpec { n_elements: 10, multiplicity: 4 },
            RisGroupSpec { n_elements: 8, multiplicity: 4 },
            RisGroupSpec { n_elements: 6, multiplicity: 4 },
        ])
        .unwrap();
        assert_eq!(pop.total_r(), 12);
        assert_eq!(pop.num_groups(), 3);
        assert_eq!(pop.links().count(), 12);
    }

    #[test]
    fn iid_population() {
        let pop = build_population(&[RisGroupSpec { n_elements: 12, multiplicity: 48 }]).unwrap();
        assert_eq!((pop.total_r(), pop.num_groups()), (48, 1));
    }

    #[test]
    fn weighted_split() {
        let pop = RisPopulation::split(&[15, 13, 11], &[2, 1, 1], 12).unwrap();
        let m: Vec<u32> = pop.groups().iter().map(|g| g.spec.multiplicity).collect();
        assert_eq!(m, vec![6, 3, 3]);
        assert_eq!(pop.total_r(), 12);
        assert!(RisPopulation::split(&[15, 13, 11], &[2, 1, 1], 10).is_err());
    }

    #[test]
    fn invalid_populations() {
        assert!(build_population(&[]).is_err());
        let dup = [
            RisGroupSpec { n_elements: 8, multiplicity: 2 },
            RisGroupSpec { n_elements: 8, multiplicity: 3 },
        ];
        assert!(matches!(build_population(&dup), Err(crate::Error::Validation(_))));
        assert!(build_population(&[RisGroupSpec { n_elements: 8, multiplicity: 0 }]).is_err());
    }
}
