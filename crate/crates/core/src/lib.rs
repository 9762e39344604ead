//! Best and k-th-best link selection over several reflecting surfaces.
//!
//! Each surface contributes a one-degree-of-freedom non-central chi-square SNR
//! whose parameters depend on its element count. The crate provides the exact
//! single-link law, exact order-statistic CDFs for finite populations,
//! Gumbel-domain asymptotics (finite-`R` and limiting forms), outage and
//! throughput metrics, and a seeded Monte Carlo engine to check them against.

pub mod dist;
pub mod error;
pub mod evt;
pub mod metrics;
pub mod oracle;
pub mod quad;
pub mod ris;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
pub use evt::{build_evt_model, build_iid_model, EpsChoice, EvtModel, Mode, StochasticOrder};
pub use ris::{build_population, params_from_elements, NccsParams, RisGroupSpec, RisPopulation};
pub use sim::{EmpiricalCdf, Level, SimConfig};
pub use special::ChernoffEps;
