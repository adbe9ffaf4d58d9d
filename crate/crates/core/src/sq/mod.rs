//! Statistical-query simulation on planted distributions.
//!
//! A [`PlantedDistribution`] hides a one-dimensional labeled distribution
//! along a random direction `v` of `R^d` and is Gaussian on `v^⊥`; its null
//! counterpart has a Gaussian `x` and an independent fair-coin label.
//! [`StatOracle`] answers bounded queries up to a tolerance `τ`, either
//! exactly with an adversarial shift toward the null answer, or from
//! samples.

mod oracle;
mod planted;
mod query;

pub use oracle::{distinguish, hoeffding_samples, DistinguishReport, OracleMode, StatOracle};
pub use planted::{plant, random_unit_vector, PlantedDistribution};
pub use query::{low_degree_battery, Feature, Query};
