//! Planted vs. null answers of a STAT(τ) oracle.

use serde::Serialize;
use smoothsq_core::learner::{learn_smoothed, Dataset, FeaturePolicy, LearnerConfig};
use smoothsq_core::rng::{derive_seed, stream};
use smoothsq_core::sq::{distinguish, low_degree_battery, plant, Feature, OracleMode, Query, StatOracle};

use super::{grid, witness};
use crate::artifacts::RunOutput;
use crate::config::{Config, DistinguishConfig, OracleKind};
use crate::error::{CliError, Context};

#[derive(Debug, Clone, Serialize)]
pub struct QueryGap {
    pub query: String,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub degree: usize,
    pub test_error: f64,
    pub opt_sigma: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinguishOutput {
    pub d: usize,
    pub m: usize,
    pub sigma: f64,
    pub tau: f64,
    pub battery_size: usize,
    /// Largest planted/null gap over the low-degree battery.
    pub max_gap: f64,
    pub argmax_query_id: String,
    /// Largest `|E_planted[q] − E_null[q]|` over the battery before any
    /// oracle shift.
    pub max_exact_gap: f64,
    pub samples: usize,
    pub seed: u64,
    pub oracle: OracleKind,
    pub witness_l1: f64,
    /// Gap of `y·T_σ sign(v·x)` along the hidden direction.
    pub threshold_gap: f64,
    /// `2·(l1/2 − τ)`.
    pub threshold_bound: f64,
    /// The learner's hypothesis `y·h(x)` asked as one query.
    pub hypothesis: HypothesisReport,
    pub queries_used: usize,
    pub gaps: Vec<QueryGap>,
}

impl DistinguishOutput {
    pub fn summary(&self) -> String {
        format!(
            "d={} m={} tau={}: battery max gap {:.2e} ({}, exact {:.2e}), threshold gap {:.4} (bound {:.4}), hypothesis gap {:.4}",
            self.d,
            self.m,
            self.tau,
            self.max_gap,
            self.argmax_query_id,
            self.max_exact_gap,
            self.threshold_gap,
            self.threshold_bound,
            self.hypothesis.gap
        )
    }
}

pub fn experiment(c: &DistinguishConfig, grid_nodes: usize, seed: u64) -> Result<DistinguishOutput, CliError> {
    let w = witness(c.sigma, c.m, &grid(grid_nodes)?)?;
    let planted = plant(w.dist.clone(), c.d, derive_seed(seed, 0)).within("sq-harness")?;
    let battery = low_degree_battery(c.d, c.m, c.directions, planted.direction(), derive_seed(seed, 1));
    let needed = battery.len() + 2;
    if needed > c.budget {
        return Err(CliError::Config(format!(
            "distinguish.budget = {} is below the {needed} queries this run asks",
            c.budget
        )));
    }
    let mode = match c.oracle {
        OracleKind::Exact => OracleMode::Exact,
        OracleKind::Sampled => OracleMode::Sampled { failure_prob: c.failure_prob },
    };
    let report = distinguish(&planted, &battery, c.tau, mode, c.m, derive_seed(seed, 2)).within("sq-harness")?;

    let reference = StatOracle::new(&planted, c.tau, OracleMode::Exact, 0, seed).within("sq-harness")?;
    let max_exact_gap = battery.iter().fold(0.0_f64, |m, q| {
        match (reference.exact_expectation(q), reference.null_expectation(q)) {
            (Some(a), Some(b)) => m.max((a - b).abs()),
            _ => m,
        }
    });

    let threshold = Query::projected(1, planted.direction().to_vec(), Feature::SmoothedSign { t: 0.0, sigma: c.sigma })
        .within("sq-harness")?;
    let single = distinguish(&planted, &[threshold], c.tau, mode, c.m, derive_seed(seed, 3)).within("sq-harness")?;

    let data_seed = derive_seed(seed, 4);
    let train = Dataset::sample(&planted, c.n_train, &mut stream(data_seed, 0), "witness labels");
    let test = Dataset::sample(&planted, c.n_train, &mut stream(data_seed, 1), "witness labels");
    let lc = LearnerConfig {
        sigma: c.sigma,
        epsilon: 0.1,
        degree: Some(c.learner_degree),
        policy: FeaturePolicy::KnownDirection(planted.direction().to_vec()),
    };
    let learned = learn_smoothed(&train, &test, &lc, w.opt.value).within("learner")?;
    let query = learned.hypothesis.as_query().expect("known-direction hypotheses are grammar queries");
    let asked = distinguish(&planted, &[query], c.tau, mode, c.m, derive_seed(seed, 5)).within("sq-harness")?;

    Ok(DistinguishOutput {
        d: report.d,
        m: report.m,
        sigma: report.sigma,
        tau: report.tau,
        battery_size: report.battery_size,
        max_gap: report.max_gap,
        argmax_query_id: report.argmax_query_id,
        max_exact_gap,
        samples: report.samples,
        seed,
        oracle: c.oracle,
        witness_l1: w.l1,
        threshold_gap: single.max_gap,
        threshold_bound: 2.0 * (w.l1 / 2.0 - c.tau),
        hypothesis: HypothesisReport {
            degree: learned.degree_used,
            test_error: learned.test_error,
            opt_sigma: learned.opt_sigma,
            gap: asked.max_gap,
        },
        queries_used: needed,
        gaps: report.gaps.into_iter().map(|(query, gap)| QueryGap { query, gap }).collect(),
    })
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<DistinguishOutput, CliError> {
    let report = experiment(&cfg.distinguish, cfg.grid_nodes, cfg.seed)?;
    out.write_json("distinguish.json", &report)?;
    Ok(report)
}
