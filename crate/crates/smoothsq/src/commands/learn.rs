//! L1 polynomial regression runs on planted data.

use rayon::prelude::*;
use serde::Serialize;
use smoothsq_core::gaussian::SignPattern;
use smoothsq_core::hard::{default_thresholds, opt_sigma, LabelProfile, LabeledHardDistribution, OptSigma};
use smoothsq_core::learner::{learn_smoothed, Dataset, FeaturePolicy, LearnerConfig};
use smoothsq_core::rng::{derive_seed, stream};
use smoothsq_core::sq::plant;

use super::{grid, witness};
use crate::artifacts::RunOutput;
use crate::config::{Config, LabelKind, LearnConfig, PolicyKind};
use crate::error::{CliError, Context};

pub const CSV: &str = "learn.csv";

#[derive(Debug, Clone, Serialize)]
pub struct LearnRow {
    pub d: usize,
    /// Degree actually fitted (lowered if the design was rank deficient).
    pub m: usize,
    pub sigma: f64,
    pub epsilon: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub test_error: f64,
    pub opt_sigma: f64,
    pub gap: f64,
    pub seed: u64,
    pub degree_requested: usize,
    pub policy: PolicyKind,
    pub labels: LabelKind,
    pub features: usize,
    pub train_error: f64,
    pub train_l1: f64,
    pub witness_l1: Option<f64>,
    pub lp_iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LearnSummary {
    pub seed: u64,
    pub labels: LabelKind,
    pub sigma: f64,
    pub d: usize,
    pub opt_sigma: f64,
    pub opt_threshold: f64,
    pub witness_l1: Option<f64>,
    pub rows: Vec<LearnRow>,
}

impl LearnSummary {
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("m={} seed={} test error {:.4}", r.m, r.seed, r.test_error))
            .collect();
        format!("OPT={:.4}; {}", self.opt_sigma, parts.join(", "))
    }
}

/// The one-dimensional labeled law and its smoothed optimum.
fn base(l: &LearnConfig, grid_nodes: usize) -> Result<(LabeledHardDistribution, OptSigma, Option<f64>), CliError> {
    match l.labels {
        LabelKind::Witness => {
            let w = witness(l.sigma, l.witness_degree, &grid(grid_nodes)?)?;
            Ok((w.dist, w.opt, Some(w.l1)))
        }
        LabelKind::Halfspace | LabelKind::Coins => {
            let profile = match l.labels {
                LabelKind::Halfspace => LabelProfile::Pattern(SignPattern::new(vec![0.0], -1.0)),
                _ => LabelProfile::Constant(0.0),
            };
            let dist = LabeledHardDistribution::new(profile, l.sigma).within("hard-instance")?;
            let opt = opt_sigma(&dist, &default_thresholds());
            Ok((dist, opt, None))
        }
    }
}

/// Every configured run for every seed, in seed-major order.
pub fn learn(l: &LearnConfig, grid_nodes: usize, master: u64) -> Result<LearnSummary, CliError> {
    let (dist, opt, witness_l1) = base(l, grid_nodes)?;
    let per_seed: Vec<Result<Vec<LearnRow>, CliError>> = l
        .seeds
        .par_iter()
        .map(|&s| {
            let seed = derive_seed(master, s);
            let planted = plant(dist.clone(), l.d, seed).within("sq-harness")?;
            let data_seed = derive_seed(seed, 1);
            let provenance = format!("{:?} labels, seed {s}", l.labels);
            let train = Dataset::sample(&planted, l.n_train, &mut stream(data_seed, 0), &provenance);
            let test = Dataset::sample(&planted, l.n_test, &mut stream(data_seed, 1), &provenance);
            l.runs
                .iter()
                .map(|run| {
                    let policy = match run.policy {
                        PolicyKind::Full => FeaturePolicy::FullHermite,
                        PolicyKind::Known => FeaturePolicy::KnownDirection(planted.direction().to_vec()),
                    };
                    let lc = LearnerConfig { sigma: l.sigma, epsilon: l.epsilon, degree: run.degree, policy };
                    let r = learn_smoothed(&train, &test, &lc, opt.value).within("learner")?;
                    log::info!("seed {s}, degree {}: test error {:.4}", r.degree_used, r.test_error);
                    Ok(LearnRow {
                        d: l.d,
                        m: r.degree_used,
                        sigma: l.sigma,
                        epsilon: l.epsilon,
                        n_train: l.n_train,
                        n_test: l.n_test,
                        test_error: r.test_error,
                        opt_sigma: r.opt_sigma,
                        gap: r.gap(),
                        seed: s,
                        degree_requested: r.degree_requested,
                        policy: run.policy,
                        labels: l.labels,
                        features: r.features,
                        train_error: r.train_error,
                        train_l1: r.train_l1,
                        witness_l1,
                        lp_iterations: r.lp_iterations,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(LearnSummary {
        seed: master,
        labels: l.labels,
        sigma: l.sigma,
        d: l.d,
        opt_sigma: opt.value,
        opt_threshold: opt.threshold,
        witness_l1,
        rows,
    })
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<LearnSummary, CliError> {
    let summary = learn(&cfg.learn, cfg.grid_nodes, cfg.seed)?;
    out.write_csv(CSV, &summary.rows)?;
    out.write_json("learn.json", &summary)?;
    Ok(summary)
}
