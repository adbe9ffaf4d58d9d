//! Every invariant suite at reduced size.

use serde::Serialize;

use super::grid;
use crate::artifacts::RunOutput;
use crate::checks::{self, CheckRow};
use crate::config::{Config, DistinguishConfig, GapConfig, HardCheckConfig, LearnConfig, LearnRun, PolicyKind};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRow>,
}

impl SelftestReport {
    pub fn failures(&self) -> usize {
        self.failed
    }

    pub fn summary(&self) -> String {
        format!("{} checks passed, {} failed", self.passed, self.failed)
    }
}

/// Runs the suites with sizes scaled from `cfg.selftest.draws`.
pub fn suites(cfg: &Config) -> Result<Vec<CheckRow>, CliError> {
    let draws = cfg.selftest.draws;
    let seed = cfg.seed;
    let g = grid(cfg.grid_nodes)?;
    let mut rows = Vec::new();
    rows.extend(checks::truncation(&[0.5, 1.0], 30, &g)?);
    rows.extend(checks::duality(&[0.3, 1.0], 12, &g)?);
    rows.extend(checks::decay(1.0, 20, &g)?);
    rows.extend(checks::plateau(0.15, 1.0, 8, &g)?);
    rows.extend(checks::sampler(&HardCheckConfig { draws: draws.max(100_000), ..HardCheckConfig::default() }, seed)?);
    rows.extend(checks::threshold_gap(&GapConfig { draws: 5 * draws, ..GapConfig::default() }, seed)?);
    let n = (draws as usize / 10).max(5_000);
    let learn = LearnConfig {
        n_train: n,
        n_test: n,
        seeds: vec![0],
        runs: vec![
            LearnRun { degree: Some(4), policy: PolicyKind::Full },
            LearnRun { degree: Some(16), policy: PolicyKind::Known },
        ],
        ..LearnConfig::default()
    };
    // Smaller samples get a three-standard-error allowance on the lower side.
    rows.extend(checks::learner(&learn, cfg.grid_nodes, seed, 3.0)?);
    rows.extend(checks::distinguisher(
        &DistinguishConfig { n_train: n / 4, ..DistinguishConfig::default() },
        cfg.grid_nodes,
        seed,
    )?);
    rows.extend(checks::analytic(20, seed)?);
    Ok(rows)
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<SelftestReport, CliError> {
    let checks = suites(cfg)?;
    for c in &checks {
        log::info!("{} {}: {} {}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.check, c.value);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = SelftestReport { seed: cfg.seed, passed: checks.len() - failed, failed, checks };
    out.write_csv("selftest.csv", &report.checks)?;
    out.write_json("selftest.json", &report)?;
    Ok(report)
}
