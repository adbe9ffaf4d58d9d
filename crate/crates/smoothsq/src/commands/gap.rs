//! Gap between two nearby smoothed thresholds, Gaussian vs. hard inputs.

use serde::Serialize;
use smoothsq_core::hard::{default_t_prime, threshold_gap_chunk, HardSampler, HardSamplerConfig, ThresholdGapReport};
use smoothsq_core::stats::MeanAccumulator;

use super::interval_set;
use crate::artifacts::RunOutput;
use crate::config::{Config, GapConfig};
use crate::error::{CliError, Context};
use crate::parallel::chunked;

const TAG: u64 = 0x4741;

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub seed: u64,
    pub k: usize,
    pub c: usize,
    pub sigma: f64,
    pub t: f64,
    pub t_prime: f64,
    pub gaussian_gap: f64,
    pub hard_gap: f64,
    pub hard_gap_std_error: f64,
    pub samples: u64,
    /// `|gaussian_gap| / |hard_gap|`.
    pub ratio: f64,
}

impl GapReport {
    pub fn summary(&self) -> String {
        format!(
            "sigma={} k={}: gaussian gap {:.6}, hard gap {:.6} +- {:.1e}, ratio {:.3}",
            self.sigma, self.k, self.gaussian_gap, self.hard_gap, self.hard_gap_std_error, self.ratio
        )
    }
}

pub fn measure(g: &GapConfig, seed: u64) -> Result<GapReport, CliError> {
    let scfg = HardSamplerConfig::new(g.k, g.c, interval_set(&g.set)?).within("hard-instance")?;
    let sampler = HardSampler::new(scfg.clone());
    let t_prime = g.t_prime.unwrap_or(g.t + default_t_prime(&scfg));
    let parts = chunked(seed, TAG, g.draws, |rng, count| {
        threshold_gap_chunk(&sampler, g.sigma, g.t, t_prime, count as usize, rng)
    });
    let mut acc = MeanAccumulator::default();
    for p in &parts {
        acc.merge(p);
    }
    let r = ThresholdGapReport::new(&scfg, g.sigma, g.t, t_prime, &acc);
    Ok(GapReport {
        seed,
        k: r.k,
        c: r.c,
        sigma: r.sigma,
        t: r.t,
        t_prime: r.t_prime,
        gaussian_gap: r.gaussian_gap,
        hard_gap: r.hard_gap,
        hard_gap_std_error: r.hard_gap_std_error,
        samples: r.samples,
        ratio: r.ratio(),
    })
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<GapReport, CliError> {
    let report = measure(&cfg.gap, cfg.seed)?;
    out.write_json("gap.json", &report)?;
    Ok(report)
}
