use rand::Rng;

use super::sampler::{Draw, HardSampler, HardSamplerConfig};
use crate::gaussian::SmoothedThreshold;
use crate::stats::MeanAccumulator;

/// `1/(2√(Ck))`: half a period of the fractional structure.
pub fn default_t_prime(cfg: &HardSamplerConfig) -> f64 {
    0.5 / cfg.sqrt_ck()
}

/// Accumulates `T_σ sign(X − t) − T_σ sign(X − t')` over `n` hard draws.
pub fn threshold_gap_chunk<R: Rng + ?Sized>(
    sampler: &HardSampler,
    sigma: f64,
    t: f64,
    t_prime: f64,
    n: usize,
    rng: &mut R,
) -> MeanAccumulator {
    let g = SmoothedThreshold { t, sigma };
    let g_prime = SmoothedThreshold { t: t_prime, sigma };
    let mut acc = MeanAccumulator::default();
    let mut draw = Draw::default();
    for _ in 0..n {
        let x = sampler.sample_with(rng, &mut draw);
        acc.push(g.eval(x) - g_prime.eval(x));
    }
    acc
}

/// Gap between two nearby smoothed thresholds under the Gaussian and
/// under the hard distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGapReport {
    pub k: usize,
    pub c: usize,
    pub sigma: f64,
    pub t: f64,
    pub t_prime: f64,
    /// `E[g(G) − g'(G)]`, in closed form.
    pub gaussian_gap: f64,
    pub hard_gap: f64,
    pub hard_gap_std_error: f64,
    pub samples: u64,
}

impl ThresholdGapReport {
    pub fn new(cfg: &HardSamplerConfig, sigma: f64, t: f64, t_prime: f64, acc: &MeanAccumulator) -> Self {
        let gaussian_gap = SmoothedThreshold { t, sigma }.gaussian_mean()
            - SmoothedThreshold { t: t_prime, sigma }.gaussian_mean();
        Self {
            k: cfg.k,
            c: cfg.c,
            sigma,
            t,
            t_prime,
            gaussian_gap,
            hard_gap: acc.mean(),
            hard_gap_std_error: acc.std_error(),
            samples: acc.count,
        }
    }

    /// `|gaussian_gap| / |hard_gap|`.
    pub fn ratio(&self) -> f64 {
        self.gaussian_gap.abs() / self.hard_gap.abs()
    }
}
