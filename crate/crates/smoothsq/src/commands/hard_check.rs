//! Monte Carlo checks of the moment-matching sampler.

use serde::Serialize;
use smoothsq_core::hard::{
    density_ratio_bound, frac_in_set, tv_to_conditioned_gaussian, Draw, FractionalMass, HardSampler,
    HardSamplerConfig, KwiseTable,
};
use smoothsq_core::stats::{Histogram, PowerSums};

use super::interval_set;
use crate::artifacts::RunOutput;
use crate::config::{Config, HardCheckConfig};
use crate::error::{CliError, Context};
use crate::parallel::chunked;

const TAG: u64 = 0x4843;
/// Moment checks pass within this many standard errors.
pub const MOMENT_Z: f64 = 4.0;
/// Slack, in standard errors, for the fraction and density-ratio checks.
pub const SLACK_SE: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub order: usize,
    pub empirical: f64,
    pub target: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioRow {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub expected_mass: f64,
    pub ratio: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionReport {
    pub fraction: f64,
    pub std_error: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub max_ratio: f64,
    /// `1/|S|`.
    pub bound: f64,
    pub max_excess_z: f64,
    pub excluded_bins: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KwiseReport {
    pub tuples: u64,
    pub cells_per_axis: usize,
    pub chi_square: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HardCheckReport {
    pub seed: u64,
    pub k: usize,
    pub c: usize,
    pub set: Vec<[f64; 2]>,
    pub draws: u64,
    pub conditioned_fraction: f64,
    pub tail_probability: f64,
    pub max_abs_moment_z: f64,
    pub moments_pass: bool,
    pub fractional_mass: FractionReport,
    pub density_ratio: DensityReport,
    /// Histogram TV distance to the conditioned Gaussian; a diagnostic.
    pub tv_to_conditioned_gaussian: f64,
    pub kwise: KwiseReport,
    #[serde(skip)]
    pub moments: Vec<MomentRow>,
    #[serde(skip)]
    pub ratios: Vec<RatioRow>,
}

impl HardCheckReport {
    pub fn pass(&self) -> bool {
        self.moments_pass && self.fractional_mass.pass && self.density_ratio.pass
    }

    pub fn summary(&self) -> String {
        format!(
            "k={} draws={}: max |z| {:.2}, fraction {:.5} (bound {:.5}), max ratio {:.3} (bound {}), pass={}",
            self.k,
            self.draws,
            self.max_abs_moment_z,
            self.fractional_mass.fraction,
            self.fractional_mass.bound,
            self.density_ratio.max_ratio,
            self.density_ratio.bound,
            self.pass()
        )
    }
}

struct Tally {
    sums: PowerSums,
    frac: FractionalMass,
    hist: Histogram,
    kwise: KwiseTable,
    conditioned: u64,
}

/// Draws `h.draws` samples and runs every check, without writing files.
pub fn check(h: &HardCheckConfig, seed: u64) -> Result<HardCheckReport, CliError> {
    let set = interval_set(&h.set)?;
    let scfg = HardSamplerConfig::new(h.k, h.c, set).within("hard-instance")?;
    let sampler = HardSampler::new(scfg.clone());
    let sqrt_ck = scfg.sqrt_ck();
    let new_tally = || Tally {
        sums: PowerSums::new(h.k),
        frac: FractionalMass::default(),
        hist: Histogram::new(h.hist_lo, h.hist_hi, h.bins),
        kwise: KwiseTable::new(h.k, h.kwise_cells),
        conditioned: 0,
    };
    let parts = chunked(seed, TAG, h.draws, |rng, count| {
        let mut t = new_tally();
        let mut draw = Draw::default();
        let mut tuple = Vec::with_capacity(h.k);
        for _ in 0..count {
            let x = sampler.sample_with(rng, &mut draw);
            t.sums.push(x);
            t.hist.push(x);
            t.frac.push(frac_in_set(x, sqrt_ck, &scfg.set));
            if draw.conditioned {
                t.conditioned += 1;
                tuple.clear();
                tuple.extend(draw.values.iter().zip(&draw.uniform).filter(|(_, u)| **u).map(|(v, _)| *v).take(h.k));
                if tuple.len() == h.k {
                    t.kwise.push(&tuple);
                }
            }
        }
        t
    });
    let mut total = new_tally();
    for p in &parts {
        total.sums.merge(&p.sums);
        total.frac.merge(&p.frac);
        total.hist.merge(&p.hist);
        total.kwise.merge(&p.kwise);
        total.conditioned += p.conditioned;
    }

    let moments: Vec<MomentRow> = total
        .sums
        .gaussian_checks()
        .into_iter()
        .map(|c| MomentRow { order: c.order, empirical: c.empirical, target: c.target, std_error: c.std_error, z: c.z })
        .collect();
    let max_abs_moment_z = moments.iter().fold(0.0_f64, |m, r| m.max(r.z.abs()));
    let bound = FractionalMass::bound(h.k);
    let fraction = total.frac.fraction();
    let se = total.frac.std_error();
    let density = density_ratio_bound(&total.hist, h.min_bin_count).within("hard-instance")?;
    let ratio_bound = 1.0 / scfg.set.measure();
    let max_excess_z = density.max_excess_z(ratio_bound);
    let (chi_square, p_value) = total.kwise.uniformity();
    Ok(HardCheckReport {
        seed,
        k: h.k,
        c: h.c,
        set: h.set.clone(),
        draws: h.draws,
        conditioned_fraction: total.conditioned as f64 / h.draws as f64,
        tail_probability: scfg.tail_probability(),
        max_abs_moment_z,
        moments_pass: max_abs_moment_z <= MOMENT_Z,
        fractional_mass: FractionReport {
            fraction,
            std_error: se,
            bound,
            pass: fraction >= bound - SLACK_SE * (fraction * (1.0 - fraction) / h.draws as f64).sqrt(),
        },
        density_ratio: DensityReport {
            max_ratio: density.max_ratio,
            bound: ratio_bound,
            max_excess_z,
            excluded_bins: density.excluded,
            pass: max_excess_z <= SLACK_SE,
        },
        tv_to_conditioned_gaussian: tv_to_conditioned_gaussian(&total.hist, &scfg),
        kwise: KwiseReport { tuples: total.kwise.total(), cells_per_axis: h.kwise_cells, chi_square, p_value },
        moments,
        ratios: density
            .bins
            .iter()
            .map(|b| RatioRow {
                lo: b.lo,
                hi: b.hi,
                count: b.count,
                expected_mass: b.expected_mass,
                ratio: b.ratio,
                std_error: b.std_error,
            })
            .collect(),
    })
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<HardCheckReport, CliError> {
    let h = &cfg.hard_check;
    let report = check(h, cfg.seed)?;
    out.write_csv("moments.csv", &report.moments)?;
    out.write_csv("density_ratio.csv", &report.ratios)?;
    out.write_json("hard_check.json", &report)?;
    Ok(report)
}
