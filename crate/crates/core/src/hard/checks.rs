#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

use super::sampler::{HardSamplerConfig, IntervalSet};
use crate::error::{invalid, Result};
use crate::gaussian::normal_interval_mass;
use crate::stats::{chi_square, chi_square_sf, Histogram};

/// Whether `frac(x·√(Ck))` lies in `set`.
pub fn frac_in_set(x: f64, sqrt_ck: f64, set: &IntervalSet) -> bool {
    let s = x * sqrt_ck;
    set.contains(s - s.floor())
}

/// Counts of draws whose scaled fractional part falls in `S`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FractionalMass {
    pub inside: u64,
    pub total: u64,
}

impl FractionalMass {
    pub fn push(&mut self, inside: bool) {
        self.inside += inside as u64;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        self.inside += other.inside;
        self.total += other.total;
    }

    pub fn fraction(&self) -> f64 {
        self.inside as f64 / self.total as f64
    }

    pub fn std_error(&self) -> f64 {
        let p = self.fraction();
        (p * (1.0 - p) / self.total as f64).sqrt()
    }

    /// The guaranteed lower bound `1 − 2^{−k}`.
    pub fn bound(k: usize) -> f64 {
        1.0 - 0.5f64.powi(k as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// Gaussian probability of the bin.
    pub expected_mass: f64,
    /// Empirical mass over Gaussian mass.
    pub ratio: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRatioReport {
    pub bins: Vec<RatioBin>,
    /// Bins skipped for having fewer than the minimum count.
    pub excluded: usize,
    pub max_ratio: f64,
}

impl DensityRatioReport {
    /// Largest `(ratio − bound)/std_error` over the retained bins.
    pub fn max_excess_z(&self, bound: f64) -> f64 {
        self.bins.iter().fold(f64::NEG_INFINITY, |m, b| m.max((b.ratio - bound) / b.std_error))
    }
}

/// Bin-wise ratio of the empirical law to the Gaussian; bins with fewer
/// than `min_count` draws are excluded.
pub fn density_ratio_bound(hist: &Histogram, min_count: u64) -> Result<DensityRatioReport> {
    let n = hist.total();
    if n < 100_000 {
        return Err(invalid!("density ratio estimate needs at least 1e5 samples, got {n}"));
    }
    let nf = n as f64;
    let mut bins = Vec::new();
    let mut excluded = 0;
    for (i, &count) in hist.counts.iter().enumerate() {
        if count < min_count {
            excluded += 1;
            continue;
        }
        let (lo, hi) = hist.bin_edges(i);
        let mass = normal_interval_mass(lo, hi);
        let p = count as f64 / nf;
        bins.push(RatioBin {
            lo,
            hi,
            count,
            expected_mass: mass,
            ratio: p / mass,
            std_error: (p * (1.0 - p) / nf).sqrt() / mass,
        });
    }
    if excluded > 0 {
        log::warn!("density ratio: {excluded} under-filled bins excluded (< {min_count} draws)");
    }
    let max_ratio = bins.iter().fold(0.0_f64, |m, b| m.max(b.ratio));
    Ok(DensityRatioReport { bins, excluded, max_ratio })
}

/// Histogram estimate of the total variation distance between the sampled
/// law and the Gaussian conditioned on `frac(x·√(Ck)) ∈ S`.
///
/// Includes the bin-count noise of order `√(bins/n)`, so it is a
/// diagnostic rather than a bound.
pub fn tv_to_conditioned_gaussian(hist: &Histogram, cfg: &HardSamplerConfig) -> f64 {
    let scale = cfg.sqrt_ck();
    let conditioned_mass = |lo: f64, hi: f64| -> f64 {
        // Integrate φ over {x ∈ [lo, hi): frac(x·scale) ∈ S}.
        let (a, b) = ((lo * scale).floor() as i64, (hi * scale).ceil() as i64);
        let mut total = 0.0;
        for cell in a..=b {
            for (s0, s1) in cfg.set.intervals() {
                let x0 = ((cell as f64 + s0) / scale).max(lo);
                let x1 = ((cell as f64 + s1) / scale).min(hi);
                if x1 > x0 {
                    total += normal_interval_mass(x0, x1);
                }
            }
        }
        total
    };
    let masses: Vec<f64> = (0..hist.counts.len())
        .map(|i| {
            let (lo, hi) = hist.bin_edges(i);
            conditioned_mass(lo, hi)
        })
        .collect();
    let z: f64 = masses.iter().sum::<f64>()
        + conditioned_mass(-40.0, hist.lo)
        + conditioned_mass(hist.hi, 40.0);
    let n = hist.total() as f64;
    let mut tv = 0.0;
    for (c, m) in hist.counts.iter().zip(&masses) {
        tv += (*c as f64 / n - m / z).abs();
    }
    tv += (hist.below as f64 / n - conditioned_mass(-40.0, hist.lo) / z).abs();
    tv += (hist.above as f64 / n - conditioned_mass(hist.hi, 40.0) / z).abs();
    0.5 * tv
}

/// Contingency table of `k`-tuples in `[0,1)^k` on a regular grid, for
/// testing joint uniformity.
#[derive(Debug, Clone, PartialEq)]
pub struct KwiseTable {
    k: usize,
    cells: usize,
    counts: Vec<u64>,
}

impl KwiseTable {
    pub fn new(k: usize, cells_per_axis: usize) -> Self {
        Self { k, cells: cells_per_axis, counts: alloc::vec![0; cells_per_axis.pow(k as u32)] }
    }

    pub fn push(&mut self, tuple: &[f64]) {
        assert_eq!(tuple.len(), self.k);
        let idx = tuple.iter().fold(0usize, |acc, v| {
            let c = ((v * self.cells as f64) as usize).min(self.cells - 1);
            acc * self.cells + c
        });
        self.counts[idx] += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Pearson statistic against the uniform law and its upper-tail p-value.
    pub fn uniformity(&self) -> (f64, f64) {
        let e = self.total() as f64 / self.counts.len() as f64;
        let expected = alloc::vec![e; self.counts.len()];
        let stat = chi_square(&self.counts, &expected);
        (stat, chi_square_sf(stat, self.counts.len() - 1))
    }
}
