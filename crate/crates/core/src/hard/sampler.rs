#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;
use rand::Rng;

use super::split::{split_gaussian, GaussianMixtureSplit};
use crate::error::{invalid, Result};
use crate::stats::binomial_cdf;

/// Default oversampling constant.
pub const DEFAULT_C: usize = 20;

/// A finite union of closed subintervals of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Sorts and merges overlapping intervals.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(invalid!("interval set is empty"));
        }
        for &(a, b) in &intervals {
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || !(a < b) {
                return Err(invalid!("interval [{a}, {b}] is not a nonempty subinterval of [0, 1]"));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn unit() -> Self {
        Self { intervals: alloc::vec![(0.0, 1.0)] }
    }

    /// Pairs `[a0, b0, a1, b1, ...]`.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        if values.len() % 2 != 0 {
            return Err(invalid!("interval endpoints must come in pairs, got {}", values.len()));
        }
        Self::new(values.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.intervals == [(0.0, 1.0)]
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|(a, b)| *a <= x && x <= *b)
    }

    /// Uniform draw from the set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut u = rng.random::<f64>() * self.measure();
        for (a, b) in &self.intervals {
            let len = b - a;
            if u < len {
                return a + u;
            }
            u -= len;
        }
        self.intervals[self.intervals.len() - 1].1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardSamplerConfig {
    /// Number of matched moments.
    pub k: usize,
    /// Oversampling constant; `C·k` summands per draw.
    pub c: usize,
    pub set: IntervalSet,
}

impl HardSamplerConfig {
    /// Validates `k, C ≥ 1` and that `P[Bin(Ck, α) ≤ k] ≤ 2^{−k}`.
    pub fn new(k: usize, c: usize, set: IntervalSet) -> Result<Self> {
        if k == 0 || c == 0 {
            return Err(invalid!("k and C must be positive (k = {k}, C = {c})"));
        }
        let cfg = Self { k, c, set };
        let tail = cfg.tail_probability();
        let limit = 0.5f64.powi(k as i32);
        if tail > limit {
            return Err(invalid!(
                "C = {c} is too small for k = {k}: P[Bin(Ck, alpha) <= k] = {tail:.3e} > 2^-k = {limit:.3e}"
            ));
        }
        Ok(cfg)
    }

    pub fn summands(&self) -> usize {
        self.c * self.k
    }

    pub fn sqrt_ck(&self) -> f64 {
        (self.summands() as f64).sqrt()
    }

    /// Probability that the conditioning step is skipped.
    pub fn tail_probability(&self) -> f64 {
        binomial_cdf(self.summands(), split_gaussian().alpha(), self.k)
    }
}

/// The summands of one draw, for diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Draw {
    pub values: Vec<f64>,
    /// `y_i = 1`: the summand came from the uniform part.
    pub uniform: Vec<bool>,
    /// Whether the sum was conditioned to land in `S` mod 1.
    pub conditioned: bool,
    /// Index of the summand that was adjusted.
    pub adjusted: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardSampler {
    cfg: HardSamplerConfig,
    split: GaussianMixtureSplit,
    scale: f64,
}

impl HardSampler {
    pub fn new(cfg: HardSamplerConfig) -> Self {
        let scale = 1.0 / cfg.sqrt_ck();
        Self { cfg, split: split_gaussian(), scale }
    }

    pub fn config(&self) -> &HardSamplerConfig {
        &self.cfg
    }

    /// One draw of `X`.
    ///
    /// Each summand is uniform on `[0,1]` with probability `α` and from the
    /// residual `E` otherwise. When more than `k` summands are uniform the
    /// sum is conditioned to lie in `S` mod 1: one uniform summand, chosen
    /// at random, is replaced by `(u − rest) mod 1` with `u` uniform on `S`.
    /// Since that summand is uniform and independent of the rest, this is
    /// the exact conditional law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_with(rng, &mut Draw::default())
    }

    /// Like [`sample`](Self::sample), recording the summands in `draw`.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, draw: &mut Draw) -> f64 {
        let n = self.cfg.summands();
        draw.values.clear();
        draw.uniform.clear();
        let mut uniforms = 0usize;
        for _ in 0..n {
            let y = rng.random::<f64>() < self.split.alpha();
            let v = if y { rng.random::<f64>() } else { self.split.sample_residual(rng) };
            uniforms += y as usize;
            draw.values.push(v);
            draw.uniform.push(y);
        }
        draw.conditioned = uniforms > self.cfg.k && !self.cfg.set.is_unit();
        draw.adjusted = None;
        if draw.conditioned {
            let target = self.cfg.set.sample(rng);
            let pick = rng.random_range(0..uniforms);
            let j = draw.uniform.iter().enumerate().filter(|(_, u)| **u).nth(pick).map(|(i, _)| i).unwrap();
            let rest: f64 = draw.values.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| v).sum();
            let r = target - rest;
            draw.values[j] = r - r.floor();
            draw.adjusted = Some(j);
        }
        draw.values.iter().sum::<f64>() * self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn interval_sets() {
        let s = IntervalSet::new(alloc::vec![(0.5, 0.75), (0.1, 0.2), (0.7, 1.0)]).unwrap();
        assert_eq!(s.intervals(), &[(0.1, 0.2), (0.5, 1.0)]);
        assert!((s.measure() - 0.6).abs() < 1e-15);
        assert!(IntervalSet::new(alloc::vec![(0.5, 0.4)]).is_err());
        assert!(IntervalSet::from_flat(&[0.5]).is_err());
        let mut rng = stream(1, 0);
        for _ in 0..1000 {
            assert!(s.contains(s.sample(&mut rng)));
        }
    }

    #[test]
    fn config_checks_the_binomial_tail() {
        assert!(HardSamplerConfig::new(4, 20, IntervalSet::unit()).is_ok());
        assert!(HardSamplerConfig::new(9, 2, IntervalSet::unit()).is_err());
        assert!(HardSamplerConfig::new(0, 20, IntervalSet::unit()).is_err());
    }

    #[test]
    fn conditioned_draws_land_in_the_set() {
        let set = IntervalSet::new(alloc::vec![(0.5, 1.0)]).unwrap();
        let sampler = HardSampler::new(HardSamplerConfig::new(4, 20, set.clone()).unwrap());
        let mut rng = stream(7, 0);
        let mut draw = Draw::default();
        for _ in 0..2000 {
            let x = sampler.sample_with(&mut rng, &mut draw);
            if draw.conditioned {
                let s = x * sampler.config().sqrt_ck();
                assert!(set.contains(s - s.floor()) || (s - s.round()).abs() < 1e-9);
            }
        }
    }
}
