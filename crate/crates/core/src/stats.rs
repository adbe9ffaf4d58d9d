//! Monte Carlo summaries: moments with standard errors, histograms,
//! goodness-of-fit statistics.

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

/// Running sum and sum of squares, merged in a fixed order by callers
/// that split work into chunks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanAccumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum / self.count as f64
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = self.count as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

/// `E[G^k]` for a standard Gaussian: `(k−1)!!` for even `k`, 0 for odd.
pub fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    (1..k).step_by(2).map(|j| j as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub order: usize,
    pub empirical: f64,
    pub target: f64,
    pub std_error: f64,
    /// `(empirical − target)/std_error`.
    pub z: f64,
}

/// Raw power sums `Σ x^j` for `j = 0..=2·max_order`, enough for the
/// moments and their standard errors. Mergeable across chunks.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSums {
    sums: Vec<f64>,
}

impl PowerSums {
    pub fn new(max_order: usize) -> Self {
        Self { sums: alloc::vec![0.0; 2 * max_order + 1] }
    }

    pub fn max_order(&self) -> usize {
        (self.sums.len() - 1) / 2
    }

    pub fn push(&mut self, x: f64) {
        let mut p = 1.0;
        for s in self.sums.iter_mut() {
            *s += p;
            p *= x;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.sums.len(), other.sums.len());
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
    }

    pub fn count(&self) -> f64 {
        self.sums[0]
    }

    /// Empirical moments `1..=max_order` against standard Gaussian targets.
    pub fn gaussian_checks(&self) -> Vec<MomentCheck> {
        let n = self.count();
        (1..=self.max_order())
            .map(|k| {
                let empirical = self.sums[k] / n;
                let second = self.sums[2 * k] / n;
                let std_error = ((second - empirical * empirical).max(0.0) / n).sqrt();
                let target = gaussian_moment(k);
                MomentCheck { order: k, empirical, target, std_error, z: (empirical - target) / std_error }
            })
            .collect()
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `sorted`
/// (ascending) and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0_f64, |d, (i, x)| {
        let c = cdf(*x);
        d.max((c - i as f64 / n).abs()).max(((i + 1) as f64 / n - c).abs())
    })
}

/// Asymptotic KS critical value `c(α)/√n`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

/// Equal-width histogram on `[lo, hi)`; out-of-range values are counted
/// separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(hi > lo && bins > 0, "histogram needs lo < hi and at least one bin");
        Self { lo, hi, counts: alloc::vec![0; bins], below: 0, above: 0 }
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w)
    }

    pub fn push(&mut self, x: f64) {
        if x < self.lo {
            self.below += 1;
        } else if x >= self.hi {
            self.above += 1;
        } else {
            let last = self.counts.len() - 1;
            let i = ((x - self.lo) / self.bin_width()) as usize;
            self.counts[i.min(last)] += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.below += other.below;
        self.above += other.above;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.below + self.above
    }
}

/// Pearson statistic `Σ (o − e)²/e`.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| {
            let d = *o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper tail of the chi-square law by the Wilson–Hilferty cube-root
/// normal approximation (accurate for `dof ≳ 10`).
pub fn chi_square_sf(stat: f64, dof: usize) -> f64 {
    let k = dof as f64;
    let z = ((stat / k).cbrt() - (1.0 - 2.0 / (9.0 * k))) / (2.0 / (9.0 * k)).sqrt();
    crate::gaussian::normal_sf(z)
}

/// `P[Bin(n, p) ≤ k]`, summed in log space.
pub fn binomial_cdf(n: usize, p: f64, k: usize) -> f64 {
    if k >= n {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let ln_n1 = libm::lgamma(n as f64 + 1.0);
    (0..=k)
        .map(|i| {
            let i = i as f64;
            let ln_choose = ln_n1 - libm::lgamma(i + 1.0) - libm::lgamma(n as f64 - i + 1.0);
            (ln_choose + i * lp + (n as f64 - i) * lq).exp()
        })
        .sum::<f64>()
        .min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let m: Vec<f64> = (0..=8).map(gaussian_moment).collect();
        assert_eq!(m, [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0]);
    }

    #[test]
    fn binomial_tail() {
        assert!((binomial_cdf(4, 0.5, 1) - 5.0 / 16.0).abs() < 1e-14);
        assert!((binomial_cdf(10, 0.3, 10) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn accumulators() {
        let mut a = MeanAccumulator::default();
        for v in [1.0, 2.0, 3.0, 4.0] {
            a.push(v);
        }
        assert_eq!(a.mean(), 2.5);
        assert!((a.variance() - 5.0 / 3.0).abs() < 1e-15);
        let mut p = PowerSums::new(2);
        for v in [-1.0, 1.0] {
            p.push(v);
        }
        let c = p.gaussian_checks();
        assert_eq!(c[0].empirical, 0.0);
        assert_eq!(c[1].empirical, 1.0);
    }

    #[test]
    fn chi_square_tail_is_calibrated() {
        // Median of chi-square(50) is about 49.33.
        assert!((chi_square_sf(49.335, 50) - 0.5).abs() < 5e-3);
        assert!(chi_square_sf(100.0, 50) < 1e-4);
    }

    #[test]
    fn ks_of_perfect_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.005).abs() < 1e-12);
    }
}
