#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

use super::legendre::{GaussLegendre, GAUSSIAN_CUTOFF};
use super::normal::{normal_interval_mass, normal_pdf};

/// A `±1`-valued function that flips sign at sorted breakpoints.
///
/// This is the continuous form of an L1 moment-matching witness:
/// `g(x) = sign(F(x) − p(x))`. Its Hermite moments have closed forms,
/// `∫_a^b h_j φ = (h_{j−1}(a)φ(a) − h_{j−1}(b)φ(b))/√j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPattern {
    breaks: Vec<f64>,
    first_sign: f64,
}

impl SignPattern {
    /// `first_sign` is the value on `(−∞, breaks[0])`.
    pub fn new(mut breaks: Vec<f64>, first_sign: f64) -> Self {
        breaks.sort_by(|a, b| a.total_cmp(b));
        let first_sign = if first_sign < 0.0 { -1.0 } else { 1.0 };
        Self { breaks, first_sign }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn first_sign(&self) -> f64 {
        self.first_sign
    }

    /// Sign on segment `i` (segment 0 is left of the first break).
    pub fn segment_sign(&self, i: usize) -> f64 {
        if i % 2 == 0 {
            self.first_sign
        } else {
            -self.first_sign
        }
    }

    /// Segment endpoints including `±∞`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.breaks.len();
        (0..=n).map(move |i| {
            let lo = if i == 0 { f64::NEG_INFINITY } else { self.breaks[i - 1] };
            let hi = if i == n { f64::INFINITY } else { self.breaks[i] };
            (lo, hi, self.segment_sign(i))
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breaks.partition_point(|b| *b <= x);
        self.segment_sign(idx)
    }

    /// `E[g(G)·h_j(G)]` for `j = 0..=m`, exactly.
    pub fn hermite_moments(&self, m: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; m + 1];
        for (lo, hi, s) in self.segments() {
            out[0] += s * normal_interval_mass(lo, hi);
            if m == 0 {
                continue;
            }
            let lo_vals = boundary_terms(m, lo);
            let hi_vals = boundary_terms(m, hi);
            for j in 1..=m {
                out[j] += s * (lo_vals[j - 1] - hi_vals[j - 1]) / (j as f64).sqrt();
            }
        }
        out
    }

    /// `E[g(G)·f(G)]` for a function that is smooth on each segment.
    ///
    /// `extra_breaks` marks points where `f` changes quickly (for example
    /// the threshold of a steep smoothed step); panels are kept shorter
    /// than `max_panel`.
    pub fn expect_product<F: Fn(f64) -> f64>(
        &self,
        f: F,
        extra_breaks: &[f64],
        max_panel: f64,
        gl: &GaussLegendre,
    ) -> f64 {
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .chain(extra_breaks)
            .copied()
            .filter(|x| x.abs() < GAUSSIAN_CUTOFF)
            .collect();
        cuts.push(-GAUSSIAN_CUTOFF);
        cuts.push(GAUSSIAN_CUTOFF);
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        cuts.windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                self.eval(mid) * gl.integrate_gaussian(&f, w[0], w[1], max_panel)
            })
            .sum()
    }
}

/// `h_{j}(x)·φ(x)` for `j = 0..m-1`, zero at infinite endpoints.
fn boundary_terms(m: usize, x: f64) -> Vec<f64> {
    if !x.is_finite() {
        return alloc::vec![0.0; m];
    }
    let mut vals = Vec::with_capacity(m);
    super::hermite_all(m.saturating_sub(1), x, &mut vals);
    let pdf = normal_pdf(x);
    vals.iter_mut().for_each(|v| *v *= pdf);
    vals.truncate(m);
    vals
}
