#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::approx::{ApproxResult, RefineOptions};
use crate::error::{invalid, Result};
use crate::gaussian::{hermite_eval, GaussLegendre, RealFunction, SignPattern, SmoothedThreshold};

/// `E[Y | X = x]` for the labeled distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelProfile {
    Constant(f64),
    /// A `±1` step function.
    Pattern(SignPattern),
    /// Piecewise-linear through `(nodes[i], values[i])`, constant beyond
    /// the end nodes.
    Interpolated { nodes: Vec<f64>, values: Vec<f64> },
    /// `scale·T_σ sign(x − t)`.
    Threshold { t: f64, sigma: f64, scale: f64 },
}

impl LabelProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LabelProfile::Constant(c) => *c,
            LabelProfile::Pattern(p) => p.eval(x),
            LabelProfile::Interpolated { nodes, values } => {
                let i = nodes.partition_point(|n| *n <= x);
                if i == 0 {
                    values[0]
                } else if i == nodes.len() {
                    values[nodes.len() - 1]
                } else {
                    let (x0, x1) = (nodes[i - 1], nodes[i]);
                    let s = (x - x0) / (x1 - x0);
                    values[i - 1] + s * (values[i] - values[i - 1])
                }
            }
            LabelProfile::Threshold { t, sigma, scale } => {
                scale * SmoothedThreshold { t: *t, sigma: *sigma }.eval(x)
            }
        }
    }

    /// Points where the profile is not smooth or changes quickly.
    fn breaks(&self) -> Vec<f64> {
        match self {
            LabelProfile::Constant(_) => Vec::new(),
            LabelProfile::Pattern(p) => p.breaks().to_vec(),
            LabelProfile::Interpolated { nodes, .. } => nodes.clone(),
            LabelProfile::Threshold { t, .. } => alloc::vec![*t],
        }
    }
}

/// How a grid witness is extended to the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessForm {
    /// The sign pattern of `F − p` after continuous refinement; its
    /// Hermite moments up to the degree vanish on the real line.
    Refined,
    /// Linear interpolation of the grid values; moment matching holds only
    /// approximately.
    Interpolated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledHardDistribution {
    profile: LabelProfile,
    sigma: f64,
    clamped: usize,
}

impl LabeledHardDistribution {
    pub fn new(profile: LabelProfile, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) {
            return Err(invalid!("sigma must be >= 0, got {sigma}"));
        }
        let mut clamped = 0;
        let profile = match profile {
            LabelProfile::Constant(c) => {
                if c.abs() > 1.0 {
                    clamped = 1;
                }
                LabelProfile::Constant(c.clamp(-1.0, 1.0))
            }
            LabelProfile::Interpolated { nodes, mut values } => {
                if nodes.is_empty() || nodes.len() != values.len() || nodes.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid!("interpolation nodes must be nonempty, increasing and match values"));
                }
                for v in values.iter_mut() {
                    if v.abs() > 1.0 {
                        clamped += 1;
                        *v = v.clamp(-1.0, 1.0);
                    }
                }
                LabelProfile::Interpolated { nodes, values }
            }
            LabelProfile::Threshold { t, sigma, scale } => {
                if scale.abs() > 1.0 {
                    return Err(invalid!("threshold profile scale must lie in [-1, 1]"));
                }
                LabelProfile::Threshold { t, sigma, scale }
            }
            p => p,
        };
        if clamped > 0 {
            log::warn!("label profile: {clamped} values clamped to [-1, 1]");
        }
        Ok(Self { profile, sigma, clamped })
    }

    pub fn profile(&self) -> &LabelProfile {
        &self.profile
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of witness values that had to be clamped into `[−1, 1]`.
    pub fn clamped_count(&self) -> usize {
        self.clamped
    }

    pub fn label_mean(&self, x: f64) -> f64 {
        self.profile.eval(x)
    }

    /// A label with `E[Y | X = x] = g(x)`.
    pub fn label<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        let p = 0.5 * (1.0 + self.label_mean(x));
        if rng.random::<f64>() < p {
            1.0
        } else {
            -1.0
        }
    }

    /// One draw of `(X, Y)` with `X` standard Gaussian.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x: f64 = rng.sample(StandardNormal);
        (x, self.label(x, rng))
    }

    /// `E[g(X)·f(X)]` by piecewise Gauss–Legendre quadrature.
    pub fn correlation<F: Fn(f64) -> f64>(&self, f: F, extra_breaks: &[f64]) -> f64 {
        let gl = GaussLegendre::new(24);
        if let LabelProfile::Pattern(p) = &self.profile {
            return p.expect_product(f, extra_breaks, 0.1, &gl);
        }
        let mut cuts = self.profile.breaks();
        cuts.extend_from_slice(extra_breaks);
        cuts.retain(|x| x.abs() < 12.0);
        cuts.push(-12.0);
        cuts.push(12.0);
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        cuts.windows(2)
            .map(|w| gl.integrate_gaussian(|x| self.profile.eval(x) * f(x), w[0], w[1], 0.1))
            .sum()
    }

    /// `E[g(X)·h_j(X)]` for `j = 0..=m` (exact for step profiles).
    pub fn hermite_moments(&self, m: usize) -> Vec<f64> {
        match &self.profile {
            LabelProfile::Pattern(p) => p.hermite_moments(m),
            _ => (0..=m).map(|j| self.correlation(|x| hermite_eval(j, x), &[])).collect(),
        }
    }

    /// `E[g(X)·T_σ sign(X − t)]`, the correlation with a smoothed threshold.
    pub fn threshold_correlation(&self, t: f64) -> f64 {
        let st = SmoothedThreshold { t, sigma: self.sigma };
        self.correlation(|x| st.eval(x), &[t])
    }
}

/// Labels from an L1 approximation witness for `f = T_σ sign`.
pub fn build_labeled<F: RealFunction + ?Sized>(
    witness: &ApproxResult,
    f: &F,
    sigma: f64,
    form: WitnessForm,
) -> Result<LabeledHardDistribution> {
    let profile = match form {
        WitnessForm::Refined => {
            let refined = witness.refine(f, &RefineOptions::default())?;
            if !refined.converged {
                log::warn!(
                    "witness refinement stopped at moment residual {:.3e}",
                    refined.moment_residual
                );
            }
            LabelProfile::Pattern(refined.pattern)
        }
        WitnessForm::Interpolated => LabelProfile::Interpolated {
            nodes: witness.grid.nodes().to_vec(),
            values: witness.witness.clone(),
        },
    };
    LabeledHardDistribution::new(profile, sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptSigma {
    /// `min_{t, ±} (1 − ±E[Y·T_σ sign(X − t)])/2`.
    pub value: f64,
    pub threshold: f64,
    /// `+1` for `sign(x − t)`, `−1` for the reversed orientation.
    pub orientation: f64,
}

/// Threshold grid `−4, −3.99, ..., 4`.
pub fn default_thresholds() -> Vec<f64> {
    (0..=800).map(|i| -4.0 + 0.01 * i as f64).collect()
}

/// Smoothed optimum over one-dimensional thresholds in both orientations.
/// Ties keep the threshold closest to zero.
pub fn opt_sigma(dist: &LabeledHardDistribution, thresholds: &[f64]) -> OptSigma {
    let mut best = OptSigma { value: 0.5, threshold: 0.0, orientation: 1.0 };
    let mut best_abs = f64::INFINITY;
    for &t in thresholds {
        let c = dist.threshold_correlation(t);
        let value = 0.5 * (1.0 - c.abs());
        let better = value < best.value - 1e-15 || (value <= best.value + 1e-15 && t.abs() < best_abs);
        if better && value <= 0.5 {
            best = OptSigma { value, threshold: t, orientation: if c >= 0.0 { 1.0 } else { -1.0 } };
            best_abs = t.abs();
        }
    }
    best
}
