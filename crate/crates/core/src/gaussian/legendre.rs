#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

use super::normal::normal_pdf;

/// Beyond this radius the Gaussian density is below 1e-31 and integrals
/// against it are truncated.
pub const GAUSSIAN_CUTOFF: f64 = 12.0;

/// Gauss–Legendre rule on `[-1, 1]`, used for composite integration of
/// smooth pieces against the Gaussian density.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(-x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx` with one panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(mid + half * t))
            .sum();
        s * half
    }

    /// `∫_a^b f(x)·φ(x) dx` with panels no longer than `max_panel`;
    /// infinite or far endpoints are clipped to `±GAUSSIAN_CUTOFF`.
    pub fn integrate_gaussian<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        max_panel: f64,
    ) -> f64 {
        let a = a.max(-GAUSSIAN_CUTOFF);
        let b = b.min(GAUSSIAN_CUTOFF);
        if b <= a {
            return 0.0;
        }
        let panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                let hi = if k + 1 == panels { b } else { lo + h };
                self.integrate(|x| f(x) * normal_pdf(x), lo, hi)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
