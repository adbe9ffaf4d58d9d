#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::gaussian::normal_pdf;

/// `N(0,1) = α·U([0,1]) + (1 − α)·E` with `α = φ(1)`, the largest weight
/// for which the uniform part fits under the Gaussian density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMixtureSplit {
    alpha: f64,
}

pub fn split_gaussian() -> GaussianMixtureSplit {
    GaussianMixtureSplit { alpha: normal_pdf(1.0) }
}

impl GaussianMixtureSplit {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Density of the residual `E`.
    pub fn residual_density(&self, x: f64) -> f64 {
        let uniform = if (0.0..=1.0).contains(&x) { self.alpha } else { 0.0 };
        (normal_pdf(x) - uniform) / (1.0 - self.alpha)
    }

    /// One draw of `E` by rejection from the Gaussian.
    pub fn sample_residual<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let g: f64 = rng.sample(StandardNormal);
            if !(0.0..=1.0).contains(&g) {
                return g;
            }
            let accept = 1.0 - self.alpha / normal_pdf(g);
            if rng.random::<f64>() < accept {
                return g;
            }
        }
    }

    /// One draw of the mixture, which is a standard Gaussian.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < self.alpha {
            rng.random::<f64>()
        } else {
            self.sample_residual(rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_is_phi_of_one() {
        let s = split_gaussian();
        assert!((s.alpha() - 0.2419707245191434).abs() < 1e-15);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!(s.alpha() <= normal_pdf(x) + 1e-16);
            assert!(s.residual_density(x) >= 0.0);
        }
        assert!((s.residual_density(-2.0) - 0.0712).abs() < 1e-4);
    }
}
