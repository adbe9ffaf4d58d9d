#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::hard::LabeledHardDistribution;
use crate::linalg::dot;
use crate::rng::stream;

/// Stream used to draw the hidden direction from a seed.
const DIRECTION_STREAM: u64 = 0x5eed_d14e;

/// Uniform draw from the unit sphere in `R^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedDistribution {
    direction: Vec<f64>,
    base: LabeledHardDistribution,
    planted: bool,
}

/// Hides `base` along a direction drawn uniformly from the sphere.
pub fn plant(base: LabeledHardDistribution, d: usize, seed: u64) -> Result<PlantedDistribution> {
    if d == 0 {
        return Err(invalid!("dimension must be positive"));
    }
    let direction = random_unit_vector(d, &mut stream(seed, DIRECTION_STREAM));
    Ok(PlantedDistribution { direction, base, planted: true })
}

impl PlantedDistribution {
    /// Planted distribution along a given unit direction.
    pub fn with_direction(base: LabeledHardDistribution, direction: Vec<f64>) -> Result<Self> {
        let norm = dot(&direction, &direction).sqrt();
        if direction.is_empty() || (norm - 1.0).abs() > 1e-9 {
            return Err(invalid!("direction must be a unit vector, norm is {norm}"));
        }
        Ok(Self { direction, base, planted: true })
    }

    /// The null distribution of the same dimension.
    pub fn null(&self) -> Self {
        Self { planted: false, ..self.clone() }
    }

    pub fn is_planted(&self) -> bool {
        self.planted
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn base(&self) -> &LabeledHardDistribution {
        &self.base
    }

    /// Draws `x` into `x` and returns the label.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, x: &mut Vec<f64>) -> f64 {
        x.clear();
        x.extend((0..self.dim()).map(|_| rng.sample::<f64, _>(StandardNormal)));
        if !self.planted {
            return if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        let (hidden, y) = self.base.sample(rng);
        let along = dot(x, &self.direction);
        for (xi, vi) in x.iter_mut().zip(&self.direction) {
            *xi += (hidden - along) * vi;
        }
        y
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, f64) {
        let mut x = Vec::with_capacity(self.dim());
        let y = self.sample_into(rng, &mut x);
        (x, y)
    }
}
