use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::sq::PlantedDistribution;

/// Labeled points in `R^d` with `±1` labels, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    d: usize,
    points: Vec<f64>,
    labels: Vec<f64>,
    /// Free-form description of how the data was generated.
    pub provenance: String,
}

impl Dataset {
    pub fn new(d: usize, points: Vec<f64>, labels: Vec<f64>, provenance: &str) -> Result<Self> {
        if d == 0 || points.len() != d * labels.len() {
            return Err(invalid!("{} coordinates do not form {} points in dimension {d}", points.len(), labels.len()));
        }
        if labels.iter().any(|y| *y != 1.0 && *y != -1.0) {
            return Err(invalid!("labels must be +1 or -1"));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(invalid!("coordinates must be finite"));
        }
        Ok(Self { d, points, labels, provenance: String::from(provenance) })
    }

    /// `n` draws from a planted (or null) distribution.
    pub fn sample<R: Rng + ?Sized>(dist: &PlantedDistribution, n: usize, rng: &mut R, provenance: &str) -> Self {
        let d = dist.dim();
        let mut points = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        let mut x = Vec::with_capacity(d);
        for _ in 0..n {
            labels.push(dist.sample_into(rng, &mut x));
            points.extend_from_slice(&x);
        }
        Self { d, points, labels, provenance: String::from(provenance) }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks(self.d).zip(self.labels.iter().copied())
    }

    /// Rows `range` as a new dataset.
    pub fn slice(&self, range: core::ops::Range<usize>) -> Self {
        Self {
            d: self.d,
            points: self.points[range.start * self.d..range.end * self.d].to_vec(),
            labels: self.labels[range].to_vec(),
            provenance: self.provenance.clone(),
        }
    }
}
