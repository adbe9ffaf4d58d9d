#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::gaussian::hermite_all;
use crate::linalg::dot;

/// Upper limit on the number of features of the full basis.
pub const MAX_FEATURES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum FeaturePolicy {
    /// Products `Π_i h_{α_i}(x_i)` over multi-indices with `|α| ≤ m`.
    FullHermite,
    /// `h_k(v·x)` for `k ≤ m` along a known unit direction.
    KnownDirection(Vec<f64>),
}

/// `C(d + m, m)`, saturating.
pub fn feature_count(d: usize, m: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..=m as u128 {
        c = c * (d as u128 + i) / i;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    policy: FeaturePolicy,
    d: usize,
    m: usize,
    /// Multi-indices of the full basis in graded order.
    indices: Vec<Vec<u8>>,
}

impl FeatureMap {
    pub fn new(policy: FeaturePolicy, d: usize, m: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid!("dimension must be positive"));
        }
        let indices = match &policy {
            FeaturePolicy::FullHermite => {
                let count = feature_count(d, m);
                if count > MAX_FEATURES {
                    return Err(invalid!(
                        "degree {m} in dimension {d} needs {count} features (limit {MAX_FEATURES})"
                    ));
                }
                if m > u8::MAX as usize {
                    return Err(invalid!("degree {m} is too large"));
                }
                let mut out = Vec::with_capacity(count);
                for total in 0..=m {
                    let mut alpha = alloc::vec![0u8; d];
                    compositions(total, 0, &mut alpha, &mut out);
                }
                out
            }
            FeaturePolicy::KnownDirection(v) => {
                let norm = dot(v, v).sqrt();
                if v.len() != d || (norm - 1.0).abs() > 1e-9 {
                    return Err(invalid!("known direction must be a unit vector in dimension {d}"));
                }
                Vec::new()
            }
        };
        Ok(Self { policy, d, m, indices })
    }

    pub fn policy(&self) -> &FeaturePolicy {
        &self.policy
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        match self.policy {
            FeaturePolicy::FullHermite => self.indices.len(),
            FeaturePolicy::KnownDirection(_) => self.m + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same policy at a different degree.
    pub fn with_degree(&self, m: usize) -> Result<Self> {
        Self::new(self.policy.clone(), self.d, m)
    }

    /// Feature values at `x`; `scratch` holds per-coordinate Hermite values.
    pub fn eval_into(&self, x: &[f64], out: &mut Vec<f64>, scratch: &mut Vec<f64>) {
        out.clear();
        match &self.policy {
            FeaturePolicy::KnownDirection(v) => hermite_all(self.m, dot(v, x), out),
            FeaturePolicy::FullHermite => {
                let stride = self.m + 1;
                scratch.clear();
                let mut tmp = Vec::with_capacity(stride);
                for xi in x {
                    hermite_all(self.m, *xi, &mut tmp);
                    scratch.extend_from_slice(&tmp);
                }
                for alpha in &self.indices {
                    let mut v = 1.0;
                    for (i, a) in alpha.iter().enumerate() {
                        if *a > 0 {
                            v *= scratch[i * stride + *a as usize];
                        }
                    }
                    out.push(v);
                }
            }
        }
    }
}

/// All `α ∈ N^d` with `Σ α = remaining` over coordinates `i..`, appended
/// in lexicographically decreasing order.
fn compositions(remaining: usize, i: usize, alpha: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    let d = alpha.len();
    if i == d - 1 {
        alpha[i] = remaining as u8;
        out.push(alpha.clone());
        alpha[i] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        alpha[i] = a as u8;
        compositions(remaining - a, i + 1, alpha, out);
    }
    alpha[i] = 0;
}
