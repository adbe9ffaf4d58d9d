#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::RealFunction;

/// Normalized probabilist's Hermite polynomial `h_k(x) = He_k(x) / √(k!)`.
///
/// Uses the three-term recurrence
/// `√(m+1)·h_{m+1}(x) = x·h_m(x) − √m·h_{m−1}(x)`, which never forms a
/// factorial and stays finite well past degree 150.
pub fn hermite_eval(k: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..k {
        let next = (x * cur - (m as f64).sqrt() * prev) / ((m + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `h_0(x), …, h_m(x)` into `out` (resized to `m + 1`).
pub fn hermite_all(m: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(m + 1);
    out.push(1.0);
    if m == 0 {
        return;
    }
    out.push(x);
    for j in 1..m {
        let next = (x * out[j] - (j as f64).sqrt() * out[j - 1]) / ((j + 1) as f64).sqrt();
        out.push(next);
    }
}

/// Closed form of `E[sign(G)·h_k(G)]` for a standard Gaussian `G`.
///
/// Zero for even `k`; for odd `k` it equals `2·φ(0)·He_{k−1}(0)/√(k!)`,
/// evaluated through the ratio recurrence to avoid factorials.
pub fn sign_hermite_coeff(k: usize) -> f64 {
    if k % 2 == 0 {
        return 0.0;
    }
    // He_{j+1}(0) = −j·He_{j−1}(0) gives c_{j+2}/c_j = −j/√((j+1)(j+2)).
    let mut c = (2.0 / core::f64::consts::PI).sqrt();
    let mut j = 1;
    while j < k {
        c *= -(j as f64) / (((j + 1) * (j + 2)) as f64).sqrt();
        j += 2;
    }
    c
}

/// A function written in the normalized Hermite basis,
/// `f(x) = Σ_k coeffs[k]·h_k(x)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HermiteExpansion {
    coeffs: Vec<f64>,
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "expansion needs at least the constant term");
        Self { coeffs }
    }

    pub fn zero(max_degree: usize) -> Self {
        Self::new(vec![0.0; max_degree + 1])
    }

    /// The single basis polynomial `h_k`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest index with a nonzero coefficient (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut acc = self.coeffs[0];
        for m in 0..self.max_degree() {
            let next = (x * cur - (m as f64).sqrt() * prev) / ((m + 1) as f64).sqrt();
            prev = cur;
            cur = next;
            acc += self.coeffs[m + 1] * cur;
        }
        acc
    }

    /// First derivative, using `h_k' = √k·h_{k−1}`.
    pub fn derivative_at(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut acc = 0.0;
        for m in 0..self.max_degree() {
            acc += self.coeffs[m + 1] * ((m + 1) as f64).sqrt() * cur;
            let next = (x * cur - (m as f64).sqrt() * prev) / ((m + 1) as f64).sqrt();
            prev = cur;
            cur = next;
        }
        acc
    }

    /// `E[f(G)²] = Σ coeffs[k]²` by orthonormality.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Keeps degrees `0..=m` (zero-padded when `m` exceeds the current
    /// maximum degree).
    pub fn truncated(&self, m: usize) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        for (dst, src) in coeffs.iter_mut().zip(&self.coeffs) {
            *dst = *src;
        }
        Self::new(coeffs)
    }

    /// `Σ_{k>m} coeffs[k]²`.
    pub fn tail_norm_sq(&self, m: usize) -> f64 {
        self.coeffs.iter().skip(m + 1).map(|c| c * c).sum()
    }

    /// Monomial coefficients `a_0..a_m` with `f(x) = Σ a_j x^j`.
    ///
    /// Uses `He_{k+1} = x·He_k − k·He_{k−1}` on the unnormalized basis;
    /// entries grow quickly with the degree, so this is a reporting form only.
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        let mut prev: Vec<f64> = vec![0.0; n];
        let mut cur: Vec<f64> = vec![0.0; n];
        cur[0] = 1.0;
        let mut norm = 1.0_f64; // √(k!)
        for k in 0..n {
            if k > 0 {
                norm *= (k as f64).sqrt();
            }
            let scale = self.coeffs[k] / norm;
            for (o, c) in out.iter_mut().zip(&cur) {
                *o += scale * c;
            }
            if k + 1 < n {
                let mut next = vec![0.0; n];
                for j in 0..n - 1 {
                    next[j + 1] += cur[j];
                }
                for j in 0..n {
                    next[j] -= k as f64 * prev[j];
                }
                prev = core::mem::replace(&mut cur, next);
            }
        }
        out
    }
}

impl RealFunction for HermiteExpansion {
    fn eval(&self, x: f64) -> f64 {
        HermiteExpansion::eval(self, x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.derivative_at(x)
    }
}
