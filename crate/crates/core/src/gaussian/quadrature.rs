#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::RealFunction;
use crate::error::{invalid, Error, Result};

/// Default node count; exact for polynomial integrands up to degree 399.
pub const DEFAULT_NODES: usize = 200;

/// Gauss–Hermite nodes and weights for the standard Gaussian measure
/// (weights sum to one).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Golub–Welsch nodes for the probabilist's Hermite weight.
    ///
    /// Eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal `√k`)
    /// give the nodes; each node is then polished by Newton on `h_n` and
    /// its weight is taken from the Christoffel function
    /// `w_i = 1 / Σ_{k<n} h_k(x_i)²`, which keeps tiny tail weights
    /// accurate to full relative precision.
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("quadrature needs at least one node"));
        }
        if n == 1 {
            return Ok(Self { nodes: vec![0.0], weights: vec![1.0] });
        }
        let mut diag = vec![0.0; n];
        let mut off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
        off.push(0.0);
        tridiagonal_eigenvalues(&mut diag, &mut off)?;
        diag.sort_by(|a, b| a.total_cmp(b));

        let mut nodes = diag;
        for x in nodes.iter_mut() {
            *x = newton_polish(n, *x);
        }
        // Enforce exact mirror symmetry.
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let r = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -r;
            nodes[j] = r;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let mut weights: Vec<f64> = nodes.iter().map(|&x| christoffel_weight(n, x)).collect();
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        let total = pairwise_sum(&weights);
        if !(total.is_finite() && (total - 1.0).abs() < 1e-8) {
            return Err(Error::QuadratureBreakdown(format!(
                "weights sum to {total} for n = {n}"
            )));
        }
        for w in weights.iter_mut() {
            *w /= total;
        }
        Ok(Self { nodes, weights })
    }

    /// A grid from explicit nodes and weights (validated, not renormalized).
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(invalid!("nodes and weights must be nonempty and of equal length"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(invalid!("weights must be nonnegative and nodes finite"));
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly: `2n − 1`.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Drops nodes whose weight is below `floor`.
    pub fn pruned(&self, floor: f64) -> Self {
        let (nodes, weights) = self
            .nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w >= floor)
            .map(|(x, w)| (*x, *w))
            .unzip();
        Self { nodes, weights }
    }

    /// `Σ w_i f(x_i)`.
    pub fn expect<F: RealFunction + ?Sized>(&self, f: &F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f.eval(*x)).sum()
    }

    /// `Σ w_i v_i` for values already tabulated on the nodes.
    pub fn expect_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// `f` tabulated on the nodes.
    pub fn tabulate<F: RealFunction + ?Sized>(&self, f: &F) -> Vec<f64> {
        self.nodes.iter().map(|x| f.eval(*x)).collect()
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Implicit QL with Wilkinson shifts; eigenvalues only.
/// `off[i]` couples rows `i` and `i + 1`; `off[n-1]` is scratch.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::QuadratureBreakdown(format!(
                    "QL iteration did not converge for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

const RESCALE_AT: f64 = 1e150;

/// `(h_n(x), h_{n−1}(x))` up to a common positive factor.
fn top_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let next = (x * cur - (m as f64).sqrt() * prev) / ((m + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
        }
    }
    (cur, prev)
}

fn newton_polish(n: usize, mut x: f64) -> f64 {
    for _ in 0..8 {
        let (hn, hm1) = top_pair(n, x);
        if hm1 == 0.0 {
            break;
        }
        let dx = hn / ((n as f64).sqrt() * hm1);
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// `1 / Σ_{k<n} h_k(x)²`, computed in log space when the terms grow large.
fn christoffel_weight(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    let mut log_scale = 0.0; // sum is scaled by exp(-log_scale)
    for m in 0..n - 1 {
        let next = (x * cur - (m as f64).sqrt() * prev) / ((m + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            sum /= RESCALE_AT * RESCALE_AT;
            log_scale += 2.0 * RESCALE_AT.ln();
        }
    }
    (-(sum.ln() + log_scale)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::hermite_eval;

    fn moment(g: &QuadratureGrid, p: i32) -> f64 {
        g.expect(&|x: f64| x.powi(p))
    }

    #[test]
    fn one_and_two_nodes() {
        let g1 = QuadratureGrid::gauss_hermite(1).unwrap();
        assert_eq!(g1.nodes(), &[0.0]);
        assert_eq!(g1.weights(), &[1.0]);
        let g2 = QuadratureGrid::gauss_hermite(2).unwrap();
        assert!((g2.nodes()[0] + 1.0).abs() < 1e-15 && (g2.nodes()[1] - 1.0).abs() < 1e-15);
        assert!((g2.weights()[0] - 0.5).abs() < 1e-15 && (g2.weights()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(QuadratureGrid::gauss_hermite(0).is_err());
    }

    #[test]
    fn grid_invariants_default_size() {
        let g = QuadratureGrid::gauss_hermite(DEFAULT_NODES).unwrap();
        assert_eq!(g.len(), 200);
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(moment(&g, 1).abs() < 1e-12);
        assert!((moment(&g, 2) - 1.0).abs() < 1e-10);
        assert!(g.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn fourth_moment_64_nodes() {
        let g = QuadratureGrid::gauss_hermite(64).unwrap();
        assert!((moment(&g, 4) - 3.0).abs() < 1e-9);
        assert!((moment(&g, 6) - 15.0).abs() < 1e-9);
    }

    #[test]
    fn exactness_up_to_2n_minus_1() {
        let g = QuadratureGrid::gauss_hermite(5).unwrap();
        // E[G^8] = 105 needs degree 8 ≤ 9.
        assert!((moment(&g, 8) - 105.0).abs() < 1e-10);
        // degree 10 is past exactness: the 5-point rule misses E[G^10] = 945.
        assert!((moment(&g, 10) - 945.0).abs() > 1.0);
    }

    #[test]
    fn orthonormality_to_degree_20() {
        let g = QuadratureGrid::gauss_hermite(64).unwrap();
        for j in 0..=20 {
            for k in 0..=20 {
                let v = g.expect(&|x: f64| hermite_eval(j, x) * hermite_eval(k, x));
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((v - target).abs() < 1e-8, "j={j} k={k} v={v}");
            }
        }
    }

    #[test]
    fn large_grid_stays_accurate() {
        let g = QuadratureGrid::gauss_hermite(400).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((moment(&g, 2) - 1.0).abs() < 1e-10);
        let v = g.expect(&|x: f64| hermite_eval(60, x) * hermite_eval(60, x));
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pruning_keeps_heavy_nodes() {
        let g = QuadratureGrid::gauss_hermite(200).unwrap();
        let p = g.pruned(1e-100);
        assert!(p.len() < g.len());
        assert!(p.weights().iter().all(|w| *w >= 1e-100));
    }
}
