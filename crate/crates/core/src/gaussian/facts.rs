//! Numerical checks of standard inequalities for Gaussian polynomials and
//! of the Ornstein–Uhlenbeck semigroup.

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{hermite_all, QuadratureGrid, RealFunction};

/// `p(x, y) = Σ_{i+j ≤ d} c_ij h_i(x) h_j(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateHermite {
    pub degree: usize,
    /// `(i, j, c_ij)` in graded order.
    pub terms: Vec<(usize, usize, f64)>,
}

impl BivariateHermite {
    /// Independent standard normal coefficients for every monomial of
    /// total degree at most `degree`, with at least one top-degree term
    /// nonzero.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for total in 0..=degree {
            for i in (0..=total).rev() {
                terms.push((i, total - i, rng.sample::<f64, _>(StandardNormal)));
            }
        }
        Self { degree, terms }
    }

    /// `(‖p‖₁, ‖p‖₂, ‖p‖₄)` by product quadrature on `grid`.
    pub fn norms(&self, grid: &QuadratureGrid) -> [f64; 3] {
        let table: Vec<Vec<f64>> = grid
            .nodes()
            .iter()
            .map(|x| {
                let mut h = Vec::with_capacity(self.degree + 1);
                hermite_all(self.degree, *x, &mut h);
                h
            })
            .collect();
        let w = grid.weights();
        let mut sums = [0.0; 3];
        for (a, ha) in table.iter().enumerate() {
            for (b, hb) in table.iter().enumerate() {
                let p: f64 = self.terms.iter().map(|(i, j, c)| c * ha[*i] * hb[*j]).sum();
                let weight = w[a] * w[b];
                let p2 = p * p;
                sums[0] += weight * p.abs();
                sums[1] += weight * p2;
                sums[2] += weight * p2 * p2;
            }
        }
        [sums[0], sums[1].sqrt(), sums[2].powf(0.25)]
    }
}

/// `U_ρ f(x) = E_z[f(ρx + √(1−ρ²) z)]` by quadrature over `z`.
pub fn ou_eval<F: RealFunction + ?Sized>(f: &F, rho: f64, x: f64, grid: &QuadratureGrid) -> f64 {
    let s = (1.0 - rho * rho).max(0.0).sqrt();
    grid.nodes().iter().zip(grid.weights()).map(|(z, w)| w * f.eval(rho * x + s * z)).sum()
}

/// `|E[(U_ρ f)·g] − E[f·(U_ρ g)]|`.
pub fn ou_adjoint_gap<F, G>(f: &F, g: &G, rho: f64, grid: &QuadratureGrid) -> f64
where
    F: RealFunction + ?Sized,
    G: RealFunction + ?Sized,
{
    let (mut left, mut right) = (0.0, 0.0);
    for (x, w) in grid.nodes().iter().zip(grid.weights()) {
        left += w * ou_eval(f, rho, *x, grid) * g.eval(*x);
        right += w * f.eval(*x) * ou_eval(g, rho, *x, grid);
    }
    (left - right).abs()
}

/// `max_{i,j ≤ m} |E[h_i h_j] − δ_ij|` on `grid`.
pub fn orthonormality_error(m: usize, grid: &QuadratureGrid) -> f64 {
    let mut gram = alloc::vec![0.0; (m + 1) * (m + 1)];
    let mut h = Vec::with_capacity(m + 1);
    for (x, w) in grid.nodes().iter().zip(grid.weights()) {
        hermite_all(m, *x, &mut h);
        for i in 0..=m {
            for j in 0..=m {
                gram[i * (m + 1) + j] += w * h[i] * h[j];
            }
        }
    }
    let mut worst = 0.0_f64;
    for i in 0..=m {
        for j in 0..=m {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * (m + 1) + j] - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::hermite_eval;
    use crate::rng::stream;

    #[test]
    fn affine_norms_match_closed_form() {
        let g = QuadratureGrid::gauss_hermite(120).unwrap();
        let p = BivariateHermite { degree: 1, terms: alloc::vec![(1, 0, 3.0), (0, 1, 4.0)] };
        let [l1, l2, l4] = p.norms(&g);
        // 3x + 4y ~ N(0, 25)
        assert!((l2 - 5.0).abs() < 1e-12);
        assert!((l4 - 5.0 * 3f64.powf(0.25)).abs() < 1e-10);
        assert!((l1 - 5.0 * (2.0 / core::f64::consts::PI).sqrt()).abs() < 1e-3);
        let r = BivariateHermite::random(3, &mut stream(0, 0));
        assert_eq!(r.terms.len(), 10);
    }

    #[test]
    fn hermite_polynomials_are_ou_eigenfunctions() {
        let g = QuadratureGrid::gauss_hermite(60).unwrap();
        for k in 0..6 {
            let h = |x: f64| hermite_eval(k, x);
            for x in [-1.3, 0.2, 2.0] {
                let want = 0.7f64.powi(k as i32) * hermite_eval(k, x);
                assert!((ou_eval(&h, 0.7, x, &g) - want).abs() < 1e-10);
            }
        }
    }
}
