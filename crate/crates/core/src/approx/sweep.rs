#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::string::String;
use alloc::vec::Vec;

use super::{certificate_degree, hermite_certificate, l1_best_approx};
use crate::error::{invalid, Result};
use crate::gaussian::{hermite_coeffs, QuadratureGrid, RealFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct DegreePoint {
    pub m: usize,
    /// `None` when the LP for this degree failed.
    pub l1_error: Option<f64>,
    /// Error of the degree-`m` Hermite truncation.
    pub l2_error: f64,
    pub certificate_k: usize,
    /// `E[h_k·(F − p)]` for the L1-optimal `p` (NaN if the LP failed).
    pub certificate_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeCurve {
    pub sigma: f64,
    pub function: String,
    pub points: Vec<DegreePoint>,
}

impl DegreeCurve {
    /// True when every pair of solved degrees has `l1(m') ≤ l1(m) + tol`
    /// for `m' > m`.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        let solved: Vec<f64> = self.points.iter().filter_map(|p| p.l1_error).collect();
        solved.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Least-squares slope of `ln l1_error` against `m` over solved degrees
    /// with positive error.
    pub fn log_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter_map(|p| p.l1_error.filter(|e| *e > 0.0).map(|e| (p.m as f64, e.ln())))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(sxy / sxx)
    }

    pub fn l1_at(&self, m: usize) -> Option<f64> {
        self.points.iter().find(|p| p.m == m).and_then(|p| p.l1_error)
    }
}

/// One row of a degree sweep. Independent of every other degree, so
/// callers may evaluate degrees concurrently.
pub fn sweep_point<F: RealFunction + ?Sized>(f: &F, m: usize, grid: &QuadratureGrid) -> DegreePoint {
    let k = certificate_degree(m);
    let truncation = hermite_coeffs(f, m, grid);
    let l2_sq: f64 = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| {
            let r = f.eval(*x) - truncation.eval(*x);
            w * r * r
        })
        .sum();
    match l1_best_approx(f, m, grid) {
        Ok(res) => DegreePoint {
            m,
            l1_error: Some(res.l1_error),
            l2_error: l2_sq.sqrt(),
            certificate_k: k,
            certificate_value: hermite_certificate(f, &res.polynomial, k, grid),
        },
        Err(e) => {
            log::warn!("degree {m}: {e}");
            DegreePoint { m, l1_error: None, l2_error: l2_sq.sqrt(), certificate_k: k, certificate_value: f64::NAN }
        }
    }
}

/// Best L1 error of `f` (already smoothed with parameter `sigma`) for
/// every degree `0..=m_max`.
pub fn degree_sweep<F: RealFunction + ?Sized>(
    f: &F,
    function: &str,
    sigma: f64,
    m_max: usize,
    grid: &QuadratureGrid,
) -> Result<DegreeCurve> {
    if grid.exact_degree() < 2 * m_max + 2 {
        return Err(invalid!("degree {m_max} exceeds the capacity of a {}-node grid", grid.len()));
    }
    let points = (0..=m_max).map(|m| sweep_point(f, m, grid)).collect();
    Ok(DegreeCurve { sigma, function: String::from(function), points })
}
