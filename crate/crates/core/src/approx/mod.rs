//! Best L1 and L2 polynomial approximation under the standard Gaussian.
//!
//! The L1 problem `min_p E|F − p|` over degree-`m` polynomials is solved
//! on a Gauss–Hermite grid in its witness form
//!
//! ```text
//! max Σ w_i F(x_i) g_i   s.t.  Σ w_i h_j(x_i) g_i = 0  (j ≤ m),  −1 ≤ g_i ≤ 1
//! ```
//!
//! whose optimal value equals the best L1 error. The maximizer `g` is the
//! moment-matching witness and the row duals are (up to sign) the Hermite
//! coefficients of the best polynomial. [`refine_witness`] then moves from
//! the grid to the real line, producing an exact sign pattern whose first
//! `m + 1` Hermite moments vanish.

mod refine;
mod sweep;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{hermite_all, HermiteExpansion, QuadratureGrid, RealFunction};
use crate::linalg::{dot, Matrix};
use crate::lp::{self, LinearProgram, RowSense};

pub use refine::{refine_witness, ContinuousWitness, RefineOptions};
pub use sweep::{degree_sweep, sweep_point, DegreeCurve, DegreePoint};

/// Grid nodes with smaller weights are dropped before solving.
pub const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
    Mixed,
}

impl Parity {
    /// Parity of tabulated values on a grid symmetric about zero.
    pub fn of_values(values: &[f64]) -> Self {
        let n = values.len();
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * (1.0 + scale);
        let mirrored = |sgn: f64| (0..n).all(|i| (values[i] - sgn * values[n - 1 - i]).abs() <= tol);
        if mirrored(-1.0) {
            Parity::Odd
        } else if mirrored(1.0) {
            Parity::Even
        } else {
            Parity::Mixed
        }
    }

    pub fn admits(self, k: usize) -> bool {
        match self {
            Parity::Odd => k % 2 == 1,
            Parity::Even => k % 2 == 0,
            Parity::Mixed => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub degree: usize,
    /// Best polynomial in the Hermite basis.
    pub polynomial: HermiteExpansion,
    /// The same polynomial in the monomial basis (ascending powers).
    pub monomial: Vec<f64>,
    /// `Σ w_i |F(x_i) − p(x_i)|`.
    pub l1_error: f64,
    /// `Σ w_i g_i F(x_i)`.
    pub dual_objective: f64,
    pub parity: Parity,
    /// The grid actually used (tail nodes below [`WEIGHT_FLOOR`] removed).
    pub grid: QuadratureGrid,
    /// Witness values `g_i` on the grid nodes.
    pub witness: Vec<f64>,
    pub lp_iterations: usize,
}

impl ApproxResult {
    /// `max_i (|g_i| − 1)⁺`.
    pub fn witness_bound_violation(&self) -> f64 {
        self.witness.iter().fold(0.0_f64, |m, g| m.max(g.abs() - 1.0))
    }

    /// `max_{j ≤ m} |Σ_i w_i g_i h_j(x_i)|`.
    pub fn witness_moment_residual(&self) -> f64 {
        let mut moments = alloc::vec![0.0; self.degree + 1];
        let mut basis = Vec::with_capacity(self.degree + 1);
        for ((x, w), g) in self.grid.nodes().iter().zip(self.grid.weights()).zip(&self.witness) {
            hermite_all(self.degree, *x, &mut basis);
            for (mo, h) in moments.iter_mut().zip(&basis) {
                *mo += w * g * h;
            }
        }
        moments.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn duality_gap(&self) -> f64 {
        (self.l1_error - self.dual_objective).abs()
    }

    /// Continuous refinement of this result; see [`refine_witness`].
    pub fn refine<F: RealFunction + ?Sized>(
        &self,
        f: &F,
        opts: &RefineOptions,
    ) -> Result<ContinuousWitness> {
        refine_witness(f, &self.polynomial, self.parity, opts)
    }
}

/// The witness-form LP for values `F(x_i)` on `grid`.
pub fn approximation_lp(values: &[f64], m: usize, grid: &QuadratureGrid) -> Result<LinearProgram> {
    let n = grid.len();
    if values.len() != n {
        return Err(invalid!("{} values for a grid of {n} nodes", values.len()));
    }
    let mut rows = alloc::vec![0.0; (m + 1) * n];
    let mut basis = Vec::with_capacity(m + 1);
    for (i, (x, w)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        hermite_all(m, *x, &mut basis);
        for (j, h) in basis.iter().enumerate() {
            rows[j * n + i] = w * h;
        }
    }
    let objective = values.iter().zip(grid.weights()).map(|(f, w)| -w * f).collect();
    LinearProgram::new(
        objective,
        Matrix::from_rows(m + 1, n, rows),
        alloc::vec![0.0; m + 1],
        alloc::vec![RowSense::Eq; m + 1],
        alloc::vec![(-1.0, 1.0); n],
    )
}

/// Best degree-`m` L1 approximation of `f` on `grid`.
///
/// When `f` is odd (even) on the symmetric grid, coefficients of the
/// opposite parity are zeroed; the result is still optimal and makes the
/// answer unique in the common degenerate cases (e.g. constants for `sign`).
pub fn l1_best_approx<F: RealFunction + ?Sized>(
    f: &F,
    m: usize,
    grid: &QuadratureGrid,
) -> Result<ApproxResult> {
    if grid.exact_degree() < 2 * m + 2 {
        return Err(invalid!(
            "a {}-node grid is exact to degree {}, degree {m} needs {}",
            grid.len(),
            grid.exact_degree(),
            2 * m + 2
        ));
    }
    let grid = grid.pruned(WEIGHT_FLOOR);
    let values = grid.tabulate(f);
    let parity = Parity::of_values(&values);
    let problem = approximation_lp(&values, m, &grid)?;
    let sol = lp::solve(&problem)?;
    if !sol.is_optimal() {
        return Err(Error::LpFailure(format!(
            "degree {m}: {:?} ({})",
            sol.status,
            sol.message.as_deref().unwrap_or("no detail")
        )));
    }
    let coeffs: Vec<f64> = sol
        .duals
        .iter()
        .enumerate()
        .map(|(k, y)| if parity.admits(k) { -y } else { 0.0 })
        .collect();
    let polynomial = HermiteExpansion::new(coeffs);
    let l1_error = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(&values)
        .map(|((x, w), v)| w * (v - polynomial.eval(*x)).abs())
        .sum();
    let weighted: Vec<f64> = values.iter().zip(grid.weights()).map(|(v, w)| v * w).collect();
    let dual_objective = dot(&weighted, &sol.x);
    log::trace!("degree {m}: l1 {l1_error:.6e}, {} lp iterations", sol.iterations);
    Ok(ApproxResult {
        degree: m,
        monomial: polynomial.to_monomial(),
        polynomial,
        l1_error,
        dual_objective,
        parity,
        grid,
        witness: sol.x,
        lp_iterations: sol.iterations,
    })
}

/// Degree-`m` truncation of an expansion and the L2 norm of the tail.
pub fn l2_truncate(e: &HermiteExpansion, m: usize) -> (HermiteExpansion, f64) {
    (e.truncated(m), e.tail_norm_sq(m).sqrt())
}

/// Quadrature estimate of `E[h_k(G)·(F − p)(G)]`.
///
/// For odd `k > deg p` and `F = U_a sign` this is `a^k·c_k` whatever `p`
/// is; it lower-bounds `‖F − p‖₂`.
pub fn hermite_certificate<F: RealFunction + ?Sized>(
    f: &F,
    p: &HermiteExpansion,
    k: usize,
    grid: &QuadratureGrid,
) -> f64 {
    let mut basis = Vec::with_capacity(k + 1);
    grid.nodes()
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| {
            hermite_all(k, *x, &mut basis);
            w * (f.eval(*x) - p.eval(*x)) * basis[k]
        })
        .sum()
}

/// Smallest odd degree above `m`.
pub fn certificate_degree(m: usize) -> usize {
    if m % 2 == 0 {
        m + 1
    } else {
        m + 2
    }
}
