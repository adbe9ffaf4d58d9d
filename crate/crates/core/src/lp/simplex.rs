#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::string::String;
use alloc::vec::Vec;

use super::problem::{LinearProgram, RowSense};
use super::scaling::Scaling;
use crate::error::{invalid, Result};
use crate::linalg::{dot, Matrix};

const NONBASIC: usize = usize::MAX;
/// Minimum number of ratio-test breakpoints sorted at a time.
const BREAKPOINT_CHUNK: usize = 64;
/// Relative size of the cost perturbation in the dual method.
const COST_PERTURBATION: f64 = 1e-7;

/// Deterministic value in `±[0.5, 1]` for column `j`.
fn perturbation(j: usize) -> f64 {
    let mut z = (j as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    let mag = 0.5 + 0.5 * ((z >> 11) as f64 / (1u64 << 53) as f64);
    if z & 1 == 0 { mag } else { -mag }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Dual method for boxed equality-form problems, primal otherwise.
    Auto,
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration limit, cycling guard or a singular basis.
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub method: Method,
    /// Bound violation tolerated in the scaled problem.
    pub feasibility_tol: f64,
    /// Reduced-cost sign violation tolerated in the scaled problem.
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    /// 0 selects `50·(rows + vars) + 1000`.
    pub max_iterations: usize,
    pub scale: bool,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-10,
            max_iterations: 0,
            scale: true,
            bland_after: 30,
            refactor_every: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point (last iterate when not optimal).
    pub x: Vec<f64>,
    /// Row multipliers `y` with `c = Aᵀy + d` at optimality.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub method: Method,
    /// Improving direction when unbounded.
    pub ray: Option<Vec<f64>>,
    /// Row multipliers proving infeasibility.
    pub farkas: Option<Vec<f64>>,
    pub message: Option<String>,
}

/// Residuals of a solution measured on the original (unscaled) problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// Largest row or bound violation of `x`.
    pub primal_residual: f64,
    /// Largest sign violation of the duals and reduced costs.
    pub dual_residual: f64,
    /// `|c - Aᵀy - d|_∞`.
    pub stationarity_residual: f64,
    /// Largest product of a multiplier with the slack of its constraint.
    pub complementarity: f64,
    pub primal_objective: f64,
    /// `bᵀy + Σ_j d_j·(bound selected by the sign of d_j)`.
    pub dual_objective: f64,
}

impl Certificate {
    pub fn duality_gap(&self) -> f64 {
        (self.primal_objective - self.dual_objective).abs()
    }
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn certify(&self, lp: &LinearProgram) -> Certificate {
        let a = lp.matrix();
        let ax = a.mul_vec(&self.x);
        let mut primal_residual = 0.0_f64;
        let mut complementarity = 0.0_f64;
        for (((v, b), s), y) in ax.iter().zip(lp.rhs()).zip(lp.senses()).zip(&self.duals) {
            let viol = match s {
                RowSense::Le => v - b,
                RowSense::Ge => b - v,
                RowSense::Eq => (v - b).abs(),
            };
            primal_residual = primal_residual.max(viol);
            complementarity = complementarity.max((y * (v - b)).abs());
        }
        for ((x, (l, u)), d) in self.x.iter().zip(lp.bounds()).zip(&self.reduced_costs) {
            primal_residual = primal_residual.max(l - x).max(x - u);
            let slack = if *d > 0.0 { x - l } else { u - x };
            if slack.is_finite() {
                complementarity = complementarity.max((d * slack).abs());
            }
        }

        let aty = a.tmul_vec(&self.duals);
        let stationarity_residual = lp
            .objective()
            .iter()
            .zip(&aty)
            .zip(&self.reduced_costs)
            .fold(0.0_f64, |m, ((c, ay), d)| m.max((c - ay - d).abs()));

        let mut dual_residual = 0.0_f64;
        let mut dual_objective = dot(lp.rhs(), &self.duals);
        for (d, (l, u)) in self.reduced_costs.iter().zip(lp.bounds()) {
            if *d > 0.0 {
                if l.is_finite() {
                    dual_objective += d * l;
                } else {
                    dual_residual = dual_residual.max(*d);
                }
            } else if *d < 0.0 {
                if u.is_finite() {
                    dual_objective += d * u;
                } else {
                    dual_residual = dual_residual.max(-d);
                }
            }
        }
        for (y, s) in self.duals.iter().zip(lp.senses()) {
            let viol = match s {
                RowSense::Le => *y,
                RowSense::Ge => -*y,
                RowSense::Eq => 0.0,
            };
            dual_residual = dual_residual.max(viol);
        }

        Certificate {
            primal_residual,
            dual_residual,
            stationarity_residual,
            complementarity,
            primal_objective: dot(lp.objective(), &self.x),
            dual_objective,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, &SolverOptions::default())
}

pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution> {
    let use_dual = match opts.method {
        Method::Primal => false,
        Method::Auto => lp.is_boxed_equality_form(),
        Method::Dual => {
            if !lp.is_boxed_equality_form() {
                return Err(invalid!(
                    "the dual method needs equality rows and finite bounds on every variable"
                ));
            }
            true
        }
    };
    let scaling = if opts.scale {
        Scaling::equilibrate(lp.matrix())
    } else {
        Scaling::identity(lp.num_rows(), lp.num_vars())
    };
    let mut work = Work::new(lp, &scaling, !use_dual);
    let raw = if use_dual { work.dual_simplex(opts) } else { work.primal_simplex(opts) };
    let method = if use_dual { Method::Dual } else { Method::Primal };
    log::debug!(
        "lp {}x{} via {:?}: {:?} after {} iterations",
        lp.num_rows(),
        lp.num_vars(),
        method,
        raw.status,
        raw.iterations
    );
    Ok(work.unscale(lp, &scaling, raw, method))
}

struct RawOutcome {
    status: LpStatus,
    iterations: usize,
    ray: Option<Vec<f64>>,
    farkas: Option<Vec<f64>>,
    message: Option<String>,
}

impl RawOutcome {
    fn new(status: LpStatus, iterations: usize) -> Self {
        Self { status, iterations, ray: None, farkas: None, message: None }
    }

    fn failure(iterations: usize, message: &str) -> Self {
        Self { message: Some(String::from(message)), ..Self::new(LpStatus::NumericalFailure, iterations) }
    }
}

/// Scaled problem in the form `[A I ±I] (x, s, art) = b` with bounds on
/// every column; logical `s` carries the row sense.
struct Work {
    m: usize,
    n: usize,
    /// Structural columns, column-major.
    acol: Vec<f64>,
    b: Vec<f64>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    art_sign: Vec<f64>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    binv: Matrix,
}

impl Work {
    fn new(lp: &LinearProgram, sc: &Scaling, with_artificials: bool) -> Self {
        let (m, n) = (lp.num_rows(), lp.num_vars());
        let a = lp.matrix();
        let mut acol = alloc::vec![0.0; n * m];
        for i in 0..m {
            for (j, v) in a.row(i).iter().enumerate() {
                acol[j * m + i] = v * sc.row[i] * sc.col[j];
            }
        }
        let total = n + m + if with_artificials { m } else { 0 };
        let mut cost = alloc::vec![0.0; total];
        let mut lo = alloc::vec![0.0; total];
        let mut up = alloc::vec![0.0; total];
        for j in 0..n {
            cost[j] = lp.objective()[j] * sc.col[j];
            let (l, u) = lp.bounds()[j];
            lo[j] = l / sc.col[j];
            up[j] = u / sc.col[j];
        }
        for (i, s) in lp.senses().iter().enumerate() {
            let (l, u) = match s {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            lo[n + i] = l;
            up[n + i] = u;
        }
        for j in n + m..total {
            up[j] = f64::INFINITY;
        }
        let b = lp.rhs().iter().zip(&sc.row).map(|(b, r)| b * r).collect();

        Self {
            m,
            n,
            acol,
            b,
            cost,
            lo,
            up,
            x: alloc::vec![0.0; total],
            art_sign: alloc::vec![1.0; m],
            basis: Vec::new(),
            pos: alloc::vec![NONBASIC; total],
            binv: Matrix::identity(m),
        }
    }

    fn total(&self) -> usize {
        self.cost.len()
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.acol[j * self.m..(j + 1) * self.m]
    }

    /// `a_jᵀ v`.
    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.n {
            dot(self.column(j), v)
        } else if j < self.n + self.m {
            v[j - self.n]
        } else {
            let r = j - self.n - self.m;
            self.art_sign[r] * v[r]
        }
    }

    /// `out += alpha · a_j`.
    fn col_axpy(&self, j: usize, alpha: f64, out: &mut [f64]) {
        if j < self.n {
            for (o, a) in out.iter_mut().zip(self.column(j)) {
                *o += alpha * a;
            }
        } else if j < self.n + self.m {
            out[j - self.n] += alpha;
        } else {
            let r = j - self.n - self.m;
            out[r] += alpha * self.art_sign[r];
        }
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        if j < self.n {
            let col = self.column(j);
            (0..m).map(|i| dot(self.binv.row(i), col)).collect()
        } else {
            let (r, s) = if j < self.n + m {
                (j - self.n, 1.0)
            } else {
                (j - self.n - m, self.art_sign[j - self.n - m])
            };
            (0..m).map(|i| s * self.binv[(i, r)]).collect()
        }
    }

    fn set_basis(&mut self, basis: Vec<usize>) {
        for p in self.pos.iter_mut() {
            *p = NONBASIC;
        }
        for (r, &j) in basis.iter().enumerate() {
            self.pos[j] = r;
        }
        self.basis = basis;
    }

    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut bmat = Matrix::zeros(m, m);
        let mut col = alloc::vec![0.0; m];
        for (k, &j) in self.basis.iter().enumerate() {
            col.iter_mut().for_each(|c| *c = 0.0);
            self.col_axpy(j, 1.0, &mut col);
            for i in 0..m {
                bmat[(i, k)] = col[i];
            }
        }
        match bmat.inverse(1e-14) {
            Some(inv) => {
                self.binv = inv;
                true
            }
            None => false,
        }
    }

    /// Basic values from the nonbasic ones.
    fn compute_basic(&mut self) {
        let mut rhs = self.b.clone();
        for j in 0..self.total() {
            if self.pos[j] == NONBASIC && self.x[j] != 0.0 {
                self.col_axpy(j, -self.x[j], &mut rhs);
            }
        }
        for r in 0..self.m {
            self.x[self.basis[r]] = dot(self.binv.row(r), &rhs);
        }
    }

    fn compute_duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut y = alloc::vec![0.0; self.m];
        for (k, &j) in self.basis.iter().enumerate() {
            let c = cost[j];
            if c != 0.0 {
                for (yi, b) in y.iter_mut().zip(self.binv.row(k)) {
                    *yi += c * b;
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, alpha: &[f64], entering: usize) {
        let m = self.m;
        let p = alpha[r];
        for v in self.binv.row_mut(r) {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.binv.row(r).to_vec();
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            for (v, pr) in self.binv.row_mut(i).iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
        }
        let leaving = self.basis[r];
        self.pos[leaving] = NONBASIC;
        self.pos[entering] = r;
        self.basis[r] = entering;
    }

    fn infeasibility(&self, j: usize) -> f64 {
        (self.lo[j] - self.x[j]).max(self.x[j] - self.up[j]).max(0.0)
    }

    fn iteration_cap(&self, opts: &SolverOptions) -> usize {
        if opts.max_iterations > 0 {
            opts.max_iterations
        } else {
            50 * (self.m + self.n) + 1000
        }
    }

    // ---------------------------------------------------------------- primal

    fn primal_simplex(&mut self, opts: &SolverOptions) -> RawOutcome {
        let (m, n) = (self.m, self.n);
        for j in 0..n {
            self.x[j] = if self.lo[j].is_finite() {
                self.lo[j]
            } else if self.up[j].is_finite() {
                self.up[j]
            } else {
                0.0
            };
        }
        let mut resid = self.b.clone();
        for j in 0..n {
            if self.x[j] != 0.0 {
                self.col_axpy(j, -self.x[j], &mut resid);
            }
        }
        let mut basis = Vec::with_capacity(m);
        let mut phase_one_cost = alloc::vec![0.0; self.total()];
        let mut any_artificial = false;
        for (i, &r) in resid.iter().enumerate() {
            let s = n + i;
            if r >= self.lo[s] && r <= self.up[s] {
                self.x[s] = r;
                basis.push(s);
            } else {
                let at = if r < self.lo[s] { self.lo[s] } else { self.up[s] };
                self.x[s] = at;
                let a = n + m + i;
                self.art_sign[i] = if r - at >= 0.0 { 1.0 } else { -1.0 };
                self.x[a] = (r - at).abs();
                phase_one_cost[a] = 1.0;
                basis.push(a);
                any_artificial = true;
            }
        }
        self.set_basis(basis);
        self.binv = Matrix::identity(m);
        for i in 0..m {
            if self.basis[i] >= n + m {
                self.binv[(i, i)] = self.art_sign[i];
            }
        }

        let cap = self.iteration_cap(opts);
        let mut iterations = 0;
        if any_artificial {
            let out = self.primal_phase(&phase_one_cost, opts, &mut iterations, cap);
            if out.status != LpStatus::Optimal {
                return out;
            }
            let infeas: f64 = (n + m..self.total()).map(|j| self.x[j]).sum();
            let bnorm = self.b.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
            if infeas > opts.feasibility_tol * bnorm * (m as f64).sqrt().max(1.0) {
                let mut out = RawOutcome::new(LpStatus::Infeasible, iterations);
                out.farkas = Some(self.compute_duals(&phase_one_cost));
                return out;
            }
            self.drive_out_artificials(opts);
        }
        for j in n + m..self.total() {
            self.up[j] = 0.0;
            if self.pos[j] == NONBASIC {
                self.x[j] = 0.0;
            }
        }
        let cost = self.cost.clone();
        self.primal_phase(&cost, opts, &mut iterations, cap)
    }

    fn drive_out_artificials(&mut self, opts: &SolverOptions) {
        let (m, n) = (self.m, self.n);
        for r in 0..m {
            if self.basis[r] < n + m {
                continue;
            }
            let rho = self.binv.row(r).to_vec();
            let candidate = (0..n + m)
                .filter(|&j| self.pos[j] == NONBASIC)
                .map(|j| (j, self.col_dot(j, &rho)))
                .filter(|(_, a)| a.abs() > 1e3 * opts.pivot_tol)
                .fold(None, |best: Option<(usize, f64)>, c| match best {
                    Some(b) if b.1.abs() >= c.1.abs() => Some(b),
                    _ => Some(c),
                });
            if let Some((q, _)) = candidate {
                let alpha = self.ftran(q);
                let leaving = self.basis[r];
                self.pivot(r, &alpha, q);
                self.x[leaving] = 0.0;
            }
        }
        if self.refactor() {
            self.compute_basic();
        }
    }

    fn primal_phase(
        &mut self,
        cost: &[f64],
        opts: &SolverOptions,
        iterations: &mut usize,
        cap: usize,
    ) -> RawOutcome {
        let total = self.total();
        let mut degenerate_run = 0usize;
        let mut since_refactor = 0usize;
        loop {
            if *iterations >= cap {
                return RawOutcome::failure(*iterations, "iteration limit reached");
            }
            if since_refactor >= opts.refactor_every {
                if !self.refactor() {
                    return RawOutcome::failure(*iterations, "basis became singular");
                }
                self.compute_basic();
                since_refactor = 0;
            }
            let bland = degenerate_run > opts.bland_after;
            let y = self.compute_duals(cost);

            // Pricing: (variable, direction, |d|).
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..total {
                if self.pos[j] != NONBASIC || self.lo[j] == self.up[j] {
                    continue;
                }
                let d = cost[j] - self.col_dot(j, &y);
                let dir = if d < -opts.optimality_tol && self.x[j] < self.up[j] {
                    1.0
                } else if d > opts.optimality_tol && self.x[j] > self.lo[j] {
                    -1.0
                } else {
                    continue;
                };
                if bland {
                    entering = Some((j, dir, d.abs()));
                    break;
                }
                if entering.map_or(true, |(_, _, best)| d.abs() > best) {
                    entering = Some((j, dir, d.abs()));
                }
            }
            let Some((q, dir, _)) = entering else {
                return RawOutcome::new(LpStatus::Optimal, *iterations);
            };
            let alpha = self.ftran(q);

            // Harris pass one: largest step with relaxed bounds.
            let tol = opts.feasibility_tol;
            let mut theta_max = f64::INFINITY;
            for (r, &a) in alpha.iter().enumerate() {
                if a.abs() <= opts.pivot_tol {
                    continue;
                }
                let j = self.basis[r];
                let rate = -dir * a;
                let lim = if rate < 0.0 {
                    (self.x[j] - self.lo[j] + tol) / -rate
                } else {
                    (self.up[j] - self.x[j] + tol) / rate
                };
                theta_max = theta_max.min(lim);
            }
            // Pass two: among rows within the relaxed step, largest pivot.
            let mut leave: Option<(usize, f64)> = None;
            if theta_max.is_finite() {
                let mut best = 0.0;
                for (r, &a) in alpha.iter().enumerate() {
                    if a.abs() <= opts.pivot_tol {
                        continue;
                    }
                    let j = self.basis[r];
                    let rate = -dir * a;
                    let ratio = if rate < 0.0 {
                        (self.x[j] - self.lo[j]) / -rate
                    } else {
                        (self.up[j] - self.x[j]) / rate
                    };
                    if ratio <= theta_max {
                        let better = if bland {
                            leave.map_or(true, |(lr, _)| j < self.basis[lr])
                        } else {
                            a.abs() > best
                        };
                        if better {
                            best = a.abs();
                            leave = Some((r, ratio.max(0.0)));
                        }
                    }
                }
            }
            let span = self.up[q] - self.lo[q];
            let step = match leave {
                Some((_, t)) if t < span => t,
                _ if span.is_finite() => span,
                _ => {
                    let mut out = RawOutcome::new(LpStatus::Unbounded, *iterations);
                    let mut ray = alloc::vec![0.0; self.n];
                    if q < self.n {
                        ray[q] = dir;
                    }
                    for (r, &a) in alpha.iter().enumerate() {
                        if self.basis[r] < self.n {
                            ray[self.basis[r]] = -dir * a;
                        }
                    }
                    out.ray = Some(ray);
                    return out;
                }
            };

            self.x[q] += dir * step;
            for (r, &a) in alpha.iter().enumerate() {
                let j = self.basis[r];
                self.x[j] -= dir * step * a;
            }
            match leave {
                Some((r, t)) if t < span => {
                    let j = self.basis[r];
                    let rate = -dir * alpha[r];
                    self.x[j] = if rate < 0.0 { self.lo[j] } else { self.up[j] };
                    self.pivot(r, &alpha, q);
                    since_refactor += 1;
                }
                _ => {
                    self.x[q] = if dir > 0.0 { self.up[q] } else { self.lo[q] };
                }
            }
            degenerate_run = if step <= 1e-12 { degenerate_run + 1 } else { 0 };
            *iterations += 1;
        }
    }

    // ------------------------------------------------------------------ dual

    /// Crash basis: structural columns chosen greedily by largest residual
    /// norm after projecting out the columns already chosen, completed
    /// with logical columns.
    fn crash_basis(&self) -> Vec<usize> {
        let (m, n) = (self.m, self.n);
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut chosen = alloc::vec![false; n + m];
        let mut resid: Vec<f64> = (0..n + m)
            .map(|j| {
                if j < n {
                    dot(self.column(j), self.column(j))
                } else {
                    1.0
                }
            })
            .collect();
        let initial = resid.clone();
        let mut basis = Vec::with_capacity(m);
        while basis.len() < m {
            // Prefer structurals; fall back to logicals once they run out.
            let pick = |range: core::ops::Range<usize>| {
                range
                    .filter(|&j| !chosen[j] && resid[j] > 1e-20 * initial[j].max(1e-300))
                    .fold(None, |best: Option<(usize, f64)>, j| match best {
                        Some((_, v)) if v >= resid[j] => best,
                        _ => Some((j, resid[j])),
                    })
            };
            let Some((j, rn)) = pick(0..n)
                .filter(|&(j, v)| v > 1e-12 * initial[j])
                .or_else(|| pick(n..n + m))
            else {
                break;
            };
            let _ = rn;
            let mut v = alloc::vec![0.0; m];
            self.col_axpy(j, 1.0, &mut v);
            for _ in 0..2 {
                for qk in &q {
                    let c = dot(qk, &v);
                    for (vi, qi) in v.iter_mut().zip(qk) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = dot(&v, &v).sqrt();
            chosen[j] = true;
            if norm <= 1e-10 * initial[j].sqrt() {
                resid[j] = 0.0;
                continue;
            }
            v.iter_mut().for_each(|vi| *vi /= norm);
            for k in 0..n + m {
                if !chosen[k] {
                    let c = if k < n { dot(self.column(k), &v) } else { v[k - n] };
                    resid[k] = (resid[k] - c * c).max(0.0);
                }
            }
            q.push(v);
            basis.push(j);
        }
        basis
    }

    fn dual_simplex(&mut self, opts: &SolverOptions) -> RawOutcome {
        let m = self.m;
        let total = self.total();
        let basis = self.crash_basis();
        if basis.len() < m {
            return RawOutcome::failure(0, "could not build an initial basis");
        }
        self.set_basis(basis);
        if !self.refactor() {
            return RawOutcome::failure(0, "initial basis is singular");
        }
        for j in 0..total {
            if self.pos[j] == NONBASIC {
                self.x[j] = self.lo[j];
            }
        }

        // Dual degeneracy (many zero reduced costs) stalls the ratio test,
        // so first solve with slightly perturbed costs, then restore them;
        // boxed columns keep every basis dual feasible after bound flips.
        let cost = self.cost.clone();
        for j in 0..self.n {
            let u = perturbation(j);
            self.cost[j] += COST_PERTURBATION * (1.0 + cost[j].abs()) * u;
        }
        let first = self.dual_iterate(opts, 0);
        self.cost = cost;
        if first.status != LpStatus::Optimal {
            return first;
        }
        self.dual_iterate(opts, first.iterations)
    }

    fn dual_iterate(&mut self, opts: &SolverOptions, start: usize) -> RawOutcome {
        let m = self.m;
        let total = self.total();
        let cap = self.iteration_cap(opts);
        let mut d = alloc::vec![0.0; total];
        let mut iterations = start;
        let mut since_refresh = usize::MAX;
        let mut degenerate_run = 0usize;
        let mut rho = alloc::vec![0.0; m];
        let mut alpha_row = alloc::vec![0.0; total];
        loop {
            if iterations >= cap {
                return RawOutcome::failure(iterations, "iteration limit reached");
            }
            if since_refresh >= opts.refactor_every {
                if !self.refactor() {
                    return RawOutcome::failure(iterations, "basis became singular");
                }
                self.refresh_dual(&mut d, opts);
                since_refresh = 0;
            }
            let bland = degenerate_run > opts.bland_after;

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let j = self.basis[r];
                let inf = self.infeasibility(j);
                if inf <= opts.feasibility_tol {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some((lr, linf)) => {
                        if bland {
                            j < self.basis[lr]
                        } else {
                            inf > linf
                        }
                    }
                };
                if better {
                    leave = Some((r, inf));
                }
            }
            let Some((r, delta)) = leave else {
                if since_refresh == 0 {
                    return RawOutcome::new(LpStatus::Optimal, iterations);
                }
                // Confirm optimality on freshly computed values.
                since_refresh = usize::MAX;
                continue;
            };
            let jr = self.basis[r];
            let s = if self.x[jr] < self.lo[jr] { 1.0 } else { -1.0 };
            rho.copy_from_slice(self.binv.row(r));

            let mut breakpoints: Vec<(f64, usize, f64)> = Vec::new();
            for j in 0..total {
                if self.pos[j] != NONBASIC {
                    continue;
                }
                let a = self.col_dot(j, &rho);
                alpha_row[j] = a;
                if self.lo[j] == self.up[j] || a.abs() <= opts.pivot_tol {
                    continue;
                }
                let at = s * a;
                let at_lower = self.x[j] <= self.lo[j];
                if at_lower && at < 0.0 {
                    breakpoints.push((d[j].max(0.0) / -at, j, a));
                } else if !at_lower && at > 0.0 {
                    breakpoints.push(((-d[j]).max(0.0) / at, j, a));
                }
            }
            // Breakpoints are consumed in increasing order and the walk
            // usually stops early, so sort lazily in chunks.
            let order = |x: &(f64, usize, f64), y: &(f64, usize, f64)| {
                x.0.partial_cmp(&y.0)
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(y.2.abs().partial_cmp(&x.2.abs()).unwrap_or(core::cmp::Ordering::Equal))
                    .then(x.1.cmp(&y.1))
            };
            let mut sorted = 0;
            let sort_more = |bp: &mut Vec<(f64, usize, f64)>, sorted: &mut usize| {
                let rest = &mut bp[*sorted..];
                let chunk = (rest.len() / 8).max(BREAKPOINT_CHUNK);
                if rest.len() > chunk {
                    rest.select_nth_unstable_by(chunk, order);
                    rest[..chunk].sort_unstable_by(order);
                    *sorted += chunk;
                } else {
                    rest.sort_unstable_by(order);
                    *sorted = bp.len();
                }
            };
            let mut slope = delta;
            let mut k = 0;
            while k < breakpoints.len() {
                if k == sorted {
                    sort_more(&mut breakpoints, &mut sorted);
                }
                let (_, j, a) = breakpoints[k];
                let next = slope - a.abs() * (self.up[j] - self.lo[j]);
                if next <= 0.0 {
                    break;
                }
                slope = next;
                k += 1;
            }
            if k == breakpoints.len() {
                let mut out = RawOutcome::new(LpStatus::Infeasible, iterations);
                out.farkas = Some(rho.iter().map(|v| s * v).collect());
                return out;
            }
            // Among near-ties with the blocking breakpoint, prefer a large
            // pivot. A candidate qualifies if stepping to it leaves the
            // reduced costs passed over within tolerance; those columns are
            // not flipped, and the next refresh repairs their sign.
            let t_block = breakpoints[k].0;
            let mut pick = k;
            if !bland {
                let mut idx = k + 1;
                while idx < breakpoints.len() {
                    if idx == sorted {
                        sort_more(&mut breakpoints, &mut sorted);
                    }
                    let (tj, _, aj) = breakpoints[idx];
                    if (tj - t_block) * breakpoints[k].2.abs().max(aj.abs()) > opts.optimality_tol {
                        break;
                    }
                    if aj.abs() > breakpoints[pick].2.abs() {
                        pick = idx;
                    }
                    idx += 1;
                }
            }
            let (t, q, aq) = breakpoints[pick];

            let alpha_col = self.ftran(q);
            if (alpha_col[r] - aq).abs() > 1e-7 * (1.0 + aq.abs()) {
                if since_refresh == 0 {
                    return RawOutcome::failure(iterations, "pivot element lost accuracy");
                }
                since_refresh = usize::MAX;
                continue;
            }

            // Bound flips for the breakpoints passed over.
            let mut flip_rhs = alloc::vec![0.0; m];
            let mut flipped = false;
            for &(_, j, _) in &breakpoints[..k] {
                let to = if self.x[j] <= self.lo[j] { self.up[j] } else { self.lo[j] };
                self.col_axpy(j, to - self.x[j], &mut flip_rhs);
                self.x[j] = to;
                flipped = true;
            }
            if flipped {
                for i in 0..m {
                    let dx = dot(self.binv.row(i), &flip_rhs);
                    self.x[self.basis[i]] -= dx;
                }
            }

            // Dual step.
            for j in 0..total {
                if self.pos[j] == NONBASIC {
                    d[j] += t * s * alpha_row[j];
                }
            }
            d[jr] = t * s;
            d[q] = 0.0;

            // Primal step.
            let target = if s > 0.0 { self.lo[jr] } else { self.up[jr] };
            let theta = (self.x[jr] - target) / alpha_col[r];
            for i in 0..m {
                self.x[self.basis[i]] -= theta * alpha_col[i];
            }
            self.x[q] += theta;
            self.x[jr] = target;
            self.pivot(r, &alpha_col, q);

            degenerate_run = if t <= 1e-14 { degenerate_run + 1 } else { 0 };
            iterations += 1;
            since_refresh = since_refresh.saturating_add(1);
        }
    }

    /// Recomputes reduced costs and basic values; nonbasic variables whose
    /// reduced cost has the wrong sign are moved to the other bound.
    fn refresh_dual(&mut self, d: &mut [f64], opts: &SolverOptions) {
        let cost = self.cost.clone();
        let y = self.compute_duals(&cost);
        for j in 0..self.total() {
            if self.pos[j] != NONBASIC {
                d[j] = 0.0;
                continue;
            }
            d[j] = cost[j] - self.col_dot(j, &y);
            if self.lo[j] == self.up[j] {
                continue;
            }
            if d[j] < -opts.optimality_tol && self.x[j] <= self.lo[j] {
                self.x[j] = self.up[j];
            } else if d[j] > opts.optimality_tol && self.x[j] >= self.up[j] {
                self.x[j] = self.lo[j];
            }
        }
        self.compute_basic();
    }

    // --------------------------------------------------------------- output

    fn unscale(
        &self,
        lp: &LinearProgram,
        sc: &Scaling,
        raw: RawOutcome,
        method: Method,
    ) -> LpSolution {
        let (m, n) = (self.m, self.n);
        // A column with a large scale factor may sit outside its bounds by
        // tol·factor after unscaling; its entries are tiny by the same
        // factor, so projecting back moves the rows by at most tol.
        let x: Vec<f64> = (0..n)
            .map(|j| {
                let (l, u) = lp.bounds()[j];
                (self.x[j] * sc.col[j]).clamp(l, u)
            })
            .collect();
        let (duals, reduced_costs) = if self.basis.len() == m {
            let y_scaled = self.compute_duals(&self.cost);
            let y: Vec<f64> = y_scaled.iter().zip(&sc.row).map(|(y, r)| y * r).collect();
            let aty = lp.matrix().tmul_vec(&y);
            let d = lp.objective().iter().zip(&aty).map(|(c, a)| c - a).collect();
            (y, d)
        } else {
            (alloc::vec![0.0; m], lp.objective().to_vec())
        };
        let unscale_rows = |v: Vec<f64>| v.iter().zip(&sc.row).map(|(a, r)| a * r).collect();
        LpSolution {
            status: raw.status,
            objective: dot(lp.objective(), &x),
            x,
            duals,
            reduced_costs,
            iterations: raw.iterations,
            method,
            ray: raw.ray.map(|r| r.iter().zip(&sc.col).map(|(a, c)| a * c).collect()),
            farkas: raw.farkas.map(unscale_rows),
            message: raw.message,
        }
    }
}
