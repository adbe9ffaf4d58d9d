#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec::Vec;

use super::Parity;
use crate::error::{invalid, Result};
use crate::gaussian::{hermite_all, normal_pdf, GaussLegendre, HermiteExpansion, RealFunction, SignPattern};
use crate::linalg::{cholesky_solve, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct RefineOptions {
    /// Roots are searched in `[−span, span]`.
    pub span: f64,
    pub scan_step: f64,
    pub max_iterations: usize,
    /// Target for `max_j |E[g·h_j]|`.
    pub tolerance: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { span: 12.0, scan_step: 2e-3, max_iterations: 60, tolerance: 1e-13 }
    }
}

/// `g = sign(F − p)` on the real line together with its polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousWitness {
    pub polynomial: HermiteExpansion,
    pub pattern: SignPattern,
    /// `E|F − p|` under the standard Gaussian.
    pub l1_error: f64,
    /// `E[g·F]`; equals `l1_error` when the moments vanish.
    pub correlation: f64,
    /// `max_{j ≤ m} |E[g·h_j]|`, computed exactly from the breakpoints.
    pub moment_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Newton iteration on the coefficients of `p` for `E[sign(F − p)·h_j] = 0`,
/// `j ≤ deg`, starting from `start` (usually the grid LP solution).
///
/// Moving `p` along `h_l` moves each root `r` of `F − p` by
/// `h_l(r)/(F − p)'(r)`, which gives the Jacobian
/// `−2 Σ_r h_j(r)·h_l(r)·φ(r)/|(F − p)'(r)|`. Only coefficients allowed by
/// `parity` are updated.
pub fn refine_witness<F: RealFunction + ?Sized>(
    f: &F,
    start: &HermiteExpansion,
    parity: Parity,
    opts: &RefineOptions,
) -> Result<ContinuousWitness> {
    if !(opts.span > 0.0 && opts.scan_step > 0.0 && opts.scan_step < opts.span) {
        return Err(invalid!("refinement needs 0 < scan_step < span"));
    }
    let m = start.max_degree();
    let active: Vec<usize> = (0..=m).filter(|k| parity.admits(*k)).collect();
    let mut coeffs: Vec<f64> =
        start.coeffs().iter().enumerate().map(|(k, c)| if parity.admits(k) { *c } else { 0.0 }).collect();

    let residual = |coeffs: &[f64]| -> (Vec<f64>, f64, SignPattern, Vec<f64>) {
        let p = HermiteExpansion::new(coeffs.to_vec());
        let (pattern, roots) = sign_pattern(f, &p, opts);
        let moments = pattern.hermite_moments(m);
        let r: Vec<f64> = active.iter().map(|&k| moments[k]).collect();
        let norm = r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        (r, norm, pattern, roots)
    };

    let (mut r, mut norm, mut pattern, mut roots) = residual(&coeffs);
    let mut iterations = 0;
    let mut basis = Vec::with_capacity(m + 1);
    while norm > opts.tolerance && iterations < opts.max_iterations {
        let p = HermiteExpansion::new(coeffs.clone());
        let na = active.len();
        let mut jac = Matrix::zeros(na, na);
        for &root in &roots {
            let slope = (f.derivative(root) - p.derivative_at(root)).abs().max(1e-300);
            let scale = 2.0 * normal_pdf(root) / slope;
            hermite_all(m, root, &mut basis);
            for (a, &ka) in active.iter().enumerate() {
                for (b, &kb) in active.iter().enumerate() {
                    jac[(a, b)] += scale * basis[ka] * basis[kb];
                }
            }
        }
        let trace: f64 = (0..na).map(|a| jac[(a, a)]).sum();
        let ridge = 1e-13 * trace.max(1e-300);
        for a in 0..na {
            jac[(a, a)] += ridge;
        }
        let Some(step) = cholesky_solve(&jac, &r) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = coeffs.clone();
            for (s, &k) in step.iter().zip(&active) {
                trial[k] += lambda * s;
            }
            let (tr, tn, tp, troots) = residual(&trial);
            if tn < norm {
                coeffs = trial;
                (r, norm, pattern, roots) = (tr, tn, tp, troots);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
    }

    let polynomial = HermiteExpansion::new(coeffs);
    let gl = GaussLegendre::new(24);
    let correlation = pattern.expect_product(|x| f.eval(x), &[], 0.1, &gl);
    let all_moments = pattern.hermite_moments(m);
    let l1_error = correlation
        - polynomial.coeffs().iter().zip(&all_moments).map(|(c, mo)| c * mo).sum::<f64>();
    let moment_residual = all_moments.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    log::debug!(
        "witness refinement: {iterations} iterations, {} breaks, moment residual {moment_residual:.3e}",
        pattern.breaks().len()
    );
    Ok(ContinuousWitness {
        polynomial,
        pattern,
        l1_error,
        correlation,
        moment_residual,
        iterations,
        converged: moment_residual <= opts.tolerance.max(1e-12),
    })
}

/// Sign pattern of `F − p` on `[−span, span]` and the located roots.
fn sign_pattern<F: RealFunction + ?Sized>(
    f: &F,
    p: &HermiteExpansion,
    opts: &RefineOptions,
) -> (SignPattern, Vec<f64>) {
    let diff = |x: f64| f.eval(x) - p.eval(x);
    let steps = (2.0 * opts.span / opts.scan_step).ceil() as usize;
    // Offset so that symmetric roots (notably 0) never sit on a scan point.
    let x0 = -opts.span + 0.371 * opts.scan_step;
    let side = |v: f64| v >= 0.0;
    let mut roots = Vec::new();
    let mut prev_x = x0;
    let mut prev = diff(x0);
    let first_sign = if side(prev) { 1.0 } else { -1.0 };
    for k in 1..=steps {
        let x = x0 + k as f64 * opts.scan_step;
        let v = diff(x);
        if side(v) != side(prev) {
            roots.push(bisect(&diff, prev_x, x, side(prev)));
        }
        prev_x = x;
        prev = v;
    }
    (SignPattern::new(roots.clone(), first_sign), roots)
}

fn bisect<D: Fn(f64) -> f64>(d: &D, mut lo: f64, mut hi: f64, lo_side: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (d(mid) >= 0.0) == lo_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
