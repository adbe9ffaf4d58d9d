//! Invariant suites shared by `selftest` (reduced sizes) and the
//! acceptance tests (full sizes). Each suite returns one row per check.

use serde::Serialize;
use smoothsq_core::approx::{certificate_degree, hermite_certificate, l1_best_approx};
use smoothsq_core::gaussian::{
    hermite_coeffs, orthonormality_error, ou_adjoint_gap, smoothing_correspondence, BivariateHermite,
    QuadratureGrid, SmoothedThreshold,
};
use smoothsq_core::rng::stream;

use crate::commands::{distinguish, gap, hard_check, learn};
use crate::config::{DistinguishConfig, GapConfig, HardCheckConfig, LearnConfig, PolicyKind};
use crate::error::{CliError, Context};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn at_most(suite: &str, check: &str, value: f64, threshold: f64) -> CheckRow {
    CheckRow { suite: suite.into(), check: check.into(), value, threshold, pass: value <= threshold }
}

fn at_least(suite: &str, check: &str, value: f64, threshold: f64) -> CheckRow {
    CheckRow { suite: suite.into(), check: check.into(), value, threshold, pass: value >= threshold }
}

/// `max_m (‖T_σ sign − P_m‖₂² − a^{2m})` with `P_m` the degree-`m`
/// Hermite truncation.
pub fn truncation(sigmas: &[f64], m_max: usize, grid: &QuadratureGrid) -> Result<Vec<CheckRow>, CliError> {
    let mut worst = f64::NEG_INFINITY;
    for &sigma in sigmas {
        let f = SmoothedThreshold::new(0.0, sigma).within("gaussian-analysis")?;
        let a2 = smoothing_correspondence(sigma).powi(2);
        for m in 1..=m_max {
            let p = hermite_coeffs(&f, m, grid);
            let err2 = grid.expect(&|x: f64| (f.eval(x) - p.eval(x)).powi(2));
            worst = worst.max(err2 - a2.powi(m as i32));
        }
    }
    Ok(vec![at_most("truncation", "max(err2 - a^2m)", worst, 1e-9)])
}

/// Primal/dual agreement and witness feasibility of the approximation LP.
pub fn duality(sigmas: &[f64], m_max: usize, grid: &QuadratureGrid) -> Result<Vec<CheckRow>, CliError> {
    let (mut gap, mut bound, mut moments) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &sigma in sigmas {
        let f = SmoothedThreshold::new(0.0, sigma).within("poly-approx")?;
        for m in 0..=m_max {
            let r = l1_best_approx(&f, m, grid).within("poly-approx")?;
            gap = gap.max(r.duality_gap());
            bound = bound.max(r.witness_bound_violation());
            moments = moments.max(r.witness_moment_residual());
        }
    }
    Ok(vec![
        at_most("duality", "max |primal - dual|", gap, 1e-7),
        at_most("duality", "max (|g| - 1)+", bound, 1e-8),
        at_most("duality", "max |E[g h_j]|", moments, 1e-7),
    ])
}

/// Decay of the best L1 error and the certificate lower bound
/// `l1 ≥ |E[h_k (F − p)]|³ / ‖F − p‖₄²` at every degree.
pub fn decay(sigma: f64, m_max: usize, grid: &QuadratureGrid) -> Result<Vec<CheckRow>, CliError> {
    let f = SmoothedThreshold::new(0.0, sigma).within("poly-approx")?;
    let mut pts = Vec::new();
    let mut margin = f64::INFINITY;
    for m in 1..=m_max {
        let r = l1_best_approx(&f, m, grid).within("poly-approx")?;
        let cert = hermite_certificate(&f, &r.polynomial, certificate_degree(m), grid).abs();
        let l4 = grid.expect(&|x: f64| (f.eval(x) - r.polynomial.eval(x)).powi(4)).powf(0.25);
        margin = margin.min(r.l1_error - cert.powi(3) / (l4 * l4));
        pts.push((m as f64, r.l1_error.log2()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    Ok(vec![
        at_most("decay", "log2 slope of l1 vs m", slope, -f64::MIN_POSITIVE),
        at_least("decay", "min (l1 - cert^3/l4^2)", margin, -1e-12),
    ])
}

/// `[l1(σ_small, m)/l1(σ_small, 0)] / [l1(σ_large, m)/l1(σ_large, 0)]`.
pub fn plateau(small: f64, large: f64, m: usize, grid: &QuadratureGrid) -> Result<Vec<CheckRow>, CliError> {
    let ratio = |sigma: f64| -> Result<f64, CliError> {
        let f = SmoothedThreshold::new(0.0, sigma).within("poly-approx")?;
        let hi = l1_best_approx(&f, m, grid).within("poly-approx")?.l1_error;
        let lo = l1_best_approx(&f, 0, grid).within("poly-approx")?.l1_error;
        Ok(hi / lo)
    };
    let r = ratio(small)? / ratio(large)?;
    Ok(vec![at_least("plateau", "retained-error ratio small/large sigma", r, 2.0)])
}

pub fn sampler(h: &HardCheckConfig, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let r = hard_check::check(h, seed)?;
    let slack = hard_check::SLACK_SE * (r.fractional_mass.fraction * (1.0 - r.fractional_mass.fraction)
        / r.draws as f64)
        .sqrt();
    Ok(vec![
        at_most("sampler", "max |moment z|", r.max_abs_moment_z, hard_check::MOMENT_Z),
        at_most("sampler", "max density-ratio excess z", r.density_ratio.max_excess_z, hard_check::SLACK_SE),
        at_least("sampler", "fraction in S", r.fractional_mass.fraction, r.fractional_mass.bound - slack),
    ])
}

pub fn threshold_gap(g: &GapConfig, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let r = gap::measure(g, seed)?;
    Ok(vec![at_least("threshold-gap", "gaussian gap / hard gap", r.ratio, 2.0)])
}

/// The learner pincer on witness labels. Low-degree runs must stay above
/// `OPT + l1/4 − slack_se·√(1/(4 n_test))`, high-degree runs below
/// `OPT + 0.05`.
pub fn learner(l: &LearnConfig, grid_nodes: usize, seed: u64, slack_se: f64) -> Result<Vec<CheckRow>, CliError> {
    let s = learn::learn(l, grid_nodes, seed)?;
    let l1 = s.witness_l1.unwrap_or(0.0);
    let slack = slack_se * (0.25 / l.n_test as f64).sqrt();
    let mut rows = Vec::new();
    for r in &s.rows {
        let name = format!("test error, m={} {:?}, seed {}", r.degree_requested, r.policy, r.seed);
        rows.push(match r.policy {
            PolicyKind::Full => at_least("learner", &name, r.test_error, s.opt_sigma + l1 / 4.0 - slack),
            PolicyKind::Known => at_most("learner", &name, r.test_error, s.opt_sigma + 0.05),
        });
    }
    Ok(rows)
}

pub fn distinguisher(c: &DistinguishConfig, grid_nodes: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let r = distinguish::experiment(c, grid_nodes, seed)?;
    Ok(vec![
        at_most("distinguisher", "max battery gap", r.max_gap, 5e-3),
        at_most("distinguisher", "max unshifted battery gap", r.max_exact_gap, 5e-3),
        at_least("distinguisher", "threshold-query gap", r.threshold_gap, r.threshold_bound - 5e-3),
    ])
}

/// Moment inequalities for random bivariate polynomials of degree
/// `1..=6`, Hermite orthonormality and OU self-adjointness.
pub fn analytic(polys_per_degree: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let g = QuadratureGrid::gauss_hermite(80).within("gaussian-analysis")?;
    let mut rng = stream(seed, 0xa5);
    let (mut hc, mut l1l2) = (0.0_f64, 0.0_f64);
    for d in 1..=6 {
        for _ in 0..polys_per_degree {
            let p = BivariateHermite::random(d, &mut rng);
            let [l1, l2, l4] = p.norms(&g);
            hc = hc.max(l4 / (3f64.powf(d as f64 / 2.0) * l2));
            l1l2 = l1l2.max(l2 / (2f64.powf(d as f64 / 2.0) * l1));
        }
    }
    let big = QuadratureGrid::gauss_hermite(200).within("gaussian-analysis")?;
    let ortho = orthonormality_error(40, &big);
    let mid = QuadratureGrid::gauss_hermite(120).within("gaussian-analysis")?;
    let f = SmoothedThreshold::new(0.3, 0.5).within("gaussian-analysis")?;
    let h = |x: f64| (0.7 * x).cos() + 0.1 * x;
    let adj = [0.2, 0.6, 0.95].iter().fold(0.0_f64, |m, rho| m.max(ou_adjoint_gap(&f, &h, *rho, &mid)));
    Ok(vec![
        at_most("analytic", "max |p|_4 / (3^(d/2) |p|_2)", hc, 1.0),
        at_most("analytic", "max |p|_2 / (2^(d/2) |p|_1)", l1l2, 1.0),
        at_most("analytic", "hermite orthonormality error to degree 40", ortho, 1e-8),
        at_most("analytic", "OU self-adjointness gap", adj, 1e-8),
    ])
}
