#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use super::data::Dataset;
use super::features::{FeatureMap, FeaturePolicy};
use crate::error::{invalid, Error, Result};
use crate::linalg::{cholesky, dot, Matrix};
use crate::lp::{self, LinearProgram, Method, RowSense, SolverOptions};
use crate::sq::{Feature, Query};

/// Smallest Cholesky pivot, relative to the largest diagonal entry, that
/// still counts as full rank.
const RANK_TOL: f64 = 1e-10;

/// A polynomial in the span of a feature map.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub map: FeatureMap,
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut phi = Vec::with_capacity(self.coeffs.len());
        let mut scratch = Vec::new();
        self.map.eval_into(x, &mut phi, &mut scratch);
        dot(&phi, &self.coeffs)
    }

    /// Values at every point of `data`.
    pub fn eval_all(&self, data: &Dataset) -> Vec<f64> {
        let mut phi = Vec::with_capacity(self.coeffs.len());
        let mut scratch = Vec::new();
        data.iter()
            .map(|(x, _)| {
                self.map.eval_into(x, &mut phi, &mut scratch);
                dot(&phi, &self.coeffs)
            })
            .collect()
    }
}

/// `x ↦ sign(p(x) − t)`, with `+1` on ties.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub poly: Polynomial,
    pub threshold: f64,
}

impl Hypothesis {
    pub fn predict(&self, x: &[f64]) -> f64 {
        if self.poly.eval(x) >= self.threshold {
            1.0
        } else {
            -1.0
        }
    }

    /// Number of misclassified points of `data`.
    pub fn mistakes(&self, data: &Dataset) -> usize {
        self.poly
            .eval_all(data)
            .iter()
            .zip(data.labels())
            .filter(|(v, y)| (if **v >= self.threshold { 1.0 } else { -1.0 }) != **y)
            .count()
    }

    /// The query `y·h(x)`, whose expectation is `1 − 2·Pr[h(x) ≠ y]`.
    /// Available for hypotheses along a known direction.
    pub fn as_query(&self) -> Option<Query> {
        let FeaturePolicy::KnownDirection(v) = self.poly.map.policy() else {
            return None;
        };
        let feature = Feature::PolynomialThreshold { coeffs: self.poly.coeffs.clone(), t: self.threshold };
        Query::projected(1, v.clone(), feature).ok().map(|q| q.with_name("y*hypothesis"))
    }

    pub fn error(&self, data: &Dataset) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        self.mistakes(data) as f64 / data.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    pub poly: Polynomial,
    /// `(1/n)·Σ |y_i − p(x_i)|` on the training set.
    pub train_l1: f64,
    /// Degree actually used after the rank check.
    pub degree: usize,
    pub lp_iterations: usize,
}

/// Feature matrix with one row per feature and one column per point.
fn feature_rows(map: &FeatureMap, data: &Dataset) -> Matrix {
    let (f, n) = (map.len(), data.len());
    let mut rows = alloc::vec![0.0; f * n];
    let mut phi = Vec::with_capacity(f);
    let mut scratch = Vec::new();
    for (i, (x, _)) in data.iter().enumerate() {
        map.eval_into(x, &mut phi, &mut scratch);
        for (k, v) in phi.iter().enumerate() {
            rows[k * n + i] = *v;
        }
    }
    Matrix::from_rows(f, n, rows)
}

fn has_full_rank(rows: &Matrix) -> bool {
    let f = rows.rows();
    let mut gram = Matrix::zeros(f, f);
    for a in 0..f {
        for b in 0..=a {
            let v = dot(rows.row(a), rows.row(b));
            gram[(a, b)] = v;
            gram[(b, a)] = v;
        }
    }
    let max_diag = (0..f).map(|k| gram[(k, k)]).fold(0.0_f64, f64::max);
    match cholesky(&gram) {
        Some(l) => (0..f).all(|k| l[(k, k)] * l[(k, k)] > RANK_TOL * max_diag),
        None => false,
    }
}

/// Minimizes `(1/n)·Σ |y_i − p(x_i)|` over the span of `map`.
///
/// The LP is solved in witness form, `max Σ y_i g_i` subject to
/// `Σ φ(x_i) g_i = 0` and `|g_i| ≤ 1`, and `p` is read off the row
/// multipliers. If the empirical Gram matrix is singular the degree is
/// lowered until it is not.
pub fn l1_poly_regression(data: &Dataset, map: &FeatureMap) -> Result<RegressionFit> {
    l1_poly_regression_targets(data, data.labels(), map)
}

/// [`l1_poly_regression`] against real targets in place of the labels.
pub fn l1_poly_regression_targets(data: &Dataset, targets: &[f64], map: &FeatureMap) -> Result<RegressionFit> {
    if targets.len() != data.len() || targets.iter().any(|t| !t.is_finite()) {
        return Err(invalid!("need {} finite targets, got {}", data.len(), targets.len()));
    }
    if data.dim() != map.dim() {
        return Err(invalid!("data has dimension {}, features expect {}", data.dim(), map.dim()));
    }
    let n = data.len();
    let mut map = map.clone();
    let rows = loop {
        if n < map.len() {
            return Err(invalid!("{n} points cannot determine {} features", map.len()));
        }
        let rows = feature_rows(&map, data);
        if has_full_rank(&rows) {
            break rows;
        }
        if map.degree() == 0 {
            return Err(Error::Numerical(format!("constant feature is degenerate on {n} points")));
        }
        log::warn!("feature Gram matrix is singular at degree {}, lowering", map.degree());
        map = map.with_degree(map.degree() - 1)?;
    };
    let f = rows.rows();
    let problem = LinearProgram::new(
        targets.iter().map(|y| -y).collect(),
        rows,
        alloc::vec![0.0; f],
        alloc::vec![RowSense::Eq; f],
        alloc::vec![(-1.0, 1.0); n],
    )?;
    let opts = SolverOptions { method: Method::Dual, ..SolverOptions::default() };
    let sol = lp::solve_with(&problem, &opts)?;
    if !sol.is_optimal() {
        return Err(Error::LpFailure(format!(
            "regression at degree {}: {:?} ({})",
            map.degree(),
            sol.status,
            sol.message.as_deref().unwrap_or("no detail")
        )));
    }
    let degree = map.degree();
    let poly = Polynomial { map, coeffs: sol.duals.iter().map(|y| -y).collect() };
    let train_l1 =
        poly.eval_all(data).iter().zip(targets).map(|(p, y)| (y - p).abs()).sum::<f64>() / n as f64;
    log::debug!("regression degree {degree}: train l1 {train_l1:.5}, {} lp iterations", sol.iterations);
    Ok(RegressionFit { poly, train_l1, degree, lp_iterations: sol.iterations })
}

/// The threshold minimizing training error of `sign(p − t)`.
///
/// Candidates are midpoints between consecutive distinct values of `p`
/// plus one point below and one above all of them; ties go to the
/// candidate with the smallest `|t|`.
pub fn best_threshold(poly: Polynomial, data: &Dataset) -> Hypothesis {
    let values = poly.eval_all(data);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|a, b| values[*a].total_cmp(&values[*b]));
    if order.is_empty() {
        return Hypothesis { poly, threshold: 0.0 };
    }
    let labels = data.labels();
    // threshold below everything: all points predicted +1
    let mut mistakes = labels.iter().filter(|y| **y < 0.0).count() as i64;
    let lowest = values[order[0]];
    let mut best = (mistakes, lowest - 1.0);
    let mut i = 0;
    while i < order.len() {
        let v = values[order[i]];
        // move every point with value v to the -1 side
        while i < order.len() && values[order[i]] == v {
            mistakes += if labels[order[i]] > 0.0 { 1 } else { -1 };
            i += 1;
        }
        let t = if i < order.len() { 0.5 * (v + values[order[i]]) } else { v + 1.0 };
        if mistakes < best.0 || (mistakes == best.0 && t.abs() < best.1.abs()) {
            best = (mistakes, t);
        }
    }
    Hypothesis { poly, threshold: best.1 }
}

/// `⌈4·ln(2/ε)/σ²⌉`.
pub fn default_degree(sigma: f64, epsilon: f64) -> usize {
    (4.0 * (2.0 / epsilon).ln() / (sigma * sigma)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub sigma: f64,
    pub epsilon: f64,
    /// Overrides the default degree.
    pub degree: Option<usize>,
    pub policy: FeaturePolicy,
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree.unwrap_or_else(|| default_degree(self.sigma, self.epsilon))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub hypothesis: Hypothesis,
    pub degree_requested: usize,
    pub degree_used: usize,
    pub features: usize,
    pub train_l1: f64,
    pub train_error: f64,
    pub test_error: f64,
    pub opt_sigma: f64,
    pub lp_iterations: usize,
}

impl LearnReport {
    /// `test error − OPT_σ`.
    pub fn gap(&self) -> f64 {
        self.test_error - self.opt_sigma
    }
}

/// Regression, threshold selection on the training set, and evaluation
/// on held-out data against a known `OPT_σ`.
pub fn learn_smoothed(train: &Dataset, test: &Dataset, cfg: &LearnerConfig, opt_sigma: f64) -> Result<LearnReport> {
    cfg.validate()?;
    let degree_requested = cfg.degree();
    let map = FeatureMap::new(cfg.policy.clone(), train.dim(), degree_requested)?;
    let fit = l1_poly_regression(train, &map)?;
    let features = fit.poly.map.len();
    let hypothesis = best_threshold(fit.poly, train);
    let train_error = hypothesis.error(train);
    let test_error = hypothesis.error(test);
    Ok(LearnReport {
        hypothesis,
        degree_requested,
        degree_used: fit.degree,
        features,
        train_l1: fit.train_l1,
        train_error,
        test_error,
        opt_sigma,
        lp_iterations: fit.lp_iterations,
    })
}
