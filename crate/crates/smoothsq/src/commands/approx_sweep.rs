//! L1 / L2 degree curves of smoothed thresholds.

use rayon::prelude::*;
use serde::Serialize;
use smoothsq_core::approx::{approximation_lp, sweep_point, DegreeCurve, WEIGHT_FLOOR};
use smoothsq_core::gaussian::{smoothing_correspondence, QuadratureGrid, SmoothedThreshold};

use super::grid;
use crate::artifacts::RunOutput;
use crate::config::Config;
use crate::error::{CliError, Context};
use crate::lpformat::write_lp;

pub const CSV: &str = "degree_curve.csv";
pub const JSON: &str = "approx_sweep.json";

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub sigma: f64,
    pub function: String,
    pub m: usize,
    pub l1_error: Option<f64>,
    pub l2_error: f64,
    /// `a^m` with `a = 1/√(1+σ²)`.
    pub l2_bound: f64,
    pub certificate_k: usize,
    pub certificate_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSummary {
    pub sigma: f64,
    pub nonincreasing: bool,
    /// Least-squares slope of `log₂ l1_error` against `m`.
    pub log2_slope: Option<f64>,
    pub l1_first: Option<f64>,
    pub l1_last: Option<f64>,
    pub failed_degrees: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxSweepReport {
    pub seed: u64,
    pub t: f64,
    pub m_max: usize,
    pub grid_nodes: usize,
    pub curves: Vec<CurveSummary>,
}

impl ApproxSweepReport {
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .curves
            .iter()
            .map(|c| {
                format!(
                    "sigma={}: l1 {:.3e} -> {:.3e}, nonincreasing={}",
                    c.sigma,
                    c.l1_first.unwrap_or(f64::NAN),
                    c.l1_last.unwrap_or(f64::NAN),
                    c.nonincreasing
                )
            })
            .collect();
        parts.join("; ")
    }
}

/// Degree curve of `T_σ sign(x − t)` for `m = 0..=m_max`, degrees solved
/// concurrently.
pub fn curve(sigma: f64, t: f64, m_max: usize, grid: &QuadratureGrid) -> Result<DegreeCurve, CliError> {
    let f = SmoothedThreshold::new(t, sigma).within("poly-approx")?;
    if grid.exact_degree() < 2 * m_max + 2 {
        return Err(CliError::Config(format!("m_max = {m_max} exceeds the capacity of a {}-node grid", grid.len())));
    }
    let points = (0..=m_max).into_par_iter().map(|m| sweep_point(&f, m, grid)).collect();
    Ok(DegreeCurve { sigma, function: "smoothed_sign".into(), points })
}

fn gnuplot(sigmas: &[f64]) -> String {
    let list: Vec<String> = sigmas.iter().map(|s| s.to_string()).collect();
    format!(
        "set datafile separator ','\nset logscale y\nset xlabel 'degree m'\nset ylabel 'L1 error'\n\
         plot for [s in \"{}\"] '{CSV}' every ::1 using ($1 == s ? $3 : 1/0):4 with linespoints title 'sigma='.s\n",
        list.join(" ")
    )
}

pub fn run(cfg: &Config, out: &mut RunOutput) -> Result<ApproxSweepReport, CliError> {
    let a = &cfg.approx_sweep;
    let g = grid(cfg.grid_nodes)?;
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &sigma in &a.sigmas {
        let c = curve(sigma, a.t, a.m_max, &g)?;
        let rate = smoothing_correspondence(sigma);
        for p in &c.points {
            rows.push(CurveRow {
                sigma,
                function: c.function.clone(),
                m: p.m,
                l1_error: p.l1_error,
                l2_error: p.l2_error,
                l2_bound: rate.powi(p.m as i32),
                certificate_k: p.certificate_k,
                certificate_value: p.certificate_value,
            });
        }
        curves.push(CurveSummary {
            sigma,
            nonincreasing: c.is_nonincreasing(1e-9),
            log2_slope: c.log_slope().map(|s| s / std::f64::consts::LN_2),
            l1_first: c.points.first().and_then(|p| p.l1_error),
            l1_last: c.points.last().and_then(|p| p.l1_error),
            failed_degrees: c.points.iter().filter(|p| p.l1_error.is_none()).map(|p| p.m).collect(),
        });
        if let Some(m) = a.dump_lp {
            let pruned = g.pruned(WEIGHT_FLOOR);
            let f = SmoothedThreshold::new(a.t, sigma).within("poly-approx")?;
            let lp = approximation_lp(&pruned.tabulate(&f), m, &pruned).within("lp-core")?;
            out.write(&format!("lp_sigma{sigma}_m{m}.lp"), write_lp(&lp).as_bytes())?;
        }
    }
    out.write_csv(CSV, &rows)?;
    out.write("degree_curve.gp", gnuplot(&a.sigmas).as_bytes())?;
    let report = ApproxSweepReport { seed: cfg.seed, t: a.t, m_max: a.m_max, grid_nodes: cfg.grid_nodes, curves };
    out.write_json(JSON, &report)?;
    Ok(report)
}
