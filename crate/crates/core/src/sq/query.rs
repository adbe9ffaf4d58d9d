#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::planted::random_unit_vector;
use crate::error::{invalid, Result};
use crate::gaussian::{hermite_eval, sign, HermiteExpansion, SmoothedThreshold};
use crate::linalg::dot;
use crate::rng::stream;

/// One-dimensional feature `ψ(w·x)` of a query.
#[derive(Clone)]
pub enum Feature {
    Constant,
    /// `scale·h_j(u)`, clamped to `[−1, 1]`.
    Hermite { degree: usize, scale: f64 },
    /// `T_σ sign(u − t)`.
    SmoothedSign { t: f64, sigma: f64 },
    /// `sign(u − t)`.
    Sign { t: f64 },
    /// `sign(p(u) − t)` with `p = Σ c_k h_k` and `+1` on ties: the shape
    /// of a learned hypothesis along one direction.
    PolynomialThreshold { coeffs: Vec<f64>, t: f64 },
}

impl fmt::Debug for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Constant => write!(f, "1"),
            Feature::Hermite { degree, scale } => write!(f, "{scale:.4}*h{degree}"),
            Feature::SmoothedSign { t, sigma } => write!(f, "T[{sigma}]sign(u-{t})"),
            Feature::Sign { t } => write!(f, "sign(u-{t})"),
            Feature::PolynomialThreshold { coeffs, t } => {
                write!(f, "sign(p{}(u)-{t})", coeffs.len().saturating_sub(1))
            }
        }
    }
}

impl Feature {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Feature::Constant => 1.0,
            Feature::Hermite { degree, scale } => (scale * hermite_eval(*degree, u)).clamp(-1.0, 1.0),
            Feature::SmoothedSign { t, sigma } => SmoothedThreshold { t: *t, sigma: *sigma }.eval(u),
            Feature::Sign { t } => sign(u - t),
            Feature::PolynomialThreshold { coeffs, t } => {
                if HermiteExpansion::new(coeffs.clone()).eval(u) >= *t {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Points where the feature jumps, searched on `[−12, 12]`.
    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Feature::SmoothedSign { t, .. } | Feature::Sign { t } => alloc::vec![*t],
            Feature::PolynomialThreshold { coeffs, t } => {
                let p = HermiteExpansion::new(coeffs.clone());
                let g = |u: f64| p.eval(u) - t;
                let mut out = Vec::new();
                let step = 1e-3;
                let mut a = -12.0;
                let mut ga = g(a);
                for i in 1..=24_000 {
                    let b = -12.0 + step * i as f64;
                    let gb = g(b);
                    if (ga < 0.0) != (gb < 0.0) {
                        let (mut lo, mut hi, mut glo) = (a, b, ga);
                        for _ in 0..60 {
                            let mid = 0.5 * (lo + hi);
                            let gm = g(mid);
                            if (gm < 0.0) == (glo < 0.0) {
                                lo = mid;
                                glo = gm;
                            } else {
                                hi = mid;
                            }
                        }
                        out.push(0.5 * (lo + hi));
                    }
                    a = b;
                    ga = gb;
                }
                out
            }
            _ => Vec::new(),
        }
    }
}

type CustomFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// A bounded query `q(x, y)`.
///
/// Grammar queries `y^e·ψ(w·x)` have exact expectations under planted and
/// null distributions; custom queries can only be answered from samples.
#[derive(Clone)]
pub enum Query {
    Projected { label_power: u8, direction: Vec<f64>, feature: Feature, name: String },
    Custom { f: CustomFn, name: String },
}

impl fmt::Debug for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Query {
    /// `y^label_power · ψ(w·x)`; `direction` is normalized.
    pub fn projected(label_power: u8, direction: Vec<f64>, feature: Feature) -> Result<Self> {
        if label_power > 1 {
            return Err(invalid!("label power must be 0 or 1"));
        }
        let norm = dot(&direction, &direction).sqrt();
        if !(norm > 0.0) {
            return Err(invalid!("query direction must be nonzero"));
        }
        let direction: Vec<f64> = direction.iter().map(|v| v / norm).collect();
        let name = format!("{}{:?}", if label_power == 1 { "y*" } else { "" }, feature);
        Ok(Query::Projected { label_power, direction, feature, name })
    }

    pub fn custom<F: Fn(&[f64], f64) -> f64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        Query::Custom { f: Arc::new(f), name: String::from(name) }
    }

    pub fn with_name(mut self, new_name: &str) -> Self {
        match &mut self {
            Query::Projected { name, .. } | Query::Custom { name, .. } => *name = String::from(new_name),
        }
        self
    }

    pub fn name(&self) -> &str {
        match self {
            Query::Projected { name, .. } | Query::Custom { name, .. } => name,
        }
    }

    /// `q(x, y)` clamped to `[−1, 1]`.
    pub fn eval(&self, x: &[f64], y: f64) -> f64 {
        let v = match self {
            Query::Projected { label_power, direction, feature, .. } => {
                let u = feature.eval(dot(direction, x));
                if *label_power == 1 {
                    y * u
                } else {
                    u
                }
            }
            Query::Custom { f, .. } => f(x, y),
        };
        v.clamp(-1.0, 1.0)
    }
}

/// `y·c_j·h_j(w·x)` for `j = 0..=m` and `directions` random unit vectors
/// `w`, with `c_j = 1/max_{|u| ≤ 4}|h_j(u)|` so that clamping only acts
/// beyond four standard deviations.
///
/// Directions within angle `arccos(0.99)` of `avoid` are redrawn.
pub fn low_degree_battery(d: usize, m: usize, directions: usize, avoid: &[f64], seed: u64) -> Vec<Query> {
    let mut rng = stream(seed, 0xba77e27);
    let mut out = Vec::new();
    let scales: Vec<f64> = (0..=m)
        .map(|j| {
            let peak = (0..=800).map(|i| hermite_eval(j, -4.0 + 0.01 * i as f64).abs()).fold(0.0, f64::max);
            1.0 / peak
        })
        .collect();
    let mut found = 0;
    while found < directions {
        let w = random_unit_vector(d, &mut rng);
        if !avoid.is_empty() && dot(&w, avoid).abs() > 0.99 {
            continue;
        }
        for (j, &scale) in scales.iter().enumerate() {
            let q = Query::projected(1, w.clone(), Feature::Hermite { degree: j, scale })
                .expect("unit direction")
                .with_name(&format!("dir{found}:y*h{j}"));
            out.push(q);
        }
        found += 1;
    }
    out
}
