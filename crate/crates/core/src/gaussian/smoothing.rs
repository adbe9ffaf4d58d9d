#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::normal::normal_pdf;
use super::{sign, HermiteExpansion, QuadratureGrid, RealFunction};
use crate::error::{invalid, Result};

/// `T_σ sign(· − t)`: a threshold smoothed by Gaussian input noise.
///
/// For `σ > 0` the value is `2Φ((x − t)/σ) − 1 = erf((x − t)/(σ√2))`;
/// `σ = 0` is the raw sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedThreshold {
    pub t: f64,
    pub sigma: f64,
}

impl SmoothedThreshold {
    pub fn new(t: f64, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() || !t.is_finite() {
            return Err(invalid!("need finite t and sigma >= 0, got t={t}, sigma={sigma}"));
        }
        Ok(Self { t, sigma })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.sigma == 0.0 {
            return sign(x - self.t);
        }
        libm::erf((x - self.t) / (self.sigma * core::f64::consts::SQRT_2))
    }

    /// `E_{x∼N}[T_σ sign(x − t)] = 1 − 2Φ(t/√(1+σ²))`.
    pub fn gaussian_mean(&self) -> f64 {
        1.0 - 2.0 * super::normal_cdf(self.t / (1.0 + self.sigma * self.sigma).sqrt())
    }
}

impl RealFunction for SmoothedThreshold {
    fn eval(&self, x: f64) -> f64 {
        SmoothedThreshold::eval(self, x)
    }

    fn derivative(&self, x: f64) -> f64 {
        if self.sigma == 0.0 {
            return 0.0;
        }
        2.0 * normal_pdf((x - self.t) / self.sigma) / self.sigma
    }
}

/// Noise rate of the Ornstein–Uhlenbeck operator `U_ρ`, `0 ≤ ρ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParameter(f64);

impl OuParameter {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(invalid!("OU parameter must lie in [0, 1], got {rho}"));
        }
        Ok(Self(rho))
    }

    pub fn rho(self) -> f64 {
        self.0
    }
}

/// `a = 1/√(1+σ²)`, the OU parameter with `T_σ f = U_a g` for
/// `g(x) = f(√(1+σ²)·x)`.
pub fn smoothing_correspondence(sigma: f64) -> f64 {
    1.0 / (1.0 + sigma * sigma).sqrt()
}

/// Exact Hermite coefficients of `T_σ sign`: `a^k·c_k` with `c_k` the
/// coefficients of `sign`.
pub fn smoothed_sign_expansion(sigma: f64, m: usize) -> HermiteExpansion {
    let a = smoothing_correspondence(sigma);
    let mut scale = 1.0;
    let coeffs = (0..=m)
        .map(|k| {
            let v = scale * super::sign_hermite_coeff(k);
            scale *= a;
            v
        })
        .collect();
    HermiteExpansion::new(coeffs)
}

/// Quadrature estimates `E[f(G)·h_k(G)]` for `k = 0..=m`.
pub fn hermite_coeffs<F: RealFunction + ?Sized>(
    f: &F,
    m: usize,
    grid: &QuadratureGrid,
) -> HermiteExpansion {
    let mut coeffs = vec![0.0; m + 1];
    let mut basis = Vec::with_capacity(m + 1);
    for (x, w) in grid.nodes().iter().zip(grid.weights()) {
        let fx = w * f.eval(*x);
        if fx == 0.0 {
            continue;
        }
        super::hermite_all(m, *x, &mut basis);
        for (c, h) in coeffs.iter_mut().zip(&basis) {
            *c += fx * h;
        }
    }
    HermiteExpansion::new(coeffs)
}

/// `U_ρ` on coefficients: `coeffs[k] ← ρ^k·coeffs[k]`.
pub fn ou_apply(e: &HermiteExpansion, rho: OuParameter) -> HermiteExpansion {
    let mut scale = 1.0;
    let coeffs = e
        .coeffs()
        .iter()
        .map(|c| {
            let v = c * scale;
            scale *= rho.rho();
            v
        })
        .collect();
    HermiteExpansion::new(coeffs)
}

/// Degree-`m` Hermite expansion of `T_σ f`, via `T_σ f = U_a g` with
/// `g(x) = f(√(1+σ²)·x)`.
pub fn smooth_apply<F: RealFunction + ?Sized>(
    f: &F,
    sigma: f64,
    m: usize,
    grid: &QuadratureGrid,
) -> Result<HermiteExpansion> {
    if !(sigma >= 0.0) {
        return Err(invalid!("sigma must be >= 0, got {sigma}"));
    }
    if sigma == 0.0 {
        return Ok(hermite_coeffs(f, m, grid));
    }
    let stretch = (1.0 + sigma * sigma).sqrt();
    let g = |x: f64| f.eval(stretch * x);
    let expansion = hermite_coeffs(&g, m, grid);
    Ok(ou_apply(&expansion, OuParameter::new(1.0 / stretch)?))
}

/// `(Σ w_i |f(x_i)|^r)^{1/r}`.
pub fn lp_norm<F: RealFunction + ?Sized>(f: &F, r: f64, grid: &QuadratureGrid) -> f64 {
    assert!(r >= 1.0, "L_r norm needs r >= 1");
    let s: f64 = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| w * f.eval(*x).abs().powf(r))
        .sum();
    s.powf(1.0 / r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{hermite_eval, sign_hermite_coeff, Sign};

    const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

    fn grid() -> QuadratureGrid {
        QuadratureGrid::gauss_hermite(200).unwrap()
    }

    #[test]
    fn smoothed_threshold_examples() {
        let st = SmoothedThreshold::new(0.4, 0.7).unwrap();
        assert_eq!(st.eval(0.4), 0.0);
        for u in [0.1, 0.5, 2.0] {
            assert!((st.eval(0.4 + u) + st.eval(0.4 - u)).abs() < 1e-15);
        }
        let unit = SmoothedThreshold::new(0.0, 1.0).unwrap();
        assert!((unit.eval(1.0) - 0.682_689_492_137_085_9).abs() < 1e-15);
        let sharp = SmoothedThreshold::new(0.0, 1e-9).unwrap();
        assert_eq!(sharp.eval(1.0), 1.0);
        assert!(SmoothedThreshold::new(0.0, -1.0).is_err());
    }

    #[test]
    fn smoothed_threshold_monotone_and_bounded() {
        let st = SmoothedThreshold::new(-0.3, 0.25).unwrap();
        let mut prev = -1.0;
        for i in 0..=400 {
            let x = -5.0 + 0.025 * i as f64;
            let v = st.eval(x);
            assert!((-1.0..=1.0).contains(&v));
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn coefficient_examples() {
        let g = grid();
        let h3 = |x: f64| hermite_eval(3, x);
        let e = hermite_coeffs(&h3, 5, &g);
        for (k, c) in e.coeffs().iter().enumerate() {
            let target = if k == 3 { 1.0 } else { 0.0 };
            assert!((c - target).abs() < 1e-10);
        }
        let s = hermite_coeffs(&Sign, 2, &g);
        // the jump at 0 limits a 200-node rule to about 2e-3
        assert!((s.coeffs()[1] - SQRT_2_OVER_PI).abs() < 2e-3, "{}", s.coeffs()[1]);
        assert!(s.coeffs()[2].abs() < 1e-12);
    }

    #[test]
    fn ou_examples() {
        let e = HermiteExpansion::new(vec![0.3, -0.2, 0.5, 0.1]);
        assert_eq!(ou_apply(&e, OuParameter::new(1.0).unwrap()), e);
        let zeroed = ou_apply(&e, OuParameter::new(0.0).unwrap());
        assert_eq!(zeroed.coeffs(), &[0.3, 0.0, 0.0, 0.0]);
        assert!(OuParameter::new(1.5).is_err());

        let sign_exp = HermiteExpansion::new(vec![0.0, SQRT_2_OVER_PI]);
        let a = smoothing_correspondence(1.0);
        let scaled = ou_apply(&sign_exp, OuParameter::new(a).unwrap());
        assert!((scaled.coeffs()[1] - 0.564_189_583_547_756_3).abs() < 1e-15);
    }

    #[test]
    fn smooth_apply_examples() {
        let g = grid();
        let h1 = |x: f64| x;
        let direct = hermite_coeffs(&h1, 4, &g);
        assert_eq!(smooth_apply(&h1, 0.0, 4, &g).unwrap(), direct);
        // T_σ x = x
        let t = smooth_apply(&h1, 1.0, 4, &g).unwrap();
        assert!((t.coeffs()[1] - 1.0).abs() < 1e-12);
        assert!(t.coeffs()[0].abs() < 1e-12 && t.coeffs()[2].abs() < 1e-12);
        // sign is scale invariant, so smoothing is just U_a on its expansion
        let sigma = 0.8;
        let smoothed = smooth_apply(&Sign, sigma, 9, &g).unwrap();
        let base = hermite_coeffs(&Sign, 9, &g);
        let a = smoothing_correspondence(sigma);
        let expected = ou_apply(&base, OuParameter::new(a).unwrap());
        for (x, y) in smoothed.coeffs().iter().zip(expected.coeffs()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn smoothing_matches_closed_form_threshold() {
        // expansion of the closed form vs U_a applied to exact sign coefficients
        let g = grid();
        let sigma = 0.6;
        let a = smoothing_correspondence(sigma);
        let st = SmoothedThreshold::new(0.0, sigma).unwrap();
        let e = hermite_coeffs(&st, 25, &g);
        let closed = smoothed_sign_expansion(sigma, 25);
        for k in 0..=25 {
            let exact = a.powi(k as i32) * sign_hermite_coeff(k);
            assert!((e.coeffs()[k] - exact).abs() < 1e-10, "k={k}");
            assert!((closed.coeffs()[k] - exact).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn norm_examples() {
        let g = grid();
        assert!((lp_norm(&|x: f64| x, 2.0, &g) - 1.0).abs() < 1e-12);
        assert!((lp_norm(&Sign, 1.0, &g) - 1.0).abs() < 1e-12);
        let abs_mean = lp_norm(&|x: f64| x, 1.0, &g);
        assert!((abs_mean - SQRT_2_OVER_PI).abs() < 2e-3, "{abs_mean}");
    }
}
