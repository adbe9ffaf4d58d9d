//! Gaussian-measure analysis: Hermite polynomials, quadrature and the
//! smoothing / Ornstein–Uhlenbeck operators.

mod facts;
mod hermite;
mod legendre;
mod normal;
mod pattern;
mod quadrature;
mod smoothing;

pub use facts::{orthonormality_error, ou_adjoint_gap, ou_eval, BivariateHermite};
pub use hermite::{hermite_all, hermite_eval, sign_hermite_coeff, HermiteExpansion};
pub use legendre::GaussLegendre;
pub use normal::{normal_cdf, normal_interval_mass, normal_pdf, normal_sf};
pub use pattern::SignPattern;
pub use quadrature::{QuadratureGrid, DEFAULT_NODES};
pub use smoothing::{
    hermite_coeffs, lp_norm, ou_apply, smooth_apply, smoothed_sign_expansion,
    smoothing_correspondence, OuParameter, SmoothedThreshold,
};

/// A real function of one real variable.
///
/// Closures implement this automatically. Types with a closed-form
/// derivative override [`RealFunction::derivative`].
pub trait RealFunction {
    fn eval(&self, x: f64) -> f64;

    fn derivative(&self, x: f64) -> f64 {
        let h = 1e-6 * (1.0 + x.abs());
        (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
    }
}

impl<F: Fn(f64) -> f64> RealFunction for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// `sign(x)` with `sign(0) = 0`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The sign function as a [`RealFunction`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Sign;

impl RealFunction for Sign {
    fn eval(&self, x: f64) -> f64 {
        sign(x)
    }

    fn derivative(&self, _x: f64) -> f64 {
        0.0
    }
}
