//! Numerical core for smoothed agnostic learning of halfspaces under the
//! Gaussian distribution.
//!
//! The crate is `no_std` (it only needs `alloc`). It contains:
//!
//! * [`gaussian`]: normalized probabilist's Hermite polynomials, Gauss–Hermite
//!   quadrature, the smoothing operator `T_σ` and the Ornstein–Uhlenbeck
//!   semigroup `U_ρ`.
//! * [`lp`]: a dense bounded-variable simplex solver (primal and dual) that
//!   returns certified primal/dual pairs.
//! * [`approx`]: best L1 / L2 polynomial approximation of smoothed functions
//!   together with the moment-matching dual witness.
//! * [`hard`]: the moment-matching hard distribution sampler and the labeled
//!   distribution built from a witness.
//! * [`sq`]: planted hidden-direction distributions and a simulated `STAT(τ)`
//!   oracle.
//! * [`learner`]: the L1 polynomial regression learner.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod error;
pub mod gaussian;
pub mod hard;
pub mod learner;
pub mod linalg;
pub mod lp;
pub mod rng;
pub mod sq;
pub mod stats;

pub use error::{Error, Result};
