//! Dense linear programming with certified primal/dual solutions.
//!
//! [`solve`] accepts `min cᵀx` subject to rows `aᵢᵀx {≤,=,≥} bᵢ` and
//! variable bounds `l ≤ x ≤ u` (either side may be infinite). Two bounded
//! simplex variants share one basis representation:
//!
//! * the primal method (phase one on artificial variables, Dantzig pricing
//!   with a fallback to Bland's rule under degeneracy), which handles any
//!   problem;
//! * the dual method with a bound-flipping ratio test, used automatically
//!   when every row is an equality and every variable is boxed. Such
//!   problems start dual feasible for free, and the long-step ratio test
//!   handles tens of thousands of columns against a handful of rows.
//!
//! Every optimal solve reports row duals and reduced costs; see
//! [`LpSolution::certify`] for the residual checks.

mod problem;
mod scaling;
mod simplex;

pub use problem::{LinearProgram, RowSense};
pub use simplex::{solve, solve_with, Certificate, LpSolution, LpStatus, Method, SolverOptions};
