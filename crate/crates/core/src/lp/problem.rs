use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

impl RowSense {
    pub fn symbol(self) -> &'static str {
        match self {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        }
    }
}

/// `min cᵀx` s.t. `A x {≤,=,≥} b`, `l ≤ x ≤ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    matrix: Matrix,
    rhs: Vec<f64>,
    senses: Vec<RowSense>,
    bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<f64>,
        matrix: Matrix,
        rhs: Vec<f64>,
        senses: Vec<RowSense>,
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(invalid!("a linear program needs at least one variable"));
        }
        if matrix.cols() != n || bounds.len() != n {
            return Err(invalid!(
                "objective has {n} entries but matrix has {} columns and {} bounds",
                matrix.cols(),
                bounds.len()
            ));
        }
        if matrix.rows() != rhs.len() || rhs.len() != senses.len() {
            return Err(invalid!(
                "matrix has {} rows, rhs {} entries, senses {}",
                matrix.rows(),
                rhs.len(),
                senses.len()
            ));
        }
        if objective.iter().chain(&rhs).chain(matrix.as_slice()).any(|v| !v.is_finite()) {
            return Err(invalid!("objective, matrix and rhs must be finite"));
        }
        for (j, (l, u)) in bounds.iter().enumerate() {
            if l.is_nan() || u.is_nan() || *l > *u || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                return Err(invalid!("variable {j} has invalid bounds [{l}, {u}]"));
            }
        }
        Ok(Self { objective, matrix, rhs, senses, bounds })
    }

    /// Convenience constructor with every variable in `[0, ∞)`.
    pub fn nonnegative(
        objective: Vec<f64>,
        matrix: Matrix,
        rhs: Vec<f64>,
        senses: Vec<RowSense>,
    ) -> Result<Self> {
        let bounds = alloc::vec![(0.0, f64::INFINITY); objective.len()];
        Self::new(objective, matrix, rhs, senses, bounds)
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn senses(&self) -> &[RowSense] {
        &self.senses
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// True when every row is an equality and every variable has two
    /// finite bounds; such problems are solved by the dual method.
    pub fn is_boxed_equality_form(&self) -> bool {
        self.senses.iter().all(|s| *s == RowSense::Eq)
            && self.bounds.iter().all(|(l, u)| l.is_finite() && u.is_finite())
    }
}
