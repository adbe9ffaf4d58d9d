use alloc::vec::Vec;

use crate::linalg::Matrix;

/// Power-of-two row and column factors from one max-abs equilibration
/// pass (rows first, then columns). Powers of two keep scaling exact.
#[derive(Debug, Clone)]
pub(crate) struct Scaling {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

impl Scaling {
    pub fn identity(rows: usize, cols: usize) -> Self {
        Self { row: alloc::vec![1.0; rows], col: alloc::vec![1.0; cols] }
    }

    pub fn equilibrate(a: &Matrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let row: Vec<f64> = (0..m)
            .map(|i| pow2_reciprocal(a.row(i).iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))))
            .collect();
        let mut colmax = alloc::vec![0.0_f64; n];
        for (i, r) in row.iter().enumerate() {
            for (c, v) in colmax.iter_mut().zip(a.row(i)) {
                *c = c.max((v * r).abs());
            }
        }
        let col = colmax.into_iter().map(pow2_reciprocal).collect();
        Self { row, col }
    }
}

/// Nearest power of two to `1/v`, clamped to `2^±400`; 1 for zero input.
fn pow2_reciprocal(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return 1.0;
    }
    let e = libm::round(-libm::log2(v)).clamp(-400.0, 400.0);
    libm::exp2(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_are_powers_of_two() {
        let a = Matrix::from_rows(2, 2, alloc::vec![1000.0, 0.5, 0.0, 3.0]);
        let s = Scaling::equilibrate(&a);
        for f in s.row.iter().chain(&s.col) {
            assert_eq!(libm::log2(*f).fract(), 0.0);
        }
        assert_eq!(s.row[0], 1.0 / 1024.0);
    }
}
