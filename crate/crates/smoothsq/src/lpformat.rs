//! Plain-text dump of a linear program, in the style of the CPLEX LP
//! format, for inspection with external solvers.

use std::fmt::Write;

use smoothsq_core::lp::{LinearProgram, RowSense};

fn term(out: &mut String, first: &mut bool, coef: f64, var: usize) {
    if coef == 0.0 {
        return;
    }
    let sign = if coef < 0.0 { " -" } else if *first { "" } else { " +" };
    let _ = write!(out, "{sign} {:e} x{var}", coef.abs());
    *first = false;
}

pub fn write_lp(lp: &LinearProgram) -> String {
    let mut out = String::from("\\ smoothsq linear program\nMinimize\n obj:");
    let mut first = true;
    for (j, c) in lp.objective().iter().enumerate() {
        term(&mut out, &mut first, *c, j);
    }
    if first {
        out.push_str(" 0 x0");
    }
    out.push_str("\nSubject To\n");
    for i in 0..lp.num_rows() {
        let _ = write!(out, " r{i}:");
        let mut first = true;
        for (j, a) in lp.matrix().row(i).iter().enumerate() {
            term(&mut out, &mut first, *a, j);
        }
        if first {
            out.push_str(" 0 x0");
        }
        let sense = match lp.senses()[i] {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        };
        let _ = writeln!(out, " {sense} {:e}", lp.rhs()[i]);
    }
    out.push_str("Bounds\n");
    for (j, (lo, hi)) in lp.bounds().iter().enumerate() {
        let bound = |v: f64| {
            if v == f64::INFINITY {
                "+inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v:e}")
            }
        };
        let _ = writeln!(out, " {} <= x{j} <= {}", bound(*lo), bound(*hi));
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use smoothsq_core::linalg::Matrix;

    #[test]
    fn small_program() {
        let lp = LinearProgram::new(
            vec![1.0, -2.0],
            Matrix::from_rows(1, 2, vec![1.0, 1.0]),
            vec![1.0],
            vec![RowSense::Le],
            vec![(0.0, f64::INFINITY), (-1.0, 1.0)],
        )
        .unwrap();
        let text = write_lp(&lp);
        assert!(text.contains("obj: 1e0 x0 - 2e0 x1"), "{text}");
        assert!(text.contains("r0: 1e0 x0 + 1e0 x1 <= 1e0"), "{text}");
        assert!(text.contains("0e0 <= x0 <= +inf"), "{text}");
    }
}
