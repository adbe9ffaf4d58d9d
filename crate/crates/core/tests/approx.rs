use smoothsq_core::approx::{
    certificate_degree, degree_sweep, hermite_certificate, l1_best_approx, l2_truncate, Parity,
    RefineOptions,
};
use smoothsq_core::gaussian::{
    hermite_eval, normal_pdf, sign_hermite_coeff, smoothed_sign_expansion, HermiteExpansion,
    QuadratureGrid, Sign, SmoothedThreshold,
};

fn grid() -> QuadratureGrid {
    QuadratureGrid::gauss_hermite(200).unwrap()
}

/// Trapezoid rule for `∫ f φ` on a uniform grid over [-12, 12].
fn dense_expect(f: impl Fn(f64) -> f64) -> f64 {
    let n = 400_000;
    let h = 24.0 / n as f64;
    (0..=n)
        .map(|i| {
            let x = -12.0 + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            w * f(x) * normal_pdf(x)
        })
        .sum::<f64>()
        * h
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let n = 20_000;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h)).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..120 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[test]
fn sign_with_constants() {
    let res = l1_best_approx(&Sign, 0, &grid()).unwrap();
    assert!((res.l1_error - 1.0).abs() < 1e-12);
    assert_eq!(res.parity, Parity::Odd);
    assert_eq!(res.polynomial.coeffs(), &[0.0]);
    assert!((res.dual_objective - 1.0).abs() < 1e-9);
}

#[test]
fn polynomials_are_reproduced() {
    let target = HermiteExpansion::new(vec![0.3, -1.0, 0.0, 0.25, 0.1]);
    let res = l1_best_approx(&target, 4, &grid()).unwrap();
    assert!(res.l1_error <= 1e-9, "{}", res.l1_error);
    for (a, b) in res.polynomial.coeffs().iter().zip(target.coeffs()) {
        assert!((a - b).abs() < 1e-8);
    }
    let mono = res.monomial;
    for x in [-2.0, 0.5, 1.7] {
        let v: f64 = mono.iter().enumerate().map(|(k, c)| c * f64::powi(x, k as i32)).sum();
        assert!((v - target.eval(x)).abs() < 1e-8);
    }
}

#[test]
fn affine_fit_matches_brute_force_search() {
    let g = grid();
    let f = SmoothedThreshold::new(0.0, 0.5).unwrap();
    let res = l1_best_approx(&f, 1, &g).unwrap();
    let cost = |a: f64, b: f64| {
        g.nodes()
            .iter()
            .zip(g.weights())
            .map(|(x, w)| w * (f.eval(*x) - a - b * x).abs())
            .sum::<f64>()
    };
    let (_, best) = golden_min(|a| golden_min(|b| cost(a, b), -3.0, 3.0).1, -2.0, 2.0);
    assert!((res.l1_error - best).abs() < 1e-5, "{} vs {best}", res.l1_error);
}

#[test]
fn witness_satisfies_the_three_conditions() {
    let g = grid();
    for sigma in [0.15, 0.5, 1.0] {
        let f = SmoothedThreshold::new(0.0, sigma).unwrap();
        for m in [0, 3, 6, 9, 14] {
            let res = l1_best_approx(&f, m, &g).unwrap();
            assert!(res.witness_bound_violation() <= 1e-8);
            assert!(res.witness_moment_residual() <= 1e-7, "σ={sigma} m={m}");
            assert!(res.duality_gap() <= 1e-7, "σ={sigma} m={m}: {}", res.duality_gap());
            assert!(res.dual_objective >= 0.0);
        }
    }
    let shifted = SmoothedThreshold::new(0.4, 0.3).unwrap();
    let res = l1_best_approx(&shifted, 5, &g).unwrap();
    assert_eq!(res.parity, Parity::Mixed);
    assert!(res.duality_gap() <= 1e-7 && res.witness_moment_residual() <= 1e-7);
}

#[test]
fn grid_capacity_is_enforced() {
    let small = QuadratureGrid::gauss_hermite(10).unwrap();
    assert!(l1_best_approx(&Sign, 9, &small).is_err());
}

#[test]
fn even_degrees_do_not_help_sign() {
    let curve = degree_sweep(&Sign, "sign", 0.0, 12, &grid()).unwrap();
    for m in (2..=12).step_by(2) {
        let (a, b) = (curve.l1_at(m).unwrap(), curve.l1_at(m - 1).unwrap());
        assert!((a - b).abs() < 1e-9, "m={m}: {a} vs {b}");
    }
    assert!(curve.is_nonincreasing(1e-9));
}

#[test]
fn smooth_sign_decays_geometrically() {
    let f = SmoothedThreshold::new(0.0, 1.0).unwrap();
    let curve = degree_sweep(&f, "sign", 1.0, 12, &grid()).unwrap();
    assert!(curve.is_nonincreasing(1e-9));
    assert!(curve.log_slope().unwrap() < -0.3);
    for m in (0..12).step_by(2) {
        assert!(curve.l1_at(m + 1).unwrap() < curve.l1_at(m).unwrap() - 1e-9);
    }
}

#[test]
fn rough_sign_plateaus() {
    let f = SmoothedThreshold::new(0.0, 0.15).unwrap();
    let curve = degree_sweep(&f, "sign", 0.15, 10, &grid()).unwrap();
    let ratio = curve.l1_at(10).unwrap() / curve.l1_at(0).unwrap();
    // Measured: 0.1939 on 200 nodes.
    assert!((ratio - 0.1939).abs() < 2e-3, "{ratio}");
    assert!(curve.is_nonincreasing(1e-9));
}

#[test]
fn truncation_error() {
    let e = smoothed_sign_expansion(1.0, 400);
    let (_, err) = l2_truncate(&e, 11);
    assert!(err * err <= 0.5f64.powi(11));

    let (p, err) = l2_truncate(&e, 3);
    let expected: f64 = (4..=400).map(|k| 0.5f64.powi(k) * sign_hermite_coeff(k as usize).powi(2)).sum();
    assert!((err * err - expected).abs() < 1e-14);
    let f = SmoothedThreshold::new(0.0, 1.0).unwrap();
    let direct = grid().expect(&|x: f64| (f.eval(x) - p.eval(x)).powi(2));
    assert!((direct - expected).abs() < 1e-10, "{direct} vs {expected}");

    let poly = HermiteExpansion::new(vec![1.0, 2.0, 3.0]);
    assert_eq!(l2_truncate(&poly, 2).1, 0.0);
}

#[test]
fn certificate_values() {
    let g = grid();
    let zero = HermiteExpansion::zero(0);
    let c1 = hermite_certificate(&Sign, &zero, 1, &g);
    // The jump of sign limits quadrature accuracy to about 2e-3 here.
    assert!((c1 - (2.0 / std::f64::consts::PI).sqrt()).abs() < 2e-3);

    let sigma = 0.7;
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let a = 1.0 / (1.0f64 + sigma * sigma).sqrt();
    for k in [1usize, 3, 5, 7] {
        let base = hermite_certificate(&f, &zero, k, &g);
        assert!((base - a.powi(k as i32) * sign_hermite_coeff(k)).abs() < 1e-10);
        let p = HermiteExpansion::new((0..k).map(|j| 0.3 * j as f64 - 0.5).collect());
        assert!((hermite_certificate(&f, &p, k, &g) - base).abs() < 1e-8);
    }
    for k in [2usize, 4, 6] {
        assert!(hermite_certificate(&f, &zero, k, &g).abs() < 1e-10);
    }
}

#[test]
fn certificate_bounds_the_error() {
    let g = grid();
    for sigma in [0.3, 1.0] {
        let f = SmoothedThreshold::new(0.0, sigma).unwrap();
        for m in 0..=10 {
            let res = l1_best_approx(&f, m, &g).unwrap();
            let k = certificate_degree(m);
            let cert = hermite_certificate(&f, &res.polynomial, k, &g).abs();
            let resid = |x: f64| f.eval(x) - res.polynomial.eval(x);
            let l2 = g.expect(&|x: f64| resid(x).powi(2)).sqrt();
            let l4 = g.expect(&|x: f64| resid(x).powi(4)).powf(0.25);
            assert!(cert <= l2 + 1e-12);
            // Hölder: ‖r‖₂ ≤ ‖r‖₁^{1/3}‖r‖₄^{2/3}.
            assert!(res.l1_error >= cert.powi(3) / (l4 * l4) - 1e-12, "σ={sigma} m={m}");
        }
    }
}

#[test]
fn refined_witness_matches_moments_on_the_line() {
    let g = grid();
    let f = SmoothedThreshold::new(0.0, 0.5).unwrap();
    let res = l1_best_approx(&f, 8, &g).unwrap();
    let w = res.refine(&f, &RefineOptions::default()).unwrap();
    assert!(w.converged, "{}", w.moment_residual);
    assert!(w.moment_residual < 1e-12);
    assert_eq!(w.pattern.breaks().len(), 9);
    assert!((w.l1_error - w.correlation).abs() < 1e-10);
    assert!((w.l1_error - 0.03705).abs() < 5e-5, "{}", w.l1_error);
    // The grid optimum underestimates the continuous one slightly.
    assert!(w.l1_error >= res.l1_error - 1e-3);

    let oracle = dense_expect(|x| (f.eval(x) - w.polynomial.eval(x)).abs());
    assert!((oracle - w.l1_error).abs() < 1e-6, "{oracle} vs {}", w.l1_error);
    // Simpson on each constant segment, independent of the closed form.
    let mut cuts = vec![-12.0];
    cuts.extend_from_slice(w.pattern.breaks());
    cuts.push(12.0);
    for j in 0..=8 {
        let mo: f64 = cuts
            .windows(2)
            .map(|c| {
                let s = w.pattern.eval(0.5 * (c[0] + c[1]));
                s * simpson(|x| hermite_eval(j, x) * normal_pdf(x), c[0], c[1])
            })
            .sum();
        assert!(mo.abs() < 1e-10, "j={j}: {mo}");
    }
}
