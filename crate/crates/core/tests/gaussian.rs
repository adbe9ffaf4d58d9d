use smoothsq_core::gaussian::{
    hermite_coeffs, orthonormality_error, ou_adjoint_gap, ou_apply, smooth_apply, smoothing_correspondence, BivariateHermite,
    HermiteExpansion, OuParameter, QuadratureGrid, SmoothedThreshold,
};
use smoothsq_core::rng::stream;

#[test]
fn random_polynomials_obey_the_moment_bounds() {
    let g = QuadratureGrid::gauss_hermite(80).unwrap();
    let mut rng = stream(17, 0);
    for d in 1..=6 {
        let (mut worst_hc, mut worst_l1) = (0.0_f64, 0.0_f64);
        for _ in 0..100 {
            let p = BivariateHermite::random(d, &mut rng);
            let [l1, l2, l4] = p.norms(&g);
            worst_hc = worst_hc.max(l4 / (3f64.powf(d as f64 / 2.0) * l2));
            worst_l1 = worst_l1.max(l2 / (2f64.powf(d as f64 / 2.0) * l1));
        }
        assert!(worst_hc <= 1.0, "d={d}: {worst_hc}");
        assert!(worst_l1 <= 1.0, "d={d}: {worst_l1}");
    }
}

#[test]
fn orthonormal_to_degree_forty() {
    let g = QuadratureGrid::gauss_hermite(200).unwrap();
    assert!(orthonormality_error(40, &g) < 1e-8);
}

#[test]
fn ou_operator_is_self_adjoint() {
    let g = QuadratureGrid::gauss_hermite(120).unwrap();
    let f = SmoothedThreshold::new(0.3, 0.5).unwrap();
    let h = |x: f64| (0.7 * x).cos() + 0.1 * x;
    for rho in [0.2, 0.6, 0.95] {
        assert!(ou_adjoint_gap(&f, &h, rho, &g) < 1e-8, "rho={rho}");
    }
}

#[test]
fn smoothing_is_a_rescaled_ou_step() {
    let g = QuadratureGrid::gauss_hermite(200).unwrap();
    let sigma = 0.8;
    let a = smoothing_correspondence(sigma);
    // T_σ cos = e^{−σ²/2}·cos
    let s = smooth_apply(&|x: f64| x.cos(), sigma, 30, &g).unwrap();
    let damp = (-0.5 * sigma * sigma).exp();
    let direct = hermite_coeffs(&|x: f64| damp * x.cos(), 30, &g);
    for (x, y) in s.coeffs().iter().zip(direct.coeffs()) {
        assert!((x - y).abs() < 1e-12, "{x} vs {y}");
    }
    let e = HermiteExpansion::new(vec![1.0, -2.0, 0.5, 3.0]);
    let u = ou_apply(&e, OuParameter::new(a).unwrap());
    for (k, (x, y)) in u.coeffs().iter().zip(e.coeffs()).enumerate() {
        assert!((x - a.powi(k as i32) * y).abs() < 1e-15);
    }
}
