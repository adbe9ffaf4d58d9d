use smoothsq_core::approx::l1_best_approx;
use smoothsq_core::gaussian::{
    hermite_eval, smoothed_sign_expansion, smoothing_correspondence, QuadratureGrid, SignPattern,
    SmoothedThreshold,
};
use smoothsq_core::hard::{build_labeled, default_thresholds, opt_sigma, LabelProfile, LabeledHardDistribution, WitnessForm};
use smoothsq_core::learner::{
    best_threshold, default_degree, feature_count, l1_poly_regression, l1_poly_regression_targets,
    learn_smoothed, Dataset, FeatureMap, FeaturePolicy, LearnerConfig, Polynomial,
};
use smoothsq_core::rng::stream;
use smoothsq_core::sq::{plant, PlantedDistribution};
use smoothsq_core::stats::MeanAccumulator;

fn halfspace(d: usize, sigma: f64, seed: u64) -> PlantedDistribution {
    let base = LabeledHardDistribution::new(LabelProfile::Pattern(SignPattern::new(vec![0.0], -1.0)), sigma).unwrap();
    plant(base, d, seed).unwrap()
}

fn coins(d: usize) -> PlantedDistribution {
    let base = LabeledHardDistribution::new(LabelProfile::Constant(0.0), 0.5).unwrap();
    plant(base, d, 0).unwrap()
}

fn known(p: &PlantedDistribution) -> FeaturePolicy {
    FeaturePolicy::KnownDirection(p.direction().to_vec())
}

#[test]
fn realizable_targets_are_recovered() {
    let p = coins(2);
    let data = Dataset::sample(&p, 3000, &mut stream(1, 0), "coins");
    let map = FeatureMap::new(FeaturePolicy::FullHermite, 2, 3).unwrap();
    // q = 0.3·h_1(x_0) − 0.2·h_2(x_1) + 0.1·h_1(x_0)h_1(x_1), clamped far out
    let q = |x: &[f64]| 0.3 * x[0] - 0.2 * hermite_eval(2, x[1]) + 0.1 * x[0] * x[1];
    let keep: Vec<usize> = (0..data.len()).filter(|i| q(data.point(*i)).abs() <= 1.0).collect();
    let mut points = Vec::new();
    for i in &keep {
        points.extend_from_slice(data.point(*i));
    }
    let sub = Dataset::new(2, points, vec![1.0; keep.len()], "realizable").unwrap();
    let targets: Vec<f64> = (0..sub.len()).map(|i| q(sub.point(i))).collect();
    let fit = l1_poly_regression_targets(&sub, &targets, &map).unwrap();
    assert!(fit.train_l1 <= 1e-8, "{}", fit.train_l1);
    for i in 0..sub.len() {
        assert!((fit.poly.eval(sub.point(i)) - targets[i]).abs() < 1e-7);
    }
}

#[test]
fn coin_labels_give_objective_near_one() {
    let p = coins(3);
    let n = 20_000;
    let data = Dataset::sample(&p, n, &mut stream(2, 0), "coins");
    let map = FeatureMap::new(FeaturePolicy::FullHermite, 3, 2).unwrap();
    let fit = l1_poly_regression(&data, &map).unwrap();
    assert!(fit.train_l1 <= 1.0 + 1e-12 && fit.train_l1 > 0.98, "{}", fit.train_l1);
    // The minimizer is not unique (a count imbalance already moves the best
    // constant to ±1), so check the held-out objective rather than p itself:
    // with independent coins E|y − p| = E[max(1, |p|)] ≥ 1.
    let test = Dataset::sample(&p, n, &mut stream(2, 1), "coins");
    let held_out = fit.poly.eval_all(&test).iter().zip(test.labels()).map(|(v, y)| (y - v).abs()).sum::<f64>()
        / n as f64;
    assert!(held_out > 0.98, "{held_out}");
}

#[test]
fn witness_labels_leave_the_regression_objective_at_one() {
    // y = g(x) with g orthogonal to degree <= 8, so E|y - p| = 1 - E[g p] = 1
    // for every |p| <= 1 of degree <= 8; the empirical value can only sit
    // below that by overfitting.
    let sigma = 0.5;
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let grid = QuadratureGrid::gauss_hermite(200).unwrap();
    let res = l1_best_approx(&f, 8, &grid).unwrap();
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).unwrap();
    let p = plant(dist, 1, 4).unwrap();
    let n = 20_000;
    let train = Dataset::sample(&p, n, &mut stream(3, 0), "witness");
    let test = Dataset::sample(&p, n, &mut stream(3, 1), "witness");
    for m in [2, 4, 8] {
        let map = FeatureMap::new(known(&p), 1, m).unwrap();
        let fit = l1_poly_regression(&train, &map).unwrap();
        let overfit = 3.0 * ((m + 1) as f64 / n as f64).sqrt();
        assert!(fit.train_l1 <= 1.0 + 1e-12 && fit.train_l1 >= 1.0 - overfit, "m={m}: {}", fit.train_l1);
        let test_l1 = fit.poly.eval_all(&test).iter().zip(test.labels()).map(|(v, y)| (y - v).abs()).sum::<f64>()
            / n as f64;
        assert!(test_l1 >= 1.0 - 0.02, "m={m}: held-out objective {test_l1}");
    }
}

#[test]
fn threshold_examples() {
    let p = coins(1);
    let data = Dataset::sample(&p, 400, &mut stream(5, 0), "coins");
    let map = FeatureMap::new(FeaturePolicy::FullHermite, 1, 1).unwrap();
    let identity = Polynomial { map: map.clone(), coeffs: vec![0.0, 1.0] };

    let separated: Vec<f64> = (0..data.len()).map(|i| if data.point(i)[0] > 0.2 { 1.0 } else { -1.0 }).collect();
    let sep = Dataset::new(1, (0..data.len()).map(|i| data.point(i)[0]).collect(), separated, "sep").unwrap();
    let h = best_threshold(identity.clone(), &sep);
    assert_eq!(h.mistakes(&sep), 0);

    let plus = Dataset::new(1, (0..data.len()).map(|i| data.point(i)[0]).collect(), vec![1.0; data.len()], "plus")
        .unwrap();
    let h = best_threshold(identity.clone(), &plus);
    let min = (0..plus.len()).map(|i| plus.point(i)[0]).fold(f64::INFINITY, f64::min);
    assert!(h.threshold < min);
    assert_eq!(h.mistakes(&plus), 0);

    // a constant polynomial: every threshold below the constant is optimal
    // when labels are all +1, and the smallest |t| wins
    let constant = Polynomial { map, coeffs: vec![3.0, 0.0] };
    let h = best_threshold(constant, &plus);
    assert_eq!(h.mistakes(&plus), 0);
    assert!(h.threshold < 3.0);
}

#[test]
fn feature_limit_is_enforced() {
    assert_eq!(feature_count(4, 48), 270_725);
    assert!(FeatureMap::new(FeaturePolicy::FullHermite, 4, 48).is_err());
    assert!(FeatureMap::new(FeaturePolicy::KnownDirection(vec![0.6, 0.8]), 2, 48).is_ok());
    assert!(FeatureMap::new(FeaturePolicy::KnownDirection(vec![1.0, 1.0]), 2, 3).is_err());
}

#[test]
fn degree_sufficiency_by_quadrature() {
    // ‖T_σ sign − trunc_m‖_1 ≤ ‖·‖_2 ≤ a^m ≤ ε/2 once a^{2m} ≤ (ε/2)²
    let grid = QuadratureGrid::gauss_hermite(300).unwrap();
    for sigma in [0.5, 1.0, 2.0] {
        let a = smoothing_correspondence(sigma);
        let f = SmoothedThreshold::new(0.0, sigma).unwrap();
        for eps in [0.2, 0.1, 0.05] {
            let m = ((eps / 2.0_f64).ln() / a.ln()).ceil() as usize;
            assert!(a.powi(2 * m as i32) <= (eps / 2.0) * (eps / 2.0) + 1e-15);
            let trunc = smoothed_sign_expansion(sigma, m);
            let l1: f64 = grid
                .nodes()
                .iter()
                .zip(grid.weights())
                .map(|(x, w)| w * (f.eval(*x) - trunc.eval(*x)).abs())
                .sum();
            assert!(l1 <= eps / 2.0, "sigma={sigma} eps={eps} m={m}: {l1}");
        }
    }
}

#[test]
fn halfspace_labels_are_learned() {
    let (sigma, eps, d) = (0.5, 0.1, 4);
    let p = halfspace(d, sigma, 6);
    let m = default_degree(sigma, eps);
    assert_eq!(m, 48);
    // OPT_σ for sign(v·x) itself is E[Φ(−|G|/σ)] = arctan(σ)/π
    let opt = opt_sigma(p.base(), &default_thresholds());
    assert!((opt.value - sigma.atan() / std::f64::consts::PI).abs() < 1e-9, "{opt:?}");
    let train = Dataset::sample(&p, 20_000, &mut stream(6, 0), "halfspace");
    let test = Dataset::sample(&p, 50_000, &mut stream(6, 1), "halfspace");
    let cfg = LearnerConfig { sigma, epsilon: eps, degree: None, policy: known(&p) };
    let report = learn_smoothed(&train, &test, &cfg, opt.value).unwrap();
    assert!(report.test_error <= opt.value + 0.1, "{report:?}");
    assert!(report.gap() < 0.0);
}

#[test]
fn coin_labels_are_not_learned() {
    let p = coins(4);
    let n = 20_000;
    let train = Dataset::sample(&p, n, &mut stream(7, 0), "coins");
    let test = Dataset::sample(&p, 100_000, &mut stream(7, 1), "coins");
    let opt = opt_sigma(p.base(), &default_thresholds());
    assert_eq!(opt.value, 0.5);
    let cfg = LearnerConfig { sigma: 0.5, epsilon: 0.1, degree: Some(2), policy: FeaturePolicy::FullHermite };
    let report = learn_smoothed(&train, &test, &cfg, opt.value).unwrap();
    let mc = 0.5 / (100_000f64).sqrt();
    assert!(report.gap().abs() <= 4.0 * mc, "{report:?}");
}

#[test]
fn high_degree_learner_beats_the_witness() {
    let sigma = 0.5;
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let grid = QuadratureGrid::gauss_hermite(200).unwrap();
    let res = l1_best_approx(&f, 8, &grid).unwrap();
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).unwrap();
    let opt = opt_sigma(&dist, &default_thresholds());
    let p = plant(dist, 4, 8).unwrap();
    let train = Dataset::sample(&p, 20_000, &mut stream(8, 0), "witness");
    let test = Dataset::sample(&p, 50_000, &mut stream(8, 1), "witness");
    let cfg = LearnerConfig { sigma, epsilon: 0.1, degree: Some(16), policy: known(&p) };
    let report = learn_smoothed(&train, &test, &cfg, opt.value).unwrap();
    assert!(report.test_error <= opt.value + 0.05, "{report:?}");
}

#[test]
fn more_data_does_not_hurt() {
    // noisy threshold labels, 10 seeds, population error from a large test set
    let base = LabeledHardDistribution::new(LabelProfile::Threshold { t: 0.3, sigma: 0.5, scale: 0.8 }, 0.5).unwrap();
    let p = plant(base, 2, 9).unwrap();
    let mut small = MeanAccumulator::default();
    let mut large = MeanAccumulator::default();
    let mut diffs = MeanAccumulator::default();
    for seed in 0..10 {
        let pool = Dataset::sample(&p, 2_000, &mut stream(100 + seed, 0), "threshold");
        let test = Dataset::sample(&p, 20_000, &mut stream(100 + seed, 1), "threshold");
        let cfg = LearnerConfig { sigma: 0.5, epsilon: 0.1, degree: Some(6), policy: known(&p) };
        let a = learn_smoothed(&pool.slice(0..1_000), &test, &cfg, 0.0).unwrap().test_error;
        let b = learn_smoothed(&pool, &test, &cfg, 0.0).unwrap().test_error;
        small.push(a);
        large.push(b);
        diffs.push(b - a);
    }
    assert!(
        large.mean() <= small.mean() + 2.0 * diffs.std_error(),
        "{} vs {} (se {})",
        large.mean(),
        small.mean(),
        diffs.std_error()
    );
}

#[test]
fn dataset_validation() {
    assert!(Dataset::new(2, vec![0.0; 3], vec![1.0], "bad").is_err());
    assert!(Dataset::new(1, vec![0.0], vec![0.5], "bad").is_err());
    assert!(Dataset::new(1, vec![f64::NAN], vec![1.0], "bad").is_err());
    let ok = Dataset::new(1, vec![0.0, 1.0], vec![1.0, -1.0], "ok").unwrap();
    assert_eq!(ok.len(), 2);
    assert_eq!(ok.slice(1..2).point(0), &[1.0]);
}

#[test]
fn hypothesis_query_distinguishes_when_error_is_low() {
    use smoothsq_core::sq::{distinguish, OracleMode};
    let sigma = 0.5;
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let grid = QuadratureGrid::gauss_hermite(200).unwrap();
    let res = l1_best_approx(&f, 4, &grid).unwrap();
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).unwrap();
    let opt = opt_sigma(&dist, &default_thresholds());
    let p = plant(dist, 8, 10).unwrap();
    let train = Dataset::sample(&p, 10_000, &mut stream(10, 0), "witness");
    let test = Dataset::sample(&p, 50_000, &mut stream(10, 1), "witness");
    let cfg = LearnerConfig { sigma, epsilon: 0.1, degree: Some(12), policy: known(&p) };
    let report = learn_smoothed(&train, &test, &cfg, opt.value).unwrap();
    let q = report.hypothesis.as_query().unwrap();
    let tau = 1e-3;
    let d = distinguish(&p, &[q], tau, OracleMode::Exact, 4, 0).unwrap();
    // planted answer 1 − 2·err (exact), null answer 0, each moved by ≤ τ
    let mc = (0.25f64 / test.len() as f64).sqrt();
    assert!((d.max_gap - (1.0 - 2.0 * report.test_error)).abs() <= 2.0 * tau + 8.0 * mc, "{d:?} {report:?}");
    assert!(report.test_error < 0.5 - 2.0 * tau);
    assert!(d.max_gap > 2.0 * tau);
}
