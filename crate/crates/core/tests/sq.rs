use smoothsq_core::approx::l1_best_approx;
use smoothsq_core::error::Error;
use smoothsq_core::gaussian::{hermite_eval, QuadratureGrid, SmoothedThreshold};
use smoothsq_core::hard::{build_labeled, LabelProfile, LabeledHardDistribution, WitnessForm};
use smoothsq_core::linalg::dot;
use smoothsq_core::rng::stream;
use smoothsq_core::sq::{
    distinguish, hoeffding_samples, low_degree_battery, plant, Feature, OracleMode,
    PlantedDistribution, Query, StatOracle,
};
use smoothsq_core::stats::{MeanAccumulator, PowerSums};

fn coin_base() -> LabeledHardDistribution {
    LabeledHardDistribution::new(LabelProfile::Constant(0.0), 0.5).unwrap()
}

fn witness_base(sigma: f64, m: usize) -> (LabeledHardDistribution, f64) {
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let grid = QuadratureGrid::gauss_hermite(200).unwrap();
    let res = l1_best_approx(&f, m, &grid).unwrap();
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).unwrap();
    let l1 = dist.correlation(|x| f.eval(x), &[]);
    (dist, l1)
}

#[test]
fn one_dimensional_plant_is_a_sign_flip() {
    let p = plant(coin_base(), 1, 3).unwrap();
    assert_eq!(p.direction()[0].abs(), 1.0);
}

#[test]
fn planted_marginal_is_gaussian_off_direction() {
    let (base, _) = witness_base(0.5, 4);
    let p = plant(base, 8, 11).unwrap();
    let v = p.direction().to_vec();
    // A direction orthogonal to v.
    let mut w = vec![0.0; 8];
    w[0] = 1.0;
    let c = dot(&w, &v);
    for (wi, vi) in w.iter_mut().zip(&v) {
        *wi -= c * vi;
    }
    let n = dot(&w, &w).sqrt();
    w.iter_mut().for_each(|x| *x /= n);
    let mut sums = PowerSums::new(4);
    let mut rng = stream(1, 0);
    for _ in 0..200_000 {
        let (x, _) = p.sample(&mut rng);
        sums.push(dot(&x, &w));
    }
    for check in sums.gaussian_checks() {
        assert!(check.z.abs() < 4.0, "{check:?}");
    }
}

#[test]
fn trivial_oracle_answers() {
    let (base, _) = witness_base(0.5, 4);
    let p = plant(base, 4, 5).unwrap();
    let tau = 1e-3;
    let oracle = StatOracle::new(&p, tau, OracleMode::Exact, 100, 0).unwrap();
    let one = Query::projected(0, vec![1.0, 0.0, 0.0, 0.0], Feature::Constant).unwrap();
    let a = oracle.query(&one).unwrap();
    assert!((1.0 - tau..=1.0).contains(&a));

    let null = p.null();
    let null_oracle = StatOracle::new(&null, tau, OracleMode::Exact, 100, 0).unwrap();
    let y = Query::projected(1, vec![1.0, 0.0, 0.0, 0.0], Feature::Constant).unwrap();
    assert!(null_oracle.query(&y).unwrap().abs() <= tau);

    for j in 0..=4 {
        let q = Query::projected(1, p.direction().to_vec(), Feature::Hermite { degree: j, scale: 0.01 })
            .unwrap();
        assert!(oracle.query(&q).unwrap().abs() <= tau);
        assert!(oracle.exact_expectation(&q).unwrap().abs() < 1e-6);
    }
}

#[test]
fn budget_is_enforced() {
    let p = plant(coin_base(), 2, 1).unwrap();
    let oracle = StatOracle::new(&p, 0.1, OracleMode::Exact, 2, 0).unwrap();
    let q = Query::projected(0, vec![1.0, 0.0], Feature::Constant).unwrap();
    oracle.query(&q).unwrap();
    oracle.query(&q).unwrap();
    assert_eq!(oracle.query(&q), Err(Error::BudgetExhausted(2)));
    assert_eq!(oracle.remaining(), 0);
}

#[test]
fn coin_base_is_indistinguishable() {
    let p = plant(coin_base(), 8, 2).unwrap();
    let battery = low_degree_battery(8, 4, 4, &[], 9);
    let report = distinguish(&p, &battery, 1e-3, OracleMode::Exact, 4, 0).unwrap();
    assert!(report.max_gap < 1e-12);

    // Monte Carlo on the same battery.
    let mut rng = stream(3, 0);
    let null = p.null();
    for q in battery.iter().take(10) {
        let mut diff = MeanAccumulator::default();
        for _ in 0..20_000 {
            let (x, y) = p.sample(&mut rng);
            let (xn, yn) = null.sample(&mut rng);
            diff.push(q.eval(&x, y) - q.eval(&xn, yn));
        }
        assert!(diff.mean().abs() < 4.0 * diff.std_error() + 1e-12, "{}", q.name());
    }
}

#[test]
fn sampled_oracle_is_sound() {
    let (base, _) = witness_base(0.5, 2);
    let p = plant(base, 2, 4).unwrap();
    let tau = 0.1;
    let n = hoeffding_samples(tau, 1e-6);
    let oracle = StatOracle::new(&p, tau, OracleMode::Sampled { failure_prob: 1e-6 }, 1000, 7).unwrap();
    let q = Query::projected(1, p.direction().to_vec(), Feature::Sign { t: 0.0 }).unwrap();
    let exact = StatOracle::new(&p, tau, OracleMode::Exact, 1, 0).unwrap().exact_expectation(&q).unwrap();
    let mut bad = 0;
    for trial in 0..300 {
        let a = oracle.query(&q).unwrap();
        let reference = oracle.sample_mean(&q, 10 * n, 1_000_000 + trial);
        assert!((reference - exact).abs() < 0.03);
        bad += ((a - reference).abs() > tau) as usize;
    }
    assert_eq!(bad, 0);
}

#[test]
fn witness_base_hides_low_degree_but_not_the_threshold() {
    let sigma = 0.5;
    let m = 4;
    let tau = 1e-3;
    let (base, l1) = witness_base(sigma, m);
    let p: PlantedDistribution = plant(base, 16, 21).unwrap();
    let battery = low_degree_battery(16, m, 8, p.direction(), 5);
    let report = distinguish(&p, &battery, tau, OracleMode::Exact, m, 0).unwrap();
    assert!(report.max_gap <= 5e-3, "{report:?}");

    let hyp = Query::projected(1, p.direction().to_vec(), Feature::SmoothedSign { t: 0.0, sigma }).unwrap();
    let single = distinguish(&p, &[hyp], tau, OracleMode::Exact, m, 0).unwrap();
    assert!(single.max_gap >= 2.0 * (l1 / 2.0 - tau), "{} vs {l1}", single.max_gap);

    // Monte Carlo along a battery direction.
    let mut rng = stream(8, 0);
    let Query::Projected { direction, .. } = &battery[0] else { unreachable!() };
    let mut accs = vec![MeanAccumulator::default(); m + 1];
    for _ in 0..100_000 {
        let (x, y) = p.sample(&mut rng);
        let u = dot(&x, direction);
        for (j, a) in accs.iter_mut().enumerate() {
            a.push(y * hermite_eval(j, u));
        }
    }
    for a in &accs {
        assert!(a.mean().abs() < 4.0 * a.std_error());
    }
}
