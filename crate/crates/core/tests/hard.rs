use smoothsq_core::approx::l1_best_approx;
use smoothsq_core::gaussian::{
    hermite_eval, normal_cdf, QuadratureGrid, SignPattern, SmoothedThreshold,
};
use smoothsq_core::hard::{
    build_labeled, default_t_prime, default_thresholds, density_ratio_bound, frac_in_set, opt_sigma,
    split_gaussian, threshold_gap_chunk, Draw, FractionalMass, HardSampler, HardSamplerConfig,
    IntervalSet, KwiseTable, LabelProfile, LabeledHardDistribution, ThresholdGapReport, WitnessForm,
};
use smoothsq_core::rng::stream;
use smoothsq_core::stats::{ks_critical, ks_statistic, Histogram, MeanAccumulator, PowerSums};

const N: usize = 200_000;

fn sampler(k: usize, set: &[f64]) -> HardSampler {
    HardSampler::new(HardSamplerConfig::new(k, 20, IntervalSet::from_flat(set).unwrap()).unwrap())
}

#[test]
fn mixture_reproduces_the_gaussian() {
    let split = split_gaussian();
    let mut rng = stream(1, 0);
    let mut xs: Vec<f64> = (0..N).map(|_| split.sample(&mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    assert!(ks_statistic(&xs, normal_cdf) < ks_critical(N, 1e-3));

    // Residual density near -2 by histogram.
    let mut inside = 0usize;
    for _ in 0..N {
        let e = split.sample_residual(&mut rng);
        inside += (-2.05..-1.95).contains(&e) as usize;
    }
    let density = inside as f64 / N as f64 / 0.1;
    let se = (density / (N as f64 * 0.1)).sqrt();
    assert!((density - 0.0712).abs() < 4.0 * se + 1e-3, "{density}");
}

#[test]
fn full_set_gives_a_gaussian() {
    let s = sampler(4, &[0.0, 1.0]);
    let mut rng = stream(2, 0);
    let mut sums = PowerSums::new(6);
    for _ in 0..N {
        sums.push(s.sample(&mut rng));
    }
    for c in sums.gaussian_checks() {
        assert!(c.z.abs() < 4.0, "{c:?}");
    }
}

#[test]
fn conditioned_sampler_properties() {
    let s = sampler(4, &[0.5, 1.0]);
    let mut rng = stream(3, 0);
    let mut sums = PowerSums::new(4);
    let mut frac = FractionalMass::default();
    let mut hist = Histogram::new(-3.5, 3.5, 140);
    let sqrt_ck = s.config().sqrt_ck();
    for _ in 0..N {
        let x = s.sample(&mut rng);
        sums.push(x);
        hist.push(x);
        frac.push(frac_in_set(x, sqrt_ck, &s.config().set));
    }
    for c in sums.gaussian_checks() {
        assert!(c.z.abs() < 4.0, "{c:?}");
    }
    assert!(frac.fraction() >= FractionalMass::bound(4) - 3.0 * frac.std_error());
    // Half of every period is excluded, so the fraction is far above 1/2.
    assert!(frac.fraction() > 0.99);
    let report = density_ratio_bound(&hist, 100).unwrap();
    assert!(report.max_excess_z(2.0) < 3.0, "{}", report.max_ratio);
    assert!(report.max_ratio > 1.5);
}

#[test]
fn quarter_set_density_ratio() {
    let s = sampler(4, &[0.75, 1.0]);
    let mut rng = stream(4, 0);
    let mut hist = Histogram::new(-3.5, 3.5, 140);
    for _ in 0..N {
        hist.push(s.sample(&mut rng));
    }
    let report = density_ratio_bound(&hist, 100).unwrap();
    assert!(report.max_excess_z(4.0) < 3.0, "{}", report.max_ratio);
}

#[test]
fn conditioned_uniform_summands_are_three_wise_independent() {
    let s = sampler(3, &[0.5, 1.0]);
    let mut rng = stream(5, 0);
    let mut draw = Draw::default();
    let mut table = KwiseTable::new(3, 4);
    while table.total() < 100_000 {
        s.sample_with(&mut rng, &mut draw);
        if !draw.conditioned {
            continue;
        }
        let tuple: Vec<f64> = draw
            .values
            .iter()
            .zip(&draw.uniform)
            .filter(|(_, u)| **u)
            .map(|(v, _)| *v)
            .take(3)
            .collect();
        table.push(&tuple);
    }
    let (_, p) = table.uniformity();
    assert!(p > 1e-4, "p = {p}");
}

#[test]
fn labels_from_the_zero_witness_are_coins() {
    let dist = LabeledHardDistribution::new(LabelProfile::Constant(0.0), 0.5).unwrap();
    let mut rng = stream(6, 0);
    let mut y = MeanAccumulator::default();
    let mut xy = MeanAccumulator::default();
    for _ in 0..N {
        let (x, label) = dist.sample(&mut rng);
        y.push(label);
        xy.push(label * x);
    }
    assert!(y.mean().abs() < 4.0 * y.std_error());
    assert!(xy.mean().abs() < 4.0 * xy.std_error());
    let opt = opt_sigma(&dist, &default_thresholds());
    assert_eq!(opt.value, 0.5);
}

#[test]
fn witness_labels_match_moments_and_error() {
    let sigma = 0.5;
    let m = 6;
    let f = SmoothedThreshold::new(0.0, sigma).unwrap();
    let grid = QuadratureGrid::gauss_hermite(200).unwrap();
    let res = l1_best_approx(&f, m, &grid).unwrap();
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).unwrap();
    let moments = dist.hermite_moments(m);
    assert!(moments.iter().all(|v| v.abs() < 1e-12));
    let l1 = dist.correlation(|x| f.eval(x), &[]);

    let mut rng = stream(7, 0);
    let mut accs = vec![MeanAccumulator::default(); m + 1];
    let mut err = MeanAccumulator::default();
    for _ in 0..N {
        let (x, y) = dist.sample(&mut rng);
        for (j, a) in accs.iter_mut().enumerate() {
            a.push(y * hermite_eval(j, x));
        }
        let z: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
        let pred = if x + sigma * z >= 0.0 { 1.0 } else { -1.0 };
        err.push((pred != y) as u8 as f64);
    }
    for a in &accs {
        assert!(a.mean().abs() < 4.0 * a.std_error());
    }
    assert!((err.mean() - (1.0 - l1) / 2.0).abs() < 4.0 * err.std_error());

    let opt = opt_sigma(&dist, &default_thresholds());
    assert!(opt.value <= 0.5 - l1 / 2.0 + 1e-3, "{opt:?} vs {l1}");

    let interp = build_labeled(&res, &f, sigma, WitnessForm::Interpolated).unwrap();
    assert_eq!(interp.clamped_count(), 0);
    let drift = interp.hermite_moments(m).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    assert!(drift > 1e-6, "interpolation should perturb the moments: {drift}");
}

#[test]
fn matched_threshold_profile_is_optimal_at_zero() {
    let dist = LabeledHardDistribution::new(
        LabelProfile::Threshold { t: 0.0, sigma: 0.5, scale: 1.0 },
        0.5,
    )
    .unwrap();
    let opt = opt_sigma(&dist, &default_thresholds());
    assert!(opt.value < 0.5);
    assert_eq!(opt.threshold, 0.0);
    assert_eq!(opt.orientation, 1.0);
    let flipped = LabeledHardDistribution::new(LabelProfile::Pattern(SignPattern::new(vec![0.0], 1.0)), 0.5)
        .unwrap();
    assert_eq!(opt_sigma(&flipped, &default_thresholds()).orientation, -1.0);
}

#[test]
fn threshold_gaps() {
    let s = sampler(9, &[0.5, 1.0]);
    let cfg = s.config().clone();
    let tp = default_t_prime(&cfg);
    let mut rng = stream(8, 0);

    let same = threshold_gap_chunk(&s, 0.01, 0.0, 0.0, 1000, &mut rng);
    assert_eq!(same.mean(), 0.0);

    let acc = threshold_gap_chunk(&s, 0.01, 0.0, tp, 100_000, &mut rng);
    let rep = ThresholdGapReport::new(&cfg, 0.01, 0.0, tp, &acc);
    assert!((rep.gaussian_gap - 0.029727).abs() < 1e-5, "{}", rep.gaussian_gap);
    assert!(rep.ratio() > 2.0, "{rep:?}");

    let acc = threshold_gap_chunk(&s, 1.0, 0.0, tp, 100_000, &mut rng);
    let rep = ThresholdGapReport::new(&cfg, 1.0, 0.0, tp, &acc);
    assert!((rep.hard_gap - rep.gaussian_gap).abs() < 4.0 * rep.hard_gap_std_error + 1e-4, "{rep:?}");
}
