use bias_gauge::oracle::{
    effective_alpha, generalized_sample_size, minimal_n, simulate_power, MinimalN, OracleConfig,
    RateVector, Variant,
};
use bias_gauge::stats::{sample_size, ErrorRate, SampleSize, TestParams};

fn rates(values: &[f64]) -> RateVector {
    RateVector::from_values(values).unwrap()
}

fn cfg(variant: Variant, seed: u64) -> OracleConfig {
    OracleConfig::with_seed(seed, variant)
}

// Exact sizes at equal rates 0.2 (full enumeration of the two binomials):
// pooled z 0.05020 / 0.05038, Pearson 0.10040 / 0.10077 at n = 50 / 500.
#[test]
fn size_calibration_under_equal_rates() {
    let p = TestParams::default();
    let null = rates(&[0.2, 0.2]);
    for (variant, seed) in [(Variant::PearsonChisq, 101), (Variant::WaldPooledZ, 202)] {
        let nominal = match variant {
            Variant::PearsonChisq => effective_alpha(&p, 2),
            _ => p.alpha(),
        };
        for n in [50, 500] {
            let est = simulate_power(&null, n, &p, &cfg(variant, seed)).unwrap();
            assert!(
                (est.power_hat - nominal).abs() <= 4.0 * est.std_err,
                "{variant} n = {n}: {} vs {nominal} (se {})",
                est.power_hat,
                est.std_err
            );
        }
    }
}

#[test]
fn null_rejection_rate_is_alpha() {
    let est = simulate_power(
        &rates(&[0.1, 0.1]),
        500,
        &TestParams::default(),
        &cfg(Variant::WaldPooledZ, 5),
    )
    .unwrap();
    assert!((est.power_hat - 0.05).abs() <= 3.0 * est.std_err, "{est:?}");
}

#[test]
fn power_grows_with_sample_size() {
    let p = TestParams::default();
    let alt = rates(&[0.1, 0.3]);
    let c = cfg(Variant::ArcsineZ, 9);
    let est: Vec<_> = [10, 40, 160]
        .iter()
        .map(|&n| simulate_power(&alt, n, &p, &c).unwrap())
        .collect();
    for w in est.windows(2) {
        let gap = w[1].power_hat - w[0].power_hat;
        let se = w[0].std_err.max(w[1].std_err);
        assert!(gap > 5.0 * se, "{:?} -> {:?}", w[0], w[1]);
    }
}

#[test]
fn closed_form_size_reaches_target_power() {
    let p = TestParams::default();
    let est = simulate_power(&rates(&[0.1, 0.2]), 213, &p, &cfg(Variant::ArcsineZ, 42)).unwrap();
    assert!((0.87..=0.93).contains(&est.power_hat), "{est:?}");
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let p = TestParams::default();
    let alt = rates(&[0.1, 0.2, 0.25]);
    let c = cfg(Variant::PearsonChisq, 77);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_power(&alt, 150, &p, &c).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    assert_eq!(one, simulate_power(&alt, 150, &p, &c).unwrap());
}

#[test]
fn different_seeds_give_different_streams() {
    let p = TestParams::default();
    let alt = rates(&[0.1, 0.2]);
    let a = simulate_power(&alt, 100, &p, &cfg(Variant::ArcsineZ, 1)).unwrap();
    let b = simulate_power(&alt, 100, &p, &cfg(Variant::ArcsineZ, 2)).unwrap();
    assert_ne!(a.power_hat, b.power_hat);
}

#[test]
fn zero_rates_never_reject() {
    let est = simulate_power(
        &rates(&[0.0, 0.0]),
        1000,
        &TestParams::default(),
        &cfg(Variant::PearsonChisq, 3),
    )
    .unwrap();
    assert_eq!(est.power_hat, 0.0);
}

#[test]
fn minimal_n_tracks_closed_form() {
    let p = TestParams::default();
    for (a, b) in [(0.1, 0.2), (0.05, 0.1)] {
        let formula =
            match sample_size(ErrorRate::new(a).unwrap(), ErrorRate::new(b).unwrap(), &p).ceiled {
                SampleSize::Finite(n) => n as f64,
                SampleSize::Unbounded => unreachable!(),
            };
        let MinimalN::Found(n) =
            minimal_n(&rates(&[a, b]), &p, &cfg(Variant::ArcsineZ, 42)).unwrap()
        else {
            panic!("({a}, {b}) exceeded the cap");
        };
        assert!(
            (n as f64 - formula).abs() <= 0.1 * formula,
            "({a}, {b}): {n} vs {formula}"
        );
    }
}

#[test]
fn equal_rates_exceed_cap() {
    let p = TestParams::default();
    let c = OracleConfig::new(10_000, 1, Variant::ArcsineZ, 1 << 16).unwrap();
    assert_eq!(
        minimal_n(&rates(&[0.1, 0.1]), &p, &c).unwrap(),
        MinimalN::ExceedsCap
    );
    assert_eq!(
        generalized_sample_size(&rates(&[0.2, 0.2, 0.2]), &p, &c).unwrap(),
        MinimalN::ExceedsCap
    );
}

#[test]
fn three_groups_need_more_samples_as_rates_shrink() {
    let p = TestParams::default();
    let c = cfg(Variant::PearsonChisq, 7);
    let find = |v: &[f64]| match generalized_sample_size(&rates(v), &p, &c).unwrap() {
        MinimalN::Found(n) => n,
        MinimalN::ExceedsCap => panic!("{v:?} exceeded the cap"),
    };
    let n1 = find(&[0.10, 0.20, 0.30]);
    let n2 = find(&[0.05, 0.10, 0.15]);
    assert!(n2 > n1, "{n2} <= {n1}");
}

#[test]
fn more_spread_needs_fewer_samples() {
    // Raising the largest rate with the others fixed lowers the required size.
    let p = TestParams::default();
    let c = cfg(Variant::PearsonChisq, 8);
    let find = |v: &[f64]| match generalized_sample_size(&rates(v), &p, &c).unwrap() {
        MinimalN::Found(n) => n,
        MinimalN::ExceedsCap => panic!(),
    };
    assert!(find(&[0.1, 0.15, 0.35]) < find(&[0.1, 0.15, 0.25]));
}
