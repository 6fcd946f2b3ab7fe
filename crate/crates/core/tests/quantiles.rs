mod common;

use bias_gauge::stats::{chisq_quantile, normal_quantile, scale_ratio, Sided, TestParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Frozen from the bisection/series oracles in `common`, 7 decimals.
const PHI_INV_095: f64 = 1.644_853_6;
const PHI_INV_090: f64 = 1.281_551_6;
const PHI_INV_0975: f64 = 1.959_964_0;
const CHISQ1_095: f64 = 3.841_458_8;
const CHISQ2_095: f64 = 5.991_464_5;
const CHISQ1_090: f64 = 2.705_543_5;

#[test]
fn frozen_values_agree_with_oracles() {
    assert!((common::normal_quantile(0.95) - PHI_INV_095).abs() < 1e-7);
    assert!((common::normal_quantile(0.90) - PHI_INV_090).abs() < 1e-7);
    assert!((common::normal_quantile(0.975) - PHI_INV_0975).abs() < 1e-7);
    assert!((common::chisq_quantile(1, 0.95) - CHISQ1_095).abs() < 1e-7);
    assert!((common::chisq_quantile(2, 0.95) - CHISQ2_095).abs() < 1e-7);
    assert!((common::chisq_quantile(1, 0.90) - CHISQ1_090).abs() < 1e-7);
    // closed forms behind the frozen chi-squared values
    assert!((CHISQ2_095 - (-2.0 * 0.05f64.ln())).abs() < 1e-7);
    assert!((CHISQ1_095 - PHI_INV_0975 * PHI_INV_0975).abs() < 1e-6);
    assert!((CHISQ1_090 - PHI_INV_095 * PHI_INV_095).abs() < 1e-6);
}

#[test]
fn normal_quantile_examples() {
    assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
    assert!((normal_quantile(0.95).unwrap() - PHI_INV_095).abs() < 1e-7);
    assert!((normal_quantile(0.90).unwrap() - PHI_INV_090).abs() < 1e-7);
}

#[test]
fn chisq_quantile_examples() {
    assert!((chisq_quantile(1, 0.95).unwrap() - CHISQ1_095).abs() < 1e-6);
    assert!((chisq_quantile(2, 0.95).unwrap() - CHISQ2_095).abs() < 1e-6);
    assert!((chisq_quantile(1, 0.90).unwrap() - CHISQ1_090).abs() < 1e-6);
}

#[test]
fn normal_quantile_matches_oracle_and_is_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..2000 {
        let p: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let got = normal_quantile(p).unwrap();
        let want = common::normal_quantile(p);
        assert!((got - want).abs() <= 1e-8, "p = {p}: {got} vs {want}");
        let mirrored = normal_quantile(1.0 - p).unwrap();
        assert!((got + mirrored).abs() <= 1e-8, "p = {p}");
    }
}

#[test]
fn chisq_quantile_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let df: u32 = rng.random_range(1..=12);
        let p: f64 = rng.random_range(1e-4..1.0 - 1e-4);
        let got = chisq_quantile(df, p).unwrap();
        let want = common::chisq_quantile(df, p);
        assert!(
            (got - want).abs() <= 1e-6,
            "df = {df}, p = {p}: {got} vs {want}"
        );
    }
}

#[test]
fn scale_ratio_example() {
    // ((1.6448536 + 1.2815516) / (1.9599640 + 1.2815516))², from oracle quantiles
    let expected = {
        let num = common::normal_quantile(0.95) + common::normal_quantile(0.90);
        let den = common::normal_quantile(0.975) + common::normal_quantile(0.90);
        (num / den).powi(2)
    };
    assert!((expected - 0.815_028_3).abs() < 1e-7);
    let p1 = TestParams::new(0.05, 0.90, Sided::One).unwrap();
    let p2 = TestParams::new(0.025, 0.90, Sided::One).unwrap();
    assert!((scale_ratio(&p1, &p2) - expected).abs() < 1e-9);
    // a two-sided 0.05 test uses the same critical value as one-sided 0.025
    let p3 = TestParams::new(0.05, 0.90, Sided::Two).unwrap();
    assert!((scale_ratio(&p1, &p3) - expected).abs() < 1e-12);
}
