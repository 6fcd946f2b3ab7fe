//! Reference implementations used only by tests. They share no code with the
//! library: the error function comes from its positive-term power series,
//! the incomplete gamma from its lower series with exact half-integer gamma
//! values, and quantiles from plain bisection.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `erf(x) = 2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1))`.
pub fn erf_series(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_series(-x);
    }
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > sum * 1e-18 {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-x * x).exp() * sum
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf_series(z / 2f64.sqrt()))
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, target: f64) -> f64 {
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn normal_quantile(p: f64) -> f64 {
    bisect(-12.0, 12.0, normal_cdf, p)
}

/// Γ(k/2) for positive integer k, from Γ(1) = 1, Γ(½) = √π and Γ(a+1) = aΓ(a).
pub fn gamma_half_integer(k: u32) -> f64 {
    let mut a = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    while a < k as f64 / 2.0 {
        g *= a;
        a += 1.0;
    }
    g
}

/// Regularized lower incomplete gamma `P(k/2, x)` by the series
/// `x^a e^{-x} / Γ(a+1) · Σ xⁿ / ((a+1)…(a+n))`.
pub fn lower_gamma_half(k: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let a = k as f64 / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    while term > sum * 1e-18 {
        n += 1.0;
        term *= x / (a + n);
        sum += term;
    }
    let gamma_a1 = a * gamma_half_integer(k);
    (a * x.ln() - x).exp() / gamma_a1 * sum
}

pub fn chisq_cdf(df: u32, x: f64) -> f64 {
    lower_gamma_half(df, x / 2.0)
}

pub fn chisq_quantile(df: u32, p: f64) -> f64 {
    bisect(0.0, 400.0, |x| chisq_cdf(df, x), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_self_checks() {
        assert!((gamma_half_integer(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(8) - 6.0).abs() < 1e-12);
        assert!((chisq_cdf(2, 3.0) - (1.0 - (-1.5f64).exp())).abs() < 1e-14);
    }
}
