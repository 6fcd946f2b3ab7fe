//! Inverse CDFs for the normal and chi-squared distributions.

use super::special::{chisq_cdf, chisq_sf, normal_cdf, normal_pdf};
use crate::error::{Error, Result};

// Acklam's rational approximation, relative error ~1.2e-9 before refinement.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.024_25;

fn acklam(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Standard normal inverse CDF `Φ⁻¹(p)` for `p ∈ (0, 1)`.
///
/// The rational initial guess is refined by one Newton step against the
/// incomplete-gamma based CDF. Upper-half arguments are reflected so that
/// `normal_quantile(1 - p) == -normal_quantile(p)` up to rounding of `1 - p`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "(0, 1)",
        });
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let x = acklam(p);
    let density = normal_pdf(x);
    if density > 0.0 {
        x - (normal_cdf(x) - p) / density
    } else {
        x
    }
}

/// Chi-squared inverse CDF with `df` degrees of freedom.
///
/// Brackets the root by doubling, then bisects to machine resolution. The
/// upper tail is compared against `1 - p` directly when `p > 0.5`.
pub fn chisq_quantile(df: u32, p: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::Domain {
            name: "df",
            value: 0.0,
            domain: "integers >= 1",
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "(0, 1)",
        });
    }
    let upper = p > 0.5;
    let tail = 1.0 - p;
    // true once x is at or beyond the quantile
    let past = |x: f64| {
        if upper {
            chisq_sf(df, x) <= tail
        } else {
            chisq_cdf(df, x) >= p
        }
    };

    let mut lo = 0.0;
    let mut hi = f64::from(df).max(1.0);
    while !past(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..2_000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if past(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
