//! The arcsine-transformed two-proportion sample size and its parameters.

use std::fmt;

use super::quantile::normal_quantile;
use crate::error::{Error, Result};

/// A per-demographic misclassification rate in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ErrorRate(f64);

impl ErrorRate {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "error rate",
                value,
                domain: "[0, 1]",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ErrorRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Sided {
    One,
    Two,
}

impl fmt::Display for Sided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sided::One => "one",
            Sided::Two => "two",
        })
    }
}

/// Significance level, power and sidedness of the detecting test.
///
/// `alpha` is the type I error probability (0.05 by default), not the
/// confidence. The critical values are resolved once at construction:
/// `z_alpha = Φ⁻¹(1 - alpha)` for one-sided tests and `Φ⁻¹(1 - alpha/2)`
/// for two-sided tests, `z_beta = Φ⁻¹(power)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestParams {
    alpha: f64,
    power: f64,
    sided: Sided,
    z_alpha: f64,
    z_beta: f64,
}

impl TestParams {
    pub const DEFAULT_ALPHA: f64 = 0.05;
    pub const DEFAULT_POWER: f64 = 0.90;

    pub fn new(alpha: f64, power: f64, sided: Sided) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                domain: "(0, 0.5]",
            });
        }
        if !(power > 0.5 && power < 1.0) {
            return Err(Error::Domain {
                name: "power",
                value: power,
                domain: "(0.5, 1)",
            });
        }
        let tail = match sided {
            Sided::One => alpha,
            Sided::Two => alpha / 2.0,
        };
        Ok(Self {
            alpha,
            power,
            sided,
            z_alpha: normal_quantile(1.0 - tail)?,
            z_beta: normal_quantile(power)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn sided(&self) -> Sided {
        self.sided
    }

    pub fn z_alpha(&self) -> f64 {
        self.z_alpha
    }

    pub fn z_beta(&self) -> f64 {
        self.z_beta
    }
}

impl Default for TestParams {
    fn default() -> Self {
        Self::new(Self::DEFAULT_ALPHA, Self::DEFAULT_POWER, Sided::One)
            .expect("default test parameters are valid")
    }
}

/// Integer per-group sample size, or the no-bias state of equal rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SampleSize {
    /// Saturates at `u64::MAX`.
    Finite(u64),
    Unbounded,
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSizeResult {
    /// Exact formula value; `+∞` iff the two rates are equal.
    pub raw: f64,
    pub ceiled: SampleSize,
}

impl SampleSizeResult {
    pub fn is_unbounded(&self) -> bool {
        self.ceiled == SampleSize::Unbounded
    }

    /// Size of both groups together.
    pub fn total(&self) -> SampleSize {
        match self.ceiled {
            SampleSize::Finite(n) => SampleSize::Finite(n.saturating_mul(2)),
            SampleSize::Unbounded => SampleSize::Unbounded,
        }
    }
}

/// `arcsin(√e)` in radians.
pub fn arcsine_transform(e: ErrorRate) -> f64 {
    e.value().sqrt().asin()
}

/// Per-group sample size needed to detect the gap between two error rates:
/// `½ · ((z_β + z_α) / (arcsin√e1 − arcsin√e2))²`.
///
/// Equal rates give [`SampleSize::Unbounded`]. Distinct rates whose arcsine
/// difference underflows the formula are clamped to `f64::MAX` so that only
/// exact equality is unbounded.
pub fn sample_size(e1: ErrorRate, e2: ErrorRate, params: &TestParams) -> SampleSizeResult {
    if e1 == e2 {
        return SampleSizeResult {
            raw: f64::INFINITY,
            ceiled: SampleSize::Unbounded,
        };
    }
    let gap = (arcsine_transform(e1) - arcsine_transform(e2)).abs();
    let ratio = (params.z_beta() + params.z_alpha()) / gap;
    let mut raw = 0.5 * ratio * ratio;
    if !raw.is_finite() {
        raw = f64::MAX;
    }
    let ceiled = raw.ceil();
    let ceiled = if ceiled >= u64::MAX as f64 {
        u64::MAX
    } else {
        ceiled as u64
    };
    SampleSizeResult {
        raw,
        ceiled: SampleSize::Finite(ceiled),
    }
}

/// The constant `c = ((z_α1 + z_β1) / (z_α2 + z_β2))²` relating sample sizes
/// under two parameter choices.
pub fn scale_ratio(p1: &TestParams, p2: &TestParams) -> f64 {
    let r = (p1.z_alpha() + p1.z_beta()) / (p2.z_alpha() + p2.z_beta());
    r * r
}
