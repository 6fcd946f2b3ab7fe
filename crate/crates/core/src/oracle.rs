//! Monte Carlo ground truth for the sample-size measure.
//!
//! Each replication draws one binomial error count per demographic and
//! applies a hypothesis test of equal error rates. The rejection fraction
//! estimates the power at a given per-group size, and a bracketing search
//! finds the smallest size reaching the target power. With the Pearson test
//! this defines the measure for any number of demographics.
//!
//! Random numbers come from ChaCha8 keyed by the seed. Replication `r` uses
//! stream `r`, and group `g` starts at word offset `g · 2³²` within it, so
//! every draw is a pure function of `(seed, r, g)` and the result does not
//! depend on how replications are scheduled across threads.

use std::collections::HashMap;
use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stats::{chisq_quantile, ErrorRate, Sided, TestParams};

const CHUNK: u64 = 1024;
const GROUP_WORD_STRIDE: u128 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Variant {
    /// Difference of arcsine-transformed proportions, two groups only.
    #[value(name = "arcsine_z")]
    ArcsineZ,
    /// Pooled two-proportion z-test, two groups only.
    #[value(name = "wald_pooled_z")]
    WaldPooledZ,
    /// Pearson chi-squared on the k×2 table of errors and successes.
    #[value(name = "pearson_chisq")]
    PearsonChisq,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::ArcsineZ => "arcsine_z",
            Variant::WaldPooledZ => "wald_pooled_z",
            Variant::PearsonChisq => "pearson_chisq",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error rates of k ≥ 2 labelled demographics.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    labels: Vec<String>,
    rates: Vec<ErrorRate>,
}

impl RateVector {
    /// Labels default to `g1`, `g2`, ...
    pub fn new(rates: Vec<ErrorRate>) -> Result<Self> {
        let labels = (1..=rates.len()).map(|i| format!("g{i}")).collect();
        Self::with_labels(labels, rates)
    }

    pub fn with_labels(labels: Vec<String>, rates: Vec<ErrorRate>) -> Result<Self> {
        if labels.len() != rates.len() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: rates.len(),
            });
        }
        if rates.len() < 2 {
            return Err(Error::TooFew {
                required: 2,
                got: rates.len(),
            });
        }
        Ok(Self { labels, rates })
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        let rates = values
            .iter()
            .map(|&v| ErrorRate::new(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rates)
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn rates(&self) -> &[ErrorRate] {
        &self.rates
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn all_equal(&self) -> bool {
        self.rates.iter().all(|r| *r == self.rates[0])
    }

    /// Indices of the (lower, higher) rate for the one-sided two-group
    /// statistics. Equal rates keep input order.
    fn low_high(&self) -> (usize, usize) {
        if self.rates[0] > self.rates[1] {
            (1, 0)
        } else {
            (0, 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub replications: u64,
    pub seed: u64,
    pub variant: Variant,
    /// Largest per-group size the minimal-N search will try.
    pub n_cap: u64,
}

impl OracleConfig {
    pub const DEFAULT_REPLICATIONS: u64 = 100_000;
    pub const DEFAULT_N_CAP: u64 = 10_000_000;
    pub const MIN_REPLICATIONS: u64 = 1000;

    pub fn new(replications: u64, seed: u64, variant: Variant, n_cap: u64) -> Result<Self> {
        if replications < Self::MIN_REPLICATIONS {
            return Err(Error::Domain {
                name: "replications",
                value: replications as f64,
                domain: "integers >= 1000",
            });
        }
        if n_cap < 2 {
            return Err(Error::Domain {
                name: "n_cap",
                value: n_cap as f64,
                domain: "integers >= 2",
            });
        }
        Ok(Self {
            replications,
            seed,
            variant,
            n_cap,
        })
    }

    pub fn with_seed(seed: u64, variant: Variant) -> Self {
        Self {
            replications: Self::DEFAULT_REPLICATIONS,
            seed,
            variant,
            n_cap: Self::DEFAULT_N_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    pub power_hat: f64,
    /// `sqrt(power_hat · (1 − power_hat) / replications)`.
    pub std_err: f64,
    pub replications: u64,
    pub n_per_group: u64,
}

/// Outcome of a minimal sample size search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimalN {
    Found(u64),
    ExceedsCap,
}

impl fmt::Display for MinimalN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalN::Found(n) => write!(f, "{n}"),
            MinimalN::ExceedsCap => f.write_str("exceeds_cap"),
        }
    }
}

/// Significance level the chi-squared threshold is taken at. A two-group
/// one-sided convention doubles alpha, since the chi-squared test is
/// two-sided.
pub fn effective_alpha(params: &TestParams, groups: usize) -> f64 {
    if groups == 2 && params.sided() == Sided::One {
        2.0 * params.alpha()
    } else {
        params.alpha()
    }
}

/// Per-replication rejection rule with its precomputed threshold.
#[derive(Debug, Clone, Copy)]
enum Rule {
    Arcsine {
        low: usize,
        high: usize,
        z: f64,
        two_sided: bool,
    },
    Wald {
        low: usize,
        high: usize,
        z: f64,
        two_sided: bool,
    },
    Pearson {
        threshold: f64,
    },
}

impl Rule {
    fn new(rates: &RateVector, params: &TestParams, variant: Variant) -> Result<Self> {
        let k = rates.len();
        let two_sided = params.sided() == Sided::Two;
        let (low, high) = rates.low_high();
        match variant {
            Variant::ArcsineZ | Variant::WaldPooledZ if k != 2 => Err(Error::VariantGroups {
                variant: variant.name(),
                groups: k,
            }),
            Variant::ArcsineZ => Ok(Rule::Arcsine {
                low,
                high,
                z: params.z_alpha(),
                two_sided,
            }),
            Variant::WaldPooledZ => Ok(Rule::Wald {
                low,
                high,
                z: params.z_alpha(),
                two_sided,
            }),
            Variant::PearsonChisq => {
                let alpha = effective_alpha(params, k);
                let threshold = if alpha >= 1.0 {
                    0.0
                } else {
                    chisq_quantile((k - 1) as u32, 1.0 - alpha)?
                };
                Ok(Rule::Pearson { threshold })
            }
        }
    }

    fn rejects(&self, errors: &[u64], n: u64) -> bool {
        let nf = n as f64;
        let exceeds = |z: f64, crit: f64, two_sided: bool| {
            if two_sided {
                z.abs() > crit
            } else {
                z > crit
            }
        };
        match *self {
            Rule::Arcsine {
                low,
                high,
                z,
                two_sided,
            } => {
                let t = |x: u64| (x as f64 / nf).sqrt().asin();
                let stat = (t(errors[high]) - t(errors[low])) * (2.0 * nf).sqrt();
                exceeds(stat, z, two_sided)
            }
            Rule::Wald {
                low,
                high,
                z,
                two_sided,
            } => {
                let pooled = (errors[low] + errors[high]) as f64 / (2.0 * nf);
                if pooled <= 0.0 || pooled >= 1.0 {
                    return false;
                }
                let se = (pooled * (1.0 - pooled) * 2.0 / nf).sqrt();
                let stat = (errors[high] as f64 - errors[low] as f64) / nf / se;
                exceeds(stat, z, two_sided)
            }
            Rule::Pearson { threshold } => {
                let k = errors.len() as f64;
                let total: u64 = errors.iter().sum();
                if total == 0 || total == n * errors.len() as u64 {
                    return false;
                }
                let expected_err = total as f64 / k;
                let expected_ok = nf - expected_err;
                let weight = 1.0 / expected_err + 1.0 / expected_ok;
                let stat: f64 = errors
                    .iter()
                    .map(|&x| {
                        let d = x as f64 - expected_err;
                        d * d * weight
                    })
                    .sum();
                stat > threshold
            }
        }
    }
}

/// Estimates the power of the configured test at `n_per_group` samples per
/// demographic.
pub fn simulate_power(
    rates: &RateVector,
    n_per_group: u64,
    params: &TestParams,
    cfg: &OracleConfig,
) -> Result<PowerEstimate> {
    if n_per_group < 2 {
        return Err(Error::Domain {
            name: "n_per_group",
            value: n_per_group as f64,
            domain: "integers >= 2",
        });
    }
    let rule = Rule::new(rates, params, cfg.variant)?;
    let draws = rates
        .rates()
        .iter()
        .map(|r| Binomial::new(n_per_group, r.value()).expect("rate lies in [0, 1]"))
        .collect::<Vec<_>>();
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reps = cfg.replications;
    let chunks = reps.div_ceil(CHUNK);

    let rejections: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut counts = vec![0u64; draws.len()];
            let mut hits = 0u64;
            for rep in (chunk * CHUNK)..((chunk + 1) * CHUNK).min(reps) {
                for (g, dist) in draws.iter().enumerate() {
                    let mut rng = base.clone();
                    rng.set_stream(rep);
                    rng.set_word_pos(g as u128 * GROUP_WORD_STRIDE);
                    counts[g] = dist.sample(&mut rng);
                }
                if rule.rejects(&counts, n_per_group) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let power_hat = rejections as f64 / reps as f64;
    Ok(PowerEstimate {
        power_hat,
        std_err: (power_hat * (1.0 - power_hat) / reps as f64).sqrt(),
        replications: reps,
        n_per_group,
    })
}

/// Smallest per-group size whose estimated power reaches `params.power()`.
///
/// Doubles from 2 to bracket the answer, bisects assuming power grows with
/// `n`, then rescans the two sizes below the bisection result so that a
/// local dip in the saw-toothed power curve cannot hide a smaller passing
/// size.
pub fn minimal_n(rates: &RateVector, params: &TestParams, cfg: &OracleConfig) -> Result<MinimalN> {
    Rule::new(rates, params, cfg.variant)?;
    let target = params.power();
    let mut cache: HashMap<u64, bool> = HashMap::new();
    let mut meets = |n: u64| -> Result<bool> {
        if let Some(&hit) = cache.get(&n) {
            return Ok(hit);
        }
        let hit = simulate_power(rates, n, params, cfg)?.power_hat >= target;
        cache.insert(n, hit);
        Ok(hit)
    };

    // `lo` fails (1 is a sentinel below the smallest valid size), `hi` passes.
    let mut lo = 1u64;
    let mut hi = 2u64.min(cfg.n_cap);
    loop {
        if meets(hi)? {
            break;
        }
        if hi >= cfg.n_cap {
            return Ok(MinimalN::ExceedsCap);
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(cfg.n_cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    for n in hi.saturating_sub(2).max(2)..=hi {
        if meets(n)? {
            return Ok(MinimalN::Found(n));
        }
    }
    unreachable!("the bracket's upper end always passes")
}

/// Sample size measure for any number of demographics: the minimal size of
/// a Pearson chi-squared test of equal error rates.
pub fn generalized_sample_size(
    rates: &RateVector,
    params: &TestParams,
    cfg: &OracleConfig,
) -> Result<MinimalN> {
    let cfg = OracleConfig {
        variant: Variant::PearsonChisq,
        ..*cfg
    };
    minimal_n(rates, params, &cfg)
}
