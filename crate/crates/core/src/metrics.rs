//! The difference, ratio and sample-size bias measures, and rankings built
//! from them.

use std::fmt;

use crate::error::{Error, Result};
use crate::stats::{sample_size, ErrorRate, SampleSize, TestParams};

/// Orders two rates so that the first is the lower one. `swapped` reports
/// whether the inputs were reordered.
pub fn normalize_pair(a: ErrorRate, b: ErrorRate) -> (ErrorRate, ErrorRate, bool) {
    if b < a {
        (b, a, true)
    } else {
        (a, b, false)
    }
}

/// `e_high - e_low`.
pub fn diff_metric(e_low: ErrorRate, e_high: ErrorRate) -> f64 {
    e_high.value() - e_low.value()
}

/// Ratio of error rates, which has no value at `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    /// At least 1; `+∞` when only the lower rate is zero.
    Value(f64),
    Indeterminate,
}

impl Ratio {
    /// Position used for ranking; an indeterminate ratio ties with 1.
    pub fn rank_key(self) -> f64 {
        match self {
            Ratio::Value(v) => v,
            Ratio::Indeterminate => 1.0,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Value(v) if v.is_infinite() => f.write_str("inf"),
            Ratio::Value(v) => fmt::Display::fmt(v, f),
            Ratio::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// `e_high / e_low`, with `+∞` for a zero denominator.
pub fn ratio_metric(e_low: ErrorRate, e_high: ErrorRate) -> Ratio {
    let (lo, hi) = (e_low.value(), e_high.value());
    if lo > 0.0 {
        Ratio::Value(hi / lo)
    } else if hi > 0.0 {
        Ratio::Value(f64::INFINITY)
    } else {
        Ratio::Indeterminate
    }
}

/// All three measures for one classifier on one pair of demographics.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub algorithm: String,
    pub e_low: ErrorRate,
    pub e_high: ErrorRate,
    pub swapped: bool,
    pub d_err: f64,
    pub r_err: Ratio,
    pub n_raw: f64,
    pub n_ceiled: SampleSize,
}

pub fn evaluate_row(
    algorithm: impl Into<String>,
    a: ErrorRate,
    b: ErrorRate,
    params: &TestParams,
) -> MetricRow {
    let (e_low, e_high, swapped) = normalize_pair(a, b);
    let n = sample_size(e_low, e_high, params);
    MetricRow {
        algorithm: algorithm.into(),
        e_low,
        e_high,
        swapped,
        d_err: diff_metric(e_low, e_high),
        r_err: ratio_metric(e_low, e_high),
        n_raw: n.raw,
        n_ceiled: n.ceiled,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Competition ranking (1, 2, 2, 4): tied values share the smaller rank.
/// Infinite values are allowed; NaN is not.
pub fn rank_metric(values: &[f64], order: Order) -> Vec<usize> {
    debug_assert!(values.iter().all(|v| !v.is_nan()));
    values
        .iter()
        .map(|v| {
            1 + values
                .iter()
                .filter(|w| match order {
                    Order::Ascending => *w < v,
                    Order::Descending => *w > v,
                })
                .count()
        })
        .collect()
}

/// Kendall tau-b between two rankings.
pub fn rank_agreement(ranks_a: &[usize], ranks_b: &[usize]) -> Result<f64> {
    if ranks_a.len() != ranks_b.len() {
        return Err(Error::LengthMismatch {
            left: ranks_a.len(),
            right: ranks_b.len(),
        });
    }
    let n = ranks_a.len();
    if n < 2 {
        return Err(Error::TooFew {
            required: 2,
            got: n,
        });
    }
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut ties_a, mut ties_b) = (0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let da = ranks_a[i].cmp(&ranks_a[j]);
            let db = ranks_b[i].cmp(&ranks_b[j]);
            use std::cmp::Ordering::Equal;
            match (da, db) {
                (Equal, Equal) => {}
                (Equal, _) => ties_a += 1,
                (_, Equal) => ties_b += 1,
                _ if da == db => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let pairs = concordant + discordant;
    let denom = (((pairs + ties_a) * (pairs + ties_b)) as f64).sqrt();
    if denom == 0.0 {
        return Err(Error::ConstantRanking);
    }
    Ok((concordant - discordant) as f64 / denom)
}

/// Classifiers on one two-demographic block, ranked by each measure.
/// Rank 1 is the least biased: smallest difference, smallest ratio,
/// largest sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub group: String,
    pub demographics: [String; 2],
    pub rows: Vec<MetricRow>,
    pub ranks_d: Vec<usize>,
    pub ranks_r: Vec<usize>,
    pub ranks_n: Vec<usize>,
}

impl RankTable {
    pub fn new(group: impl Into<String>, demographics: [String; 2], rows: Vec<MetricRow>) -> Self {
        let d: Vec<f64> = rows.iter().map(|r| r.d_err).collect();
        let r: Vec<f64> = rows.iter().map(|r| r.r_err.rank_key()).collect();
        let n: Vec<f64> = rows.iter().map(|r| r.n_raw).collect();
        Self {
            group: group.into(),
            demographics,
            ranks_d: rank_metric(&d, Order::Ascending),
            ranks_r: rank_metric(&r, Order::Ascending),
            ranks_n: rank_metric(&n, Order::Descending),
            rows,
        }
    }

    /// Pairwise tau-b for (D, R), (D, N), (R, N); `None` where undefined.
    pub fn agreements(&self) -> [(&'static str, Option<f64>); 3] {
        [
            ("d_vs_r", rank_agreement(&self.ranks_d, &self.ranks_r).ok()),
            ("d_vs_n", rank_agreement(&self.ranks_d, &self.ranks_n).ok()),
            ("r_vs_n", rank_agreement(&self.ranks_r, &self.ranks_n).ok()),
        ]
    }
}
