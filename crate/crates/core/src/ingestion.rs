//! Classifier evaluation records and the grouped datasets built from them.
//!
//! CSV input must start with the header
//! `group,algorithm,demographic,kind,value,trials`; `trials` is blank unless
//! `kind` is `error_count`. JSON input is an array of objects with the same
//! field names.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::ErrorRate;

pub const CSV_HEADER: [&str; 6] = [
    "group",
    "algorithm",
    "demographic",
    "kind",
    "value",
    "trials",
];

/// The bundled face-recognition TPR table: 4 races × 5 algorithms × 2 genders.
pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    ErrorRate,
    TprPercent,
    ErrorCount,
}

impl fmt::Display for EvidenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvidenceKind::ErrorRate => "error_rate",
            EvidenceKind::TprPercent => "tpr_percent",
            EvidenceKind::ErrorCount => "error_count",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationRecord {
    #[serde(default, deserialize_with = "blank_as_none")]
    pub group: Option<String>,
    pub algorithm: String,
    pub demographic: String,
    pub kind: EvidenceKind,
    pub value: f64,
    #[serde(default)]
    pub trials: Option<u64>,
}

fn blank_as_none<'de, D>(de: D) -> std::result::Result<Option<String>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let s: Option<String> = Option::deserialize(de)?;
    Ok(s.filter(|s| !s.is_empty()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Converts one piece of evidence to an error rate: TPR percentages become
/// `1 − value/100`, counts become `value / trials`.
pub fn to_error_rate(kind: EvidenceKind, value: f64, trials: Option<u64>) -> Result<ErrorRate> {
    let out_of_range = |constraint| Error::Record {
        index: 0,
        field: "value",
        value: value.to_string(),
        constraint,
    };
    match kind {
        EvidenceKind::ErrorRate => {
            if trials.is_some() {
                return Err(trials_not_allowed(kind));
            }
            ErrorRate::new(value).map_err(|_| out_of_range("error_rate must lie in [0, 1]"))
        }
        EvidenceKind::TprPercent => {
            if trials.is_some() {
                return Err(trials_not_allowed(kind));
            }
            if !(0.0..=100.0).contains(&value) {
                return Err(out_of_range("tpr_percent must lie in [0, 100]"));
            }
            ErrorRate::new((1.0 - value / 100.0).clamp(0.0, 1.0))
        }
        EvidenceKind::ErrorCount => {
            let trials = match trials {
                Some(t) if t > 0 => t,
                Some(_) => {
                    return Err(Error::Record {
                        index: 0,
                        field: "trials",
                        value: "0".into(),
                        constraint: "trials must be a positive integer",
                    })
                }
                None => {
                    return Err(Error::Record {
                        index: 0,
                        field: "trials",
                        value: "<missing>".into(),
                        constraint: "error_count requires trials",
                    })
                }
            };
            if !(value >= 0.0 && value <= trials as f64 && value.fract() == 0.0) {
                return Err(out_of_range(
                    "error_count must be an integer in [0, trials]",
                ));
            }
            ErrorRate::new(value / trials as f64)
        }
    }
}

fn trials_not_allowed(kind: EvidenceKind) -> Error {
    Error::Record {
        index: 0,
        field: "trials",
        value: kind.to_string(),
        constraint: "trials is only allowed with kind error_count",
    }
}

impl EvaluationRecord {
    pub fn error_rate(&self) -> Result<ErrorRate> {
        to_error_rate(self.kind, self.value, self.trials)
    }

    fn key(&self) -> (&str, &str, &str) {
        (
            self.group.as_deref().unwrap_or(""),
            &self.algorithm,
            &self.demographic,
        )
    }
}

/// Parses and validates records. Errors name the row (1-based data index
/// for JSON, file line for CSV) and the offending field.
pub fn parse_records(text: &str, format: Format) -> Result<Vec<EvaluationRecord>> {
    let records = match format {
        Format::Csv => parse_csv(text)?,
        Format::Json => {
            serde_json::from_str::<Vec<EvaluationRecord>>(text).map_err(|e| Error::Parse {
                line: e.line() as u64,
                message: e.to_string(),
            })?
        }
    };

    let mut seen = std::collections::HashSet::new();
    for (i, rec) in records.iter().enumerate() {
        rec.error_rate().map_err(|e| match e {
            Error::Record {
                field,
                value,
                constraint,
                ..
            } => Error::Record {
                index: i + 1,
                field,
                value,
                constraint,
            },
            other => other,
        })?;
        if !seen.insert(rec.key()) {
            let (group, algorithm, demographic) = rec.key();
            return Err(Error::DuplicateKey {
                group: group.into(),
                algorithm: algorithm.into(),
                demographic: demographic.into(),
            });
        }
    }
    Ok(records)
}

fn parse_csv(text: &str) -> Result<Vec<EvaluationRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Ok(Vec::new());
    }
    for (i, col) in header.iter().enumerate() {
        if !CSV_HEADER.contains(&col) {
            return Err(Error::Parse {
                line: 1,
                message: format!("unknown column `{col}`"),
            });
        }
        if CSV_HEADER.get(i) != Some(&col) {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "header must be exactly `{}`, found `{}`",
                    CSV_HEADER.join(","),
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
    }
    if header.len() != CSV_HEADER.len() {
        return Err(Error::Parse {
            line: 1,
            message: format!("missing column `{}`", CSV_HEADER[header.len()]),
        });
    }

    let mut out = Vec::new();
    for row in reader.deserialize::<EvaluationRecord>() {
        let rec = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Writes records in the canonical CSV layout.
pub fn records_to_csv(records: &[EvaluationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.group.clone().unwrap_or_default(),
            r.algorithm.clone(),
            r.demographic.clone(),
            r.kind.to_string(),
            r.value.to_string(),
            r.trials.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Rates of every algorithm on every demographic of one group.
/// Iteration follows first appearance in the input.
pub type Block = IndexMap<String, IndexMap<String, ErrorRate>>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DemographicDataset {
    /// group → algorithm → demographic → rate. Records without a group land
    /// in the block named `""`.
    pub blocks: IndexMap<String, Block>,
}

impl DemographicDataset {
    /// Demographic labels of a block, in first-appearance order.
    pub fn demographics(block: &Block) -> Vec<String> {
        block
            .values()
            .next()
            .map(|d| d.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Flattens back to `error_rate` records.
    pub fn to_records(&self) -> Vec<EvaluationRecord> {
        let mut out = Vec::new();
        for (group, block) in &self.blocks {
            for (algorithm, demos) in block {
                for (demographic, rate) in demos {
                    out.push(EvaluationRecord {
                        group: (!group.is_empty()).then(|| group.clone()),
                        algorithm: algorithm.clone(),
                        demographic: demographic.clone(),
                        kind: EvidenceKind::ErrorRate,
                        value: rate.value(),
                        trials: None,
                    });
                }
            }
        }
        out
    }
}

/// Groups validated records into blocks. Every algorithm in a block must
/// cover the same set of at least two demographics.
pub fn assemble(records: &[EvaluationRecord]) -> Result<DemographicDataset> {
    if records.is_empty() {
        return Err(Error::TooFew {
            required: 2,
            got: 0,
        });
    }
    let mut ds = DemographicDataset::default();
    for rec in records {
        let (group, algorithm, demographic) = rec.key();
        let slot = ds
            .blocks
            .entry(group.to_string())
            .or_default()
            .entry(algorithm.to_string())
            .or_default();
        if slot.contains_key(demographic) {
            return Err(Error::DuplicateKey {
                group: group.into(),
                algorithm: algorithm.into(),
                demographic: demographic.into(),
            });
        }
        slot.insert(demographic.to_string(), rec.error_rate()?);
    }

    for (group, block) in &ds.blocks {
        let reference = DemographicDataset::demographics(block);
        let (first_alg, _) = block.first().expect("blocks are created non-empty");
        if reference.len() < 2 {
            return Err(Error::RaggedBlock {
                group: group.clone(),
                algorithm: first_alg.clone(),
                problem: format!(
                    "has {} demographic(s); at least 2 are required",
                    reference.len()
                ),
            });
        }
        for (algorithm, demos) in block {
            if let Some(missing) = reference.iter().find(|d| !demos.contains_key(*d)) {
                return Err(Error::RaggedBlock {
                    group: group.clone(),
                    algorithm: algorithm.clone(),
                    problem: format!("is missing demographic `{missing}`"),
                });
            }
            if let Some(extra) = demos.keys().find(|d| !reference.contains(d)) {
                return Err(Error::RaggedBlock {
                    group: group.clone(),
                    algorithm: algorithm.clone(),
                    problem: format!("has demographic `{extra}` not covered by `{first_alg}`"),
                });
            }
        }
    }
    Ok(ds)
}
