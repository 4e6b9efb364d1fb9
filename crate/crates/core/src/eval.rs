//! Evaluation of ranking indicators against manual labels.
//!
//! Reports are ranked by one indicator at a time; precision in the top `k`
//! scores the indicator against a binary ground truth. The threshold sweep
//! estimates how many controversial pages exist above each cutoff from a
//! seeded random sample of labels, the way one validates a measure when the
//! full population is far too large to label.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::ControversyReport;

/// Manual binary classification of one article.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Controversial,
    Noncontroversial,
}

/// Title -> label map; titles are unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth(BTreeMap<String, Label>);

impl GroundTruth {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, title: String, label: Label) -> Result<(), EvalError> {
        if self.0.contains_key(&title) {
            return Err(EvalError::DuplicateTitle(title));
        }
        self.0.insert(title, label);
        Ok(())
    }

    pub fn get(&self, title: &str) -> Option<Label> {
        self.0.get(title).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse the truth file format: one `title<TAB>label` per line, label
    /// `c` (controversial) or `n` (noncontroversial), UTF-8. Blank lines are
    /// ignored; there is no header row.
    pub fn parse_tsv(text: &str) -> Result<Self, EvalError> {
        let mut truth = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            let Some((title, label)) = line.split_once('\t') else {
                return Err(EvalError::TruthBadLine { line: idx + 1 });
            };
            let label = match label.trim() {
                "c" => Label::Controversial,
                "n" => Label::Noncontroversial,
                other => {
                    return Err(EvalError::TruthBadLabel {
                        line: idx + 1,
                        label: other.to_string(),
                    })
                }
            };
            truth.insert(title.to_string(), label)?;
        }
        Ok(truth)
    }
}

/// The seven ranking indicators compared in the evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    Edits,
    Reverts,
    MutualReverts,
    RawControversy,
    ScaledControversy,
    TagCount,
    Controversy,
}

impl Indicator {
    /// All indicators, in the output column order.
    pub const ALL: [Indicator; 7] = [
        Indicator::Edits,
        Indicator::Reverts,
        Indicator::MutualReverts,
        Indicator::RawControversy,
        Indicator::ScaledControversy,
        Indicator::TagCount,
        Indicator::Controversy,
    ];

    /// The report column this indicator ranks by.
    pub fn value(self, report: &ControversyReport) -> u64 {
        match self {
            Indicator::Edits => report.n_edits,
            Indicator::Reverts => report.n_reverts,
            Indicator::MutualReverts => report.n_mutual_reverts,
            Indicator::RawControversy => report.raw_controversy,
            Indicator::ScaledControversy => report.scaled_controversy,
            Indicator::TagCount => report.tag_count,
            Indicator::Controversy => report.controversy,
        }
    }

    /// Stable name, matching the report schema.
    pub fn name(self) -> &'static str {
        match self {
            Indicator::Edits => "n_edits",
            Indicator::Reverts => "n_reverts",
            Indicator::MutualReverts => "n_mutual_reverts",
            Indicator::RawControversy => "M_r",
            Indicator::ScaledControversy => "M_i",
            Indicator::TagCount => "TC",
            Indicator::Controversy => "M",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("need at least {k} reports, have {available}")]
    InsufficientReports { available: usize, k: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("sample size must be at least 1")]
    ZeroSampleSize,
    #[error("thresholds must be strictly ascending")]
    ThresholdsNotAscending,
    #[error("titles missing from the ground truth: {}", .0.join(", "))]
    UnlabeledTitles(Vec<String>),
    #[error("duplicate title in ground truth: {0:?}")]
    DuplicateTitle(String),
    #[error("truth line {line}: expected title<TAB>label")]
    TruthBadLine { line: usize },
    #[error("truth line {line}: label {label:?} is neither \"c\" nor \"n\"")]
    TruthBadLabel { line: usize, label: String },
}

/// Precision of one indicator's top-`k` ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionAtK {
    /// Articles labeled controversial among the top `k`.
    pub hits: u64,
    /// `hits / k`.
    pub precision: f64,
}

/// Rank reports by `indicator` descending (ties by title ascending) and
/// count labeled-controversial articles among the top `k`.
///
/// Every top-`k` title must be labeled; missing labels are an error, never a
/// silent skip.
pub fn precision_at_k(
    reports: &[ControversyReport],
    truth: &GroundTruth,
    indicator: Indicator,
    k: usize,
) -> Result<PrecisionAtK, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    if reports.len() < k {
        return Err(EvalError::InsufficientReports {
            available: reports.len(),
            k,
        });
    }
    let mut order: Vec<&ControversyReport> = reports.iter().collect();
    order.sort_by(|a, b| {
        indicator
            .value(b)
            .cmp(&indicator.value(a))
            .then_with(|| a.title.cmp(&b.title))
    });
    let top = &order[..k];
    let unlabeled: Vec<String> = top
        .iter()
        .filter(|r| truth.get(&r.title).is_none())
        .map(|r| r.title.clone())
        .collect();
    if !unlabeled.is_empty() {
        return Err(EvalError::UnlabeledTitles(unlabeled));
    }
    let hits = top
        .iter()
        .filter(|r| truth.get(&r.title) == Some(Label::Controversial))
        .count() as u64;
    Ok(PrecisionAtK {
        hits,
        precision: hits as f64 / k as f64,
    })
}

/// One row of the threshold sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepRow {
    /// The M cutoff of this row.
    #[cfg_attr(feature = "serde", serde(rename = "M_threshold"))]
    pub threshold: u64,
    /// Noncontroversial labels in the sample.
    pub n: u64,
    /// Controversial labels in the sample.
    pub c: u64,
    /// Reports with M strictly above the threshold.
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    pub total_above: u64,
    /// Percentage of controversial labels in the sample.
    #[cfg_attr(feature = "serde", serde(rename = "pct_c"))]
    pub pct_controversial: f64,
    /// `round(T * c / sample size)`: estimated controversial pages above
    /// the threshold.
    #[cfg_attr(feature = "serde", serde(rename = "C_estimate"))]
    pub estimated_controversial: u64,
    /// Fewer than `sample_size` reports were above the threshold, so the
    /// whole population was used instead of a sample.
    pub short_sample: bool,
}

/// For each threshold, draw a seeded uniform sample (without replacement)
/// from the reports with `M` above it, look the sampled titles up in the
/// truth, and extrapolate the controversial share to the population.
///
/// A single ChaCha stream seeded with `seed` drives all rows in order, so a
/// fixed seed makes the whole table reproducible bit for bit. Candidate sets
/// are canonically ordered by title before sampling for the same reason.
pub fn threshold_sweep(
    reports: &[ControversyReport],
    truth: &GroundTruth,
    thresholds: &[u64],
    sample_size: usize,
    seed: u64,
) -> Result<Vec<SweepRow>, EvalError> {
    if sample_size == 0 {
        return Err(EvalError::ZeroSampleSize);
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::ThresholdsNotAscending);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(thresholds.len());
    for &threshold in thresholds {
        let mut above: Vec<&ControversyReport> = reports
            .iter()
            .filter(|r| r.controversy > threshold)
            .collect();
        above.sort_by(|a, b| a.title.cmp(&b.title));
        let total_above = above.len();

        let sampled: Vec<&ControversyReport> = if total_above <= sample_size {
            above.clone()
        } else {
            rand::seq::index::sample(&mut rng, total_above, sample_size)
                .into_iter()
                .map(|i| above[i])
                .collect()
        };

        let unlabeled: Vec<String> = sampled
            .iter()
            .filter(|r| truth.get(&r.title).is_none())
            .map(|r| r.title.clone())
            .collect();
        if !unlabeled.is_empty() {
            return Err(EvalError::UnlabeledTitles(unlabeled));
        }

        let c = sampled
            .iter()
            .filter(|r| truth.get(&r.title) == Some(Label::Controversial))
            .count() as u64;
        let n = sampled.len() as u64 - c;
        let sample_len = sampled.len() as u64;
        let (pct_controversial, estimated_controversial) = if sample_len == 0 {
            (0.0, 0)
        } else {
            // round(T * c / sample) in integer arithmetic, half away from zero
            let estimate = (2 * total_above as u128 * c as u128 + sample_len as u128)
                / (2 * sample_len as u128);
            (100.0 * c as f64 / sample_len as f64, estimate as u64)
        };
        rows.push(SweepRow {
            threshold,
            n,
            c,
            total_above: total_above as u64,
            pct_controversial,
            estimated_controversial,
            short_sample: total_above < sample_size,
        });
    }
    Ok(rows)
}

/// One point of the tag-count vs. M scatter.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScatterRow {
    pub title: String,
    #[cfg_attr(feature = "serde", serde(rename = "TC"))]
    pub tag_count: u64,
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub controversy: u64,
}

/// One row per report, ordered by M descending (ties by title) for direct
/// plotting.
pub fn scatter_export(reports: &[ControversyReport]) -> Vec<ScatterRow> {
    let mut rows: Vec<ScatterRow> = reports
        .iter()
        .map(|r| ScatterRow {
            title: r.title.clone(),
            tag_count: r.tag_count,
            controversy: r.controversy,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.controversy
            .cmp(&a.controversy)
            .then_with(|| a.title.cmp(&b.title))
    });
    rows
}
