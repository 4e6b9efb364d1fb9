//! Controversy metrics built on revert events.
//!
//! Every revert is weighted by the *lesser* of the two editors' total edit
//! counts in the article, so vandalism reverts (one side has barely edited)
//! count for little while wars between seasoned editors count a lot. The
//! measures then keep only mutually reverting editor pairs, scale by how
//! many editors are involved, and censor the single heaviest pair so that a
//! feud between two people alone scores zero.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::history::{EditorId, PageHistory};
use crate::revert::RevertEvent;

/// Per-editor total edit counts for one article, full history.
///
/// The count is static per editor per article: it is not truncated to the
/// time of any particular revert.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditorStats(BTreeMap<EditorId, u64>);

impl EditorStats {
    pub fn get(&self, editor: &EditorId) -> Option<u64> {
        self.0.get(editor).copied()
    }

    /// Sum over all editors; equals the page's revision count.
    pub fn total_edits(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn editor_count(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EditorId, u64)> {
        self.0.iter().map(|(editor, &count)| (editor, count))
    }
}

/// Count every revision of the page per editor, reverted and reverting ones
/// included.
pub fn editor_stats(history: &PageHistory) -> EditorStats {
    let mut counts: BTreeMap<EditorId, u64> = BTreeMap::new();
    for rev in &history.revisions {
        *counts.entry(rev.editor.clone()).or_insert(0) += 1;
    }
    EditorStats(counts)
}

/// A revert event annotated with both editors' edit counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedRevert {
    pub reverter: EditorId,
    pub reverted: EditorId,
    /// Total edits of the reverter in this article.
    pub reverter_edits: u64,
    /// Total edits of the reverted editor in this article.
    pub reverted_edits: u64,
    /// `min(reverted_edits, reverter_edits)`.
    pub weight: u64,
}

/// An unordered editor pair with per-direction revert counts.
///
/// `editor_a < editor_b` canonically; a pair appears at all only when it is
/// mutual, i.e. both direction counts are at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutualPairStat {
    pub editor_a: EditorId,
    pub editor_b: EditorId,
    /// Reverts where `editor_a` reverted `editor_b`.
    pub count_ab: u64,
    /// Reverts where `editor_b` reverted `editor_a`.
    pub count_ba: u64,
    /// `min` of the two editors' total edit counts.
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    /// An event names an editor the stats never saw: the event list and the
    /// stats were computed from different histories.
    #[error("editor {0} appears in revert events but not in the edit stats")]
    UnknownEditor(EditorId),
}

fn edits_of(stats: &EditorStats, editor: &EditorId) -> Result<u64, MetricsError> {
    stats
        .get(editor)
        .ok_or_else(|| MetricsError::UnknownEditor(editor.clone()))
}

/// Weight each text-channel revert event by the lesser of the two editors'
/// edit counts. Comment-only events are ignored.
pub fn weight_reverts(
    events: &[RevertEvent],
    stats: &EditorStats,
) -> Result<Vec<WeightedRevert>, MetricsError> {
    let mut weighted = Vec::new();
    for event in events.iter().filter(|e| e.channel.involves_text()) {
        let reverter_edits = edits_of(stats, &event.reverter)?;
        let reverted_edits = edits_of(stats, &event.reverted)?;
        weighted.push(WeightedRevert {
            reverter: event.reverter.clone(),
            reverted: event.reverted.clone(),
            reverter_edits,
            reverted_edits,
            weight: reverted_edits.min(reverter_edits),
        });
    }
    Ok(weighted)
}

/// Collect the unordered editor pairs that reverted each other mutually,
/// from text-channel events. Output is ordered by the canonical pair key.
pub fn mutual_pairs(
    events: &[RevertEvent],
    stats: &EditorStats,
) -> Result<Vec<MutualPairStat>, MetricsError> {
    // counts per canonical pair: (a reverted b, b reverted a)
    let mut directed: BTreeMap<(&EditorId, &EditorId), (u64, u64)> = BTreeMap::new();
    for event in events.iter().filter(|e| e.channel.involves_text()) {
        debug_assert_ne!(event.reverter, event.reverted, "self-revert in event list");
        if event.reverter < event.reverted {
            directed.entry((&event.reverter, &event.reverted)).or_default().0 += 1;
        } else {
            directed.entry((&event.reverted, &event.reverter)).or_default().1 += 1;
        }
    }
    let mut pairs = Vec::new();
    for ((a, b), (count_ab, count_ba)) in directed {
        if count_ab == 0 || count_ba == 0 {
            continue;
        }
        let weight = edits_of(stats, a)?.min(edits_of(stats, b)?);
        pairs.push(MutualPairStat {
            editor_a: a.clone(),
            editor_b: b.clone(),
            count_ab,
            count_ba,
            weight,
        });
    }
    Ok(pairs)
}

/// The controversy measures of one article, all integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ControversyMeasures {
    /// Number of distinct editors appearing in at least one mutual pair.
    pub mutual_editors: u64,
    /// Sum of mutual-pair weights, each unordered pair counted once.
    pub raw_controversy: u64,
    /// `mutual_editors * raw_controversy`: a war with more participants
    /// weighs more.
    pub scaled_controversy: u64,
    /// `mutual_editors * (raw_controversy - heaviest pair weight)`: the
    /// topmost mutually reverting pair is censored, so a conflict between
    /// two persons only scores zero.
    pub controversy: u64,
}

/// The single pair removed by censoring: maximal weight, ties broken by the
/// smallest `(editor_a, editor_b)` so runs are reproducible.
pub fn censored_pair(pairs: &[MutualPairStat]) -> Option<&MutualPairStat> {
    pairs.iter().min_by(|x, y| {
        y.weight
            .cmp(&x.weight)
            .then_with(|| (&x.editor_a, &x.editor_b).cmp(&(&y.editor_a, &y.editor_b)))
    })
}

/// Reduce the mutual pairs of one article to its controversy measures.
/// No pairs means every measure is zero.
pub fn controversy_measures(pairs: &[MutualPairStat]) -> ControversyMeasures {
    let Some(censored) = censored_pair(pairs) else {
        return ControversyMeasures::default();
    };
    let editors: BTreeSet<&EditorId> = pairs
        .iter()
        .flat_map(|p| [&p.editor_a, &p.editor_b])
        .collect();
    let mutual_editors = editors.len() as u64;
    let raw_controversy: u64 = pairs.iter().map(|p| p.weight).sum();
    ControversyMeasures {
        mutual_editors,
        raw_controversy,
        scaled_controversy: mutual_editors * raw_controversy,
        controversy: mutual_editors * (raw_controversy - censored.weight),
    }
}
