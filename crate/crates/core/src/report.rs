//! Per-article report composition: detection, metrics and tag count in one
//! row, plus the revert-map export behind the scatter figures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::history::{EditorId, PageHistory};
use crate::metrics::{
    self, controversy_measures, editor_stats, EditorStats, MetricsError, MutualPairStat,
    WeightedRevert,
};
use crate::revert::{
    detect_comment_reverts, detect_text_reverts, merge_channels, CommentMatcher, RevertEvent,
    RevertSummary,
};
use crate::tags::{count_tags, TagConfig, TagError};

/// Default cutoff above which an article counts as controversial.
pub const DEFAULT_THRESHOLD: u64 = 1000;

/// Per-article metric vector. One row of the analysis output.
///
/// The serialized field names (`E`, `M_r`, `M_i`, `M`, `TC`) are the output
/// schema; they stay stable so reports round-trip through files.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControversyReport {
    pub title: String,
    pub page_id: u64,
    pub n_edits: u64,
    pub n_editors: u64,
    /// Text-channel revert events.
    pub n_reverts: u64,
    /// Text-channel revert events inside a mutual pair.
    pub n_mutual_reverts: u64,
    /// Editors involved in at least one mutual pair.
    #[cfg_attr(feature = "serde", serde(rename = "E"))]
    pub mutual_editors: u64,
    /// Sum of mutual-pair weights.
    #[cfg_attr(feature = "serde", serde(rename = "M_r"))]
    pub raw_controversy: u64,
    #[cfg_attr(feature = "serde", serde(rename = "M_i"))]
    pub scaled_controversy: u64,
    /// The final measure; the ranking key.
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub controversy: u64,
    #[cfg_attr(feature = "serde", serde(rename = "TC"))]
    pub tag_count: u64,
    /// `controversy > threshold`, strict.
    pub controversial: bool,
}

/// Everything computed for one page; [`full_report`] keeps only the report
/// row, the revert-map export needs the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageAnalysis {
    pub report: ControversyReport,
    pub summary: RevertSummary,
    /// Merged text + comment events, ordered by reverting revision.
    pub events: Vec<RevertEvent>,
    pub weighted: Vec<WeightedRevert>,
    pub mutual: Vec<MutualPairStat>,
    pub stats: EditorStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Tags(#[from] TagError),
}

/// Run the full per-page pipeline.
pub fn analyze_page(
    history: &PageHistory,
    patterns: &impl CommentMatcher,
    tags: &TagConfig,
    threshold: u64,
) -> Result<PageAnalysis, AnalysisError> {
    let stats = editor_stats(history);
    let text_events = detect_text_reverts(history);
    let comment_events = detect_comment_reverts(history, patterns);
    let (events, summary) = merge_channels(text_events, comment_events);

    let weighted = metrics::weight_reverts(&events, &stats)?;
    let mutual = metrics::mutual_pairs(&events, &stats)?;
    let measures = controversy_measures(&mutual);
    let tag_count = count_tags(history, tags)?;

    let n_reverts = events.iter().filter(|e| e.channel.involves_text()).count() as u64;
    let n_mutual_reverts = mutual.iter().map(|p| p.count_ab + p.count_ba).sum();

    let report = ControversyReport {
        title: history.title.clone(),
        page_id: history.page_id,
        n_edits: stats.total_edits(),
        n_editors: stats.editor_count() as u64,
        n_reverts,
        n_mutual_reverts,
        mutual_editors: measures.mutual_editors,
        raw_controversy: measures.raw_controversy,
        scaled_controversy: measures.scaled_controversy,
        controversy: measures.controversy,
        tag_count,
        controversial: measures.controversy > threshold,
    };
    Ok(PageAnalysis {
        report,
        summary,
        events,
        weighted,
        mutual,
        stats,
    })
}

/// [`analyze_page`], keeping only the report row.
pub fn full_report(
    history: &PageHistory,
    patterns: &impl CommentMatcher,
    tags: &TagConfig,
    threshold: u64,
) -> Result<ControversyReport, AnalysisError> {
    analyze_page(history, patterns, tags, threshold).map(|analysis| analysis.report)
}

/// One mark of a revert map: how many reverts happened at the coordinate
/// (reverted editor's edit count, reverter's edit count).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RevertMapRow {
    /// Total edits of the reverted editor.
    pub n_d: u64,
    /// Total edits of the reverter.
    pub n_r: u64,
    /// Reverts at this coordinate.
    pub multiplicity: u64,
    /// The reverts happened inside a mutually reverting pair.
    pub mutual_only: bool,
}

/// Aggregate a page's weighted reverts into map rows, optionally keeping
/// only reverts within mutual pairs. Rows come out ordered by coordinate.
pub fn revert_map(
    weighted: &[WeightedRevert],
    mutual: &[MutualPairStat],
    mutual_only: bool,
) -> Vec<RevertMapRow> {
    let mutual_keys: BTreeSet<(&EditorId, &EditorId)> = mutual
        .iter()
        .map(|p| (&p.editor_a, &p.editor_b))
        .collect();
    let mut buckets: BTreeMap<(u64, u64, bool), u64> = BTreeMap::new();
    for revert in weighted {
        let key = if revert.reverter < revert.reverted {
            (&revert.reverter, &revert.reverted)
        } else {
            (&revert.reverted, &revert.reverter)
        };
        let is_mutual = mutual_keys.contains(&key);
        if mutual_only && !is_mutual {
            continue;
        }
        *buckets
            .entry((revert.reverted_edits, revert.reverter_edits, is_mutual))
            .or_insert(0) += 1;
    }
    buckets
        .into_iter()
        .map(|((n_d, n_r, is_mutual), multiplicity)| RevertMapRow {
            n_d,
            n_r,
            multiplicity,
            mutual_only: is_mutual,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::{fingerprint, RevisionRecord};
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn tag_config() -> TagConfig {
        TagConfig::new("en", vec!["Disputed".to_string()]).unwrap()
    }

    fn no_comments(_: &str) -> bool {
        false
    }

    fn history(revisions: &[(&str, &str)]) -> PageHistory {
        let revisions = revisions
            .iter()
            .enumerate()
            .map(|(i, (editor, text))| RevisionRecord {
                page_id: 9,
                rev_id: i as u64,
                ordinal: 0,
                timestamp: i as i64,
                editor: EditorId::Registered(String::from(*editor)),
                comment: String::new(),
                fingerprint: Some(fingerprint(text.as_bytes())),
                text_bytes: text.len() as u64,
                text: Some(String::from(*text)),
            })
            .collect();
        PageHistory::assemble(9, "Sample".to_string(), 0, revisions)
    }

    #[test]
    fn empty_history_is_an_all_zero_report() {
        let report = full_report(&history(&[]), &no_comments, &tag_config(), 1000).unwrap();
        assert_eq!(report.n_edits, 0);
        assert_eq!(report.n_reverts, 0);
        assert_eq!(report.controversy, 0);
        assert!(!report.controversial);
    }

    #[test]
    fn threshold_is_strict() {
        // Engineer M = 1000: two pairs over 4 editors, smaller weight 250.
        // M = 4 * (sum - max) = 4 * 250.
        let mut revisions: Vec<(&'static str, &'static str)> = Vec::new();
        // a <-> b mutual with both editors beyond 250 edits; c <-> d at 250.
        revisions.extend([("a", "t0"), ("b", "t1"), ("a", "t0"), ("b", "t1")]);
        revisions.extend([("c", "u0"), ("d", "u1"), ("c", "u0"), ("d", "u1")]);
        let mut h = history(&revisions);
        // pad editor edit counts with unique texts
        let pad = |h: &mut PageHistory, editor: &str, n: usize, salt: &str| {
            let start = h.revisions.len();
            for k in 0..n {
                let text = alloc::format!("pad-{salt}-{k}");
                h.revisions.push(RevisionRecord {
                    page_id: 9,
                    rev_id: (start + k) as u64,
                    ordinal: start + k,
                    timestamp: (start + k) as i64,
                    editor: EditorId::Registered(editor.to_string()),
                    comment: String::new(),
                    fingerprint: Some(fingerprint(text.as_bytes())),
                    text_bytes: text.len() as u64,
                    text: Some(text),
                });
            }
        };
        pad(&mut h, "a", 300, "a");
        pad(&mut h, "b", 300, "b");
        pad(&mut h, "c", 248, "c");
        pad(&mut h, "d", 248, "d");
        let report = full_report(&h, &no_comments, &tag_config(), 1000).unwrap();
        assert_eq!(report.raw_controversy, 302 + 250);
        assert_eq!(report.controversy, 1000);
        assert!(!report.controversial, "M = 1000 exactly is not above the cutoff");

        let again = full_report(&h, &no_comments, &tag_config(), 999).unwrap();
        assert!(again.controversial);
    }

    #[test]
    fn mutual_revert_count_covers_both_directions() {
        let h = history(&[
            ("a", "A"),
            ("b", "B"),
            ("a", "A"),
            ("b", "B"),
            ("a", "A"),
        ]);
        let analysis = analyze_page(&h, &no_comments, &tag_config(), 1000).unwrap();
        assert_eq!(analysis.report.n_reverts, 3);
        assert_eq!(analysis.report.n_mutual_reverts, 3);
        assert_eq!(analysis.report.mutual_editors, 2);
    }

    #[test]
    fn revert_map_groups_by_coordinate() {
        let h = history(&[
            ("a", "A"),
            ("b", "B"),
            ("a", "A"),
            ("b", "B"),
            ("a", "A"),
            ("c", "C"),
            ("a", "A"),
        ]);
        let analysis = analyze_page(&h, &no_comments, &tag_config(), 1000).unwrap();
        let rows = revert_map(&analysis.weighted, &analysis.mutual, false);
        let total: u64 = rows.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, analysis.report.n_reverts);
        assert!(rows.windows(2).all(|w| (w[0].n_d, w[0].n_r) <= (w[1].n_d, w[1].n_r)));

        let mutual_rows = revert_map(&analysis.weighted, &analysis.mutual, true);
        let mutual_total: u64 = mutual_rows.iter().map(|r| r.multiplicity).sum();
        assert_eq!(mutual_total, analysis.report.n_mutual_reverts);
        assert!(mutual_rows.iter().all(|r| r.mutual_only));
    }

    #[test]
    fn one_directional_page_has_empty_mutual_map() {
        let h = history(&[("a", "A"), ("b", "B"), ("a", "A")]);
        let analysis = analyze_page(&h, &no_comments, &tag_config(), 1000).unwrap();
        assert_eq!(analysis.report.n_reverts, 1);
        assert!(revert_map(&analysis.weighted, &analysis.mutual, true).is_empty());
        assert_eq!(revert_map(&analysis.weighted, &analysis.mutual, false).len(), 1);
    }
}
