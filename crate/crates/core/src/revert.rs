//! Revert detection over a page history.
//!
//! A revert exists where the text of revision `j` coincides with the text of
//! an earlier revision: whoever saved `j` undid everything back to that
//! state. The text channel finds these by fingerprint equality; the comment
//! channel independently flags revisions whose edit summary announces a
//! revert. Both channels are merged per revision for reporting, but only
//! text-channel events feed the controversy metrics — text identity is the
//! one precisely defined signal.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::history::{EditorId, Fingerprint, PageHistory};

/// How a revert event was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RevertChannel {
    /// Text restored an earlier state; no matching edit summary.
    TextOnly,
    /// Edit summary matched a revert pattern; no text match.
    CommentOnly,
    /// Both channels fired on the same revision.
    Both,
}

impl RevertChannel {
    /// True for the events that feed metrics (the text state really moved
    /// back; comment-only events are statistics only).
    pub fn involves_text(self) -> bool {
        !matches!(self, RevertChannel::CommentOnly)
    }
}

/// A detected (reverter, reverted) incident.
///
/// `j_ordinal` is the reverting revision, `i_ordinal` the revision whose
/// author got reverted — the first revision after the restored state. For
/// comment-only events no restored state exists, so `i_ordinal` is
/// `j_ordinal - 1` by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevertEvent {
    pub reverter: EditorId,
    pub reverted: EditorId,
    pub j_ordinal: usize,
    pub i_ordinal: usize,
    pub channel: RevertChannel,
    pub timestamp_j: i64,
}

/// Per-page tally of the detection channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RevertSummary {
    pub n_both: u64,
    pub n_text_only: u64,
    pub n_comment_only: u64,
}

impl RevertSummary {
    /// Reverts visible in the text channel (both + text-only).
    pub fn text_total(&self) -> u64 {
        self.n_both + self.n_text_only
    }

    pub fn total(&self) -> u64 {
        self.n_both + self.n_text_only + self.n_comment_only
    }
}

/// Decides whether an edit summary announces a revert.
///
/// The pattern data lives with the ingest layer (it is per-language
/// configuration); detection only needs the yes/no answer.
pub trait CommentMatcher {
    fn is_match(&self, comment: &str) -> bool;
}

impl<F: Fn(&str) -> bool> CommentMatcher for F {
    fn is_match(&self, comment: &str) -> bool {
        self(comment)
    }
}

/// Detect identity reverts: revision `j` whose fingerprint equals that of an
/// earlier revision.
///
/// For each `j` the nearest earlier match `i-1` is taken, so the revert is
/// attributed to the most recently overwritten change. The event pairs the
/// editor of `j` against the editor of `i`, the revision right after the
/// restored state. Nothing is emitted when
///
/// - the nearest match is `j-1` itself (saving an identical text twice
///   restores nothing), or
/// - editor(`j`) equals editor(`i`) (self-reverts are excluded), or
/// - the revision has no fingerprint (suppressed text, nothing to match).
///
/// Events come out ordered by `j_ordinal`, at most one per revision.
pub fn detect_text_reverts(history: &PageHistory) -> Vec<RevertEvent> {
    let mut last_seen: BTreeMap<&Fingerprint, usize> = BTreeMap::new();
    let mut events = Vec::new();
    for (j, rev) in history.revisions.iter().enumerate() {
        let Some(fp) = rev.fingerprint.as_ref() else {
            continue;
        };
        if let Some(&matched) = last_seen.get(fp) {
            // matched is i-1; the reverted revision i follows it
            let i = matched + 1;
            if i < j {
                let reverted = &history.revisions[i];
                if reverted.editor != rev.editor {
                    events.push(RevertEvent {
                        reverter: rev.editor.clone(),
                        reverted: reverted.editor.clone(),
                        j_ordinal: j,
                        i_ordinal: i,
                        channel: RevertChannel::TextOnly,
                        timestamp_j: rev.timestamp,
                    });
                }
            }
        }
        last_seen.insert(fp, j);
    }
    events
}

/// Detect reverts announced in edit summaries.
///
/// A revision whose comment matches is taken to revert its immediate
/// predecessor; the first revision of a page and self-reverts are skipped.
pub fn detect_comment_reverts(
    history: &PageHistory,
    patterns: &impl CommentMatcher,
) -> Vec<RevertEvent> {
    let mut events = Vec::new();
    for (j, rev) in history.revisions.iter().enumerate().skip(1) {
        if !patterns.is_match(&rev.comment) {
            continue;
        }
        let previous = &history.revisions[j - 1];
        if previous.editor == rev.editor {
            continue;
        }
        events.push(RevertEvent {
            reverter: rev.editor.clone(),
            reverted: previous.editor.clone(),
            j_ordinal: j,
            i_ordinal: j - 1,
            channel: RevertChannel::CommentOnly,
            timestamp_j: rev.timestamp,
        });
    }
    events
}

/// Merge the two channels of one page into a single event list plus the
/// channel tally.
///
/// Events sharing `j_ordinal` collapse into one `Both` event that keeps the
/// text event's reverter, reverted and `i_ordinal` — the text channel knows
/// which state was restored, the comment channel only guesses. The merged
/// list is ordered by `j_ordinal`.
pub fn merge_channels(
    text_events: Vec<RevertEvent>,
    comment_events: Vec<RevertEvent>,
) -> (Vec<RevertEvent>, RevertSummary) {
    let mut by_revision: BTreeMap<usize, RevertEvent> = text_events
        .into_iter()
        .map(|event| (event.j_ordinal, event))
        .collect();
    for comment_event in comment_events {
        match by_revision.entry(comment_event.j_ordinal) {
            alloc::collections::btree_map::Entry::Occupied(mut merged) => {
                merged.get_mut().channel = RevertChannel::Both;
            }
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(comment_event);
            }
        }
    }
    let mut summary = RevertSummary::default();
    let events: Vec<RevertEvent> = by_revision.into_values().collect();
    for event in &events {
        match event.channel {
            RevertChannel::Both => summary.n_both += 1,
            RevertChannel::TextOnly => summary.n_text_only += 1,
            RevertChannel::CommentOnly => summary.n_comment_only += 1,
        }
    }
    (events, summary)
}
