//! Revert detection and edit-war scoring for MediaWiki revision histories.
//!
//! The crate works on in-memory [`PageHistory`] values and knows nothing
//! about dump formats or files; ingest layers (see the companion CLI crate)
//! produce the histories. Everything here is deterministic and allocation
//! only: the crate is `no_std` with `alloc`.
//!
//! The pipeline for one article is
//!
//! 1. [`revert::detect_text_reverts`] / [`revert::detect_comment_reverts`]
//!    find revisions that restore an earlier text state, or whose edit
//!    summary announces a revert, then
//! 2. [`metrics`] weights each revert by the edit counts of the two
//!    editors involved, keeps the mutually reverting pairs, and reduces
//!    them to the controversy measures, and
//! 3. [`report::analyze_page`] combines both with the dispute-tag count
//!    into one [`ControversyReport`] row per article.
//!
//! [`eval`] scores ranked reports against manual labels (precision in the
//! top k, threshold sweeps with sampled label rates).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod eval;
pub mod history;
pub mod metrics;
pub mod report;
pub mod revert;
pub mod tags;

pub use eval::{GroundTruth, Indicator, Label};
pub use history::{fingerprint, EditorId, Fingerprint, PageHistory, RevisionRecord};
pub use metrics::{ControversyMeasures, EditorStats, MutualPairStat, WeightedRevert};
pub use report::{analyze_page, full_report, ControversyReport, PageAnalysis, DEFAULT_THRESHOLD};
pub use revert::{CommentMatcher, RevertChannel, RevertEvent, RevertSummary};
pub use tags::TagConfig;
