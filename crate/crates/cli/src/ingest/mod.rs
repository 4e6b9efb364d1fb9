//! Streaming ingestion of revision histories.
//!
//! Both parsers buffer exactly one page at a time and hand it off before
//! touching the next, so memory is bounded by the largest single page, never
//! by the dump. The [`IngestGauge`] counts buffered revisions to make that
//! bound assertable in tests.

mod jsonl;
mod xml;

use std::collections::BTreeSet;
use std::io::BufRead;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use editwar_core::history::{fingerprint, EditorId, Fingerprint, PageHistory, RevisionRecord};

pub use jsonl::JsonlPages;
pub use xml::XmlPages;

/// Input formats understood by [`stream_pages`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StreamFormat {
    /// A `pages-meta-history` MediaWiki XML export, already decompressed.
    #[value(name = "mediawiki-xml")]
    MediawikiXml,
    /// One JSON object per revision, page groups contiguous.
    #[value(name = "revlog-jsonl")]
    RevlogJsonl,
}

/// Which namespaces to keep. Defaults to articles only (namespace 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamespaceFilter(Option<BTreeSet<i32>>);

impl NamespaceFilter {
    pub fn all() -> Self {
        Self(None)
    }

    pub fn only<I: IntoIterator<Item = i32>>(namespaces: I) -> Self {
        Self(Some(namespaces.into_iter().collect()))
    }

    /// Articles only.
    pub fn articles() -> Self {
        Self::only([0])
    }

    pub fn accepts(&self, namespace: i32) -> bool {
        match &self.0 {
            None => true,
            Some(set) => set.contains(&namespace),
        }
    }
}

impl Default for NamespaceFilter {
    fn default() -> Self {
        Self::articles()
    }
}

impl FromStr for NamespaceFilter {
    type Err = String;

    /// `all`, or a comma-separated namespace list like `0` or `0,4,14`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            return Ok(Self::all());
        }
        let mut set = BTreeSet::new();
        for part in s.split(',') {
            let ns: i32 = part
                .trim()
                .parse()
                .map_err(|_| format!("invalid namespace {part:?}"))?;
            set.insert(ns);
        }
        if set.is_empty() {
            return Err("namespace list is empty".to_string());
        }
        Ok(Self(Some(set)))
    }
}

/// What to do with a revision that has neither text nor a dump hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingFingerprint {
    /// Keep the revision (it still counts as an edit) but mark it
    /// non-matchable for revert detection.
    #[default]
    Flag,
    /// Fail the ingest.
    Error,
}

/// Counters around the parsers' one-page revision buffer.
///
/// `peak_buffered` against `largest_page` is the memory-bound check: a
/// parser that buffered more than one page at a time would exceed it.
#[derive(Debug, Default)]
pub struct IngestGauge {
    buffered: AtomicU64,
    peak_buffered: AtomicU64,
    largest_page: AtomicU64,
    pages: AtomicU64,
    revisions: AtomicU64,
}

impl IngestGauge {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    fn revision_buffered(&self) {
        let now = self.buffered.fetch_add(1, Ordering::Relaxed) + 1;
        self.peak_buffered.fetch_max(now, Ordering::Relaxed);
    }

    fn page_done(&self, buffered_revisions: u64, emitted: bool) {
        self.buffered.fetch_sub(buffered_revisions, Ordering::Relaxed);
        self.largest_page
            .fetch_max(buffered_revisions, Ordering::Relaxed);
        if emitted {
            self.pages.fetch_add(1, Ordering::Relaxed);
            self.revisions.fetch_add(buffered_revisions, Ordering::Relaxed);
        }
    }

    /// Highest number of revisions ever buffered at once.
    pub fn peak_buffered(&self) -> u64 {
        self.peak_buffered.load(Ordering::Relaxed)
    }

    /// Revision count of the largest page seen.
    pub fn largest_page(&self) -> u64 {
        self.largest_page.load(Ordering::Relaxed)
    }

    /// Pages emitted (after namespace filtering).
    pub fn pages(&self) -> u64 {
        self.pages.load(Ordering::Relaxed)
    }

    /// Revisions emitted.
    pub fn revisions(&self) -> u64 {
        self.revisions.load(Ordering::Relaxed)
    }
}

/// Ingest options shared by both formats.
#[derive(Debug, Clone)]
pub struct StreamOptions {
    pub filter: NamespaceFilter,
    pub missing_fingerprint: MissingFingerprint,
    pub gauge: Arc<IngestGauge>,
}

impl Default for StreamOptions {
    fn default() -> Self {
        Self {
            filter: NamespaceFilter::default(),
            missing_fingerprint: MissingFingerprint::default(),
            gauge: IngestGauge::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed {format} input at byte {offset}{}: {message}", page_suffix(.page))]
    Malformed {
        format: &'static str,
        offset: u64,
        page: Option<String>,
        message: String,
    },
    #[error("revision {rev_id} of page {title:?} has neither text nor a dump-provided hash")]
    FingerprintUnavailable { title: String, rev_id: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn page_suffix(page: &Option<String>) -> String {
    match page {
        Some(page) => format!(" (page {page:?})"),
        None => String::new(),
    }
}

/// Stream one dump, yielding a [`PageHistory`] per page that passes the
/// namespace filter.
pub fn stream_pages<R: BufRead>(
    source: R,
    format: StreamFormat,
    options: StreamOptions,
) -> PageStream<R> {
    match format {
        StreamFormat::MediawikiXml => PageStream::Xml(XmlPages::new(source, options)),
        StreamFormat::RevlogJsonl => PageStream::Jsonl(JsonlPages::new(source, options)),
    }
}

/// Either streaming parser, behind one iterator type.
pub enum PageStream<R: BufRead> {
    Xml(XmlPages<R>),
    Jsonl(JsonlPages<R>),
}

impl<R: BufRead> Iterator for PageStream<R> {
    type Item = Result<PageHistory, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            PageStream::Xml(pages) => pages.next(),
            PageStream::Jsonl(pages) => pages.next(),
        }
    }
}

/// Contributor fields as they appear in a dump.
#[derive(Debug, Clone, Default)]
pub(crate) struct RawEditor {
    pub username: Option<String>,
    pub ip: Option<String>,
    pub deleted: bool,
}

/// A revision as parsed, before fingerprinting.
#[derive(Debug, Clone)]
pub(crate) struct RawRevision {
    pub rev_id: u64,
    pub timestamp: i64,
    pub editor: EditorId,
    pub comment: String,
    pub text: Option<String>,
    pub dump_sha1: Option<String>,
    pub bytes_attr: Option<u64>,
}

/// Turn one buffered page into a [`PageHistory`]: pick the fingerprint
/// source, then sort and number.
///
/// Fingerprints within a page never mix sources. When every revision has
/// text they are all computed locally; otherwise the dump-provided hashes
/// are adopted for the whole page and revisions without one stay
/// non-matchable (or fail, per [`MissingFingerprint`]).
pub(crate) fn finish_page(
    page_id: u64,
    title: String,
    namespace: i32,
    raw: Vec<RawRevision>,
    missing: MissingFingerprint,
) -> Result<PageHistory, IngestError> {
    let all_texts = raw.iter().all(|r| r.text.is_some());
    let mut revisions = Vec::with_capacity(raw.len());
    for rev in raw {
        let print: Option<Fingerprint> = if all_texts {
            Some(fingerprint(rev.text.as_deref().unwrap_or_default().as_bytes()))
        } else {
            rev.dump_sha1.clone().map(Fingerprint::Dump)
        };
        if print.is_none() && rev.text.is_none() && missing == MissingFingerprint::Error {
            return Err(IngestError::FingerprintUnavailable {
                title,
                rev_id: rev.rev_id,
            });
        }
        let text_bytes = rev
            .text
            .as_ref()
            .map(|t| t.len() as u64)
            .or(rev.bytes_attr)
            .unwrap_or(0);
        revisions.push(RevisionRecord {
            page_id,
            rev_id: rev.rev_id,
            ordinal: 0,
            timestamp: rev.timestamp,
            editor: rev.editor,
            comment: rev.comment,
            fingerprint: print,
            text_bytes,
            text: rev.text,
        });
    }
    Ok(PageHistory::assemble(page_id, title, namespace, revisions))
}

pub(crate) fn parse_timestamp(
    value: &str,
    mk_err: impl FnOnce(String) -> IngestError,
) -> Result<i64, IngestError> {
    chrono::DateTime::parse_from_rfc3339(value)
        .map(|dt| dt.timestamp())
        .map_err(|e| mk_err(format!("bad timestamp {value:?}: {e}")))
}
