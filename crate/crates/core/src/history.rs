//! Domain types for one article's revision history.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use sha2::{Digest, Sha256};

/// Identity of the author of a revision.
///
/// Two values are the same editor iff they are structurally equal. Suppressed
/// contributors carry a serial instead of a name, so no two of them ever
/// compare equal: a hidden user must not be mistaken for a returning one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditorId {
    /// Logged-in account, identified by username.
    Registered(String),
    /// Unregistered editor, identified by IP literal.
    Anonymous(String),
    /// Suppressed or absent contributor; the serial is minted by the ingest.
    Unknown(u64),
}

impl fmt::Display for EditorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditorId::Registered(name) => write!(f, "registered:{name}"),
            EditorId::Anonymous(ip) => write!(f, "anonymous:{ip}"),
            EditorId::Unknown(serial) => write!(f, "suppressed:#{serial}"),
        }
    }
}

/// Source of fresh serials for suppressed contributors.
///
/// One counter per ingested stream keeps the minted [`EditorId::Unknown`]
/// values distinct from each other.
#[derive(Debug, Clone, Default)]
pub struct UnknownEditors {
    next: u64,
}

impl UnknownEditors {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mint a suppressed-contributor id that equals no previously minted one.
    pub fn mint(&mut self) -> EditorId {
        let id = EditorId::Unknown(self.next);
        self.next += 1;
        id
    }
}

/// Error from contributor parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContributorError {
    #[error("contributor carries both a username ({username:?}) and an ip ({ip:?})")]
    UsernameAndIp { username: String, ip: String },
}

/// Map raw contributor fields onto an [`EditorId`].
///
/// A username makes a registered editor, an ip an anonymous one; a deleted
/// or absent contributor becomes a fresh unknown singleton. Username and ip
/// together are malformed input.
pub fn parse_editor(
    username: Option<&str>,
    ip: Option<&str>,
    deleted: bool,
    unknown: &mut UnknownEditors,
) -> Result<EditorId, ContributorError> {
    match (username, ip) {
        (Some(username), Some(ip)) => Err(ContributorError::UsernameAndIp {
            username: String::from(username),
            ip: String::from(ip),
        }),
        _ if deleted => Ok(unknown.mint()),
        (Some(username), None) => Ok(EditorId::Registered(String::from(username))),
        (None, Some(ip)) => Ok(EditorId::Anonymous(String::from(ip))),
        (None, None) => Ok(unknown.mint()),
    }
}

/// Identity of one revision's exact text bytes.
///
/// Equal fingerprints mean byte-identical text; there is no normalization of
/// any kind. Within one page all fingerprints come from the same source
/// (either all computed locally or all taken from the dump), so the two
/// variants never get compared in a meaningful position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fingerprint {
    /// SHA-256 of the revision text, computed at ingest time.
    Content([u8; 32]),
    /// Content hash supplied by the dump itself (base36 SHA-1 in MediaWiki
    /// exports), adopted verbatim.
    Dump(String),
}

/// Digest the exact bytes of a revision text.
pub fn fingerprint(text: &[u8]) -> Fingerprint {
    Fingerprint::Content(Sha256::digest(text).into())
}

/// One revision's metadata plus its content fingerprint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionRecord {
    pub page_id: u64,
    pub rev_id: u64,
    /// 0-based position within the page history, assigned after sorting.
    pub ordinal: usize,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub editor: EditorId,
    /// Edit summary; empty when none was given or it was suppressed.
    pub comment: String,
    /// `None` when the text was suppressed and the dump supplied no hash.
    /// Such revisions still count as edits but can never match another
    /// revision's text.
    pub fingerprint: Option<Fingerprint>,
    /// Byte length of the revision text.
    pub text_bytes: u64,
    /// Full revision text, when the ingest retained it. Tag counting needs
    /// it; revert detection does not.
    pub text: Option<String>,
}

/// Ordered revision sequence of one article; the unit of analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageHistory {
    pub page_id: u64,
    pub title: String,
    pub namespace: i32,
    /// Sorted by `(timestamp, rev_id)` ascending, ordinals consecutive
    /// from 0.
    pub revisions: Vec<RevisionRecord>,
}

impl PageHistory {
    /// Build a history from revisions in arbitrary order.
    ///
    /// Sorts by `(timestamp, rev_id)`, then assigns ordinals and stamps the
    /// page id on every record. Dumps occasionally deliver revisions out of
    /// order; everything downstream assumes the sorted sequence.
    pub fn assemble(
        page_id: u64,
        title: String,
        namespace: i32,
        mut revisions: Vec<RevisionRecord>,
    ) -> Self {
        revisions.sort_by_key(|rev| (rev.timestamp, rev.rev_id));
        for (ordinal, rev) in revisions.iter_mut().enumerate() {
            rev.ordinal = ordinal;
            rev.page_id = page_id;
        }
        Self {
            page_id,
            title,
            namespace,
            revisions,
        }
    }
}
