//! Dispute-tag counting: the TC baseline indicator.
//!
//! TC counts revisions whose text carries at least one configured dispute
//! template, e.g. `{{Disputed}}` or `{{POV|date=May 2009}}`. Which templates
//! mark a dispute differs per language, so the list is configuration, not
//! code. Matching is a plain `{{name` prefix scan; full wiki-markup parsing
//! is out of scope.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::history::PageHistory;

/// Per-language list of dispute templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagConfig {
    language: String,
    templates: Vec<String>,
    /// Lowercased names for the case-insensitive match.
    lowered: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TagConfigError {
    #[error("template list is empty")]
    Empty,
    #[error("template name {0:?} contains braces or a parameter separator")]
    InvalidName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TagError {
    /// The tag count is undefined on fingerprint-only ingests.
    #[error("revision {rev_id} has no text; tag counting needs retained texts")]
    TextUnavailable { rev_id: u64 },
}

impl TagConfig {
    pub fn new(language: &str, templates: Vec<String>) -> Result<Self, TagConfigError> {
        if templates.is_empty() {
            return Err(TagConfigError::Empty);
        }
        let mut lowered = BTreeSet::new();
        for name in &templates {
            let trimmed = name.trim();
            if trimmed.is_empty() || trimmed.contains(['{', '}', '|']) {
                return Err(TagConfigError::InvalidName(name.clone()));
            }
            lowered.insert(trimmed.to_lowercase());
        }
        Ok(Self {
            language: language.to_string(),
            templates,
            lowered,
        })
    }

    /// Parse the config file format: one template name per line, UTF-8,
    /// `#` lines are comments, blank lines ignored.
    pub fn from_lines(language: &str, text: &str) -> Result<Self, TagConfigError> {
        let templates = text
            .lines()
            .map(|line| line.trim())
            .filter(|line| !line.is_empty() && !line.starts_with('#'))
            .map(String::from)
            .collect();
        Self::new(language, templates)
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn templates(&self) -> &[String] {
        &self.templates
    }

    /// Does the text contain any configured template?
    ///
    /// A template occurrence is `{{`, optional whitespace, the name (case
    /// insensitively), optional whitespace, then `|`, `}` or a nested `{`.
    pub fn matches_text(&self, text: &str) -> bool {
        let mut rest = text;
        while let Some(open) = rest.find("{{") {
            rest = &rest[open + 2..];
            let name_end = rest.find(['|', '{', '}']).unwrap_or(rest.len());
            let name = rest[..name_end].trim();
            if !name.is_empty() && self.lowered.contains(&name.to_lowercase()) {
                return true;
            }
        }
        false
    }
}

/// Count the revisions whose text contains at least one configured template.
/// Every revision counts at most once, however many tags it carries.
///
/// Errors when any revision lacks text: TC cannot be computed for that
/// ingest mode.
pub fn count_tags(history: &PageHistory, config: &TagConfig) -> Result<u64, TagError> {
    let mut tagged = 0;
    for rev in &history.revisions {
        let text = rev
            .text
            .as_deref()
            .ok_or(TagError::TextUnavailable { rev_id: rev.rev_id })?;
        if config.matches_text(text) {
            tagged += 1;
        }
    }
    Ok(tagged)
}
