//! Per-language configuration: revert comment patterns and dispute tags.
//!
//! Both are data files, one entry per line with `#` comments. English
//! defaults ship embedded in the binary; other languages come from files
//! passed on the command line.

use std::fs;
use std::path::Path;

use editwar_core::revert::CommentMatcher;
use editwar_core::tags::{TagConfig, TagConfigError};
use regex::Regex;

const EN_PATTERNS: &str = include_str!("../config/en.patterns");
const EN_TAGS: &str = include_str!("../config/en.tags");

/// Languages with embedded defaults.
pub const EMBEDDED_LANGUAGES: &[&str] = &["en"];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("no embedded {what} for language {language:?}; pass a config file (available: {})", EMBEDDED_LANGUAGES.join(", "))]
    UnknownLanguage { language: String, what: &'static str },
    #[error("pattern file line {line}: {source}")]
    BadPattern { line: usize, source: regex::Error },
    #[error("pattern set is empty")]
    EmptyPatternSet,
    #[error("invalid tag config: {0}")]
    Tags(#[from] TagConfigError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn read(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Compiled edit-summary patterns; a comment matches when any regex does.
#[derive(Debug, Clone)]
pub struct CommentPatternSet {
    patterns: Vec<Regex>,
}

impl CommentPatternSet {
    /// Parse the file format: one regex per line, `#` lines are comments.
    /// Only the line terminator is stripped, so patterns may carry
    /// significant leading or trailing characters.
    pub fn from_lines(text: &str) -> Result<Self, ConfigError> {
        let mut patterns = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let regex = Regex::new(line).map_err(|source| ConfigError::BadPattern {
                line: idx + 1,
                source,
            })?;
            patterns.push(regex);
        }
        if patterns.is_empty() {
            return Err(ConfigError::EmptyPatternSet);
        }
        Ok(Self { patterns })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        Self::from_lines(&read(path)?)
    }

    /// The embedded default set for a language code.
    pub fn for_language(language: &str) -> Result<Self, ConfigError> {
        match language {
            "en" => Self::from_lines(EN_PATTERNS),
            other => Err(ConfigError::UnknownLanguage {
                language: other.to_string(),
                what: "comment patterns",
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

impl CommentMatcher for CommentPatternSet {
    fn is_match(&self, comment: &str) -> bool {
        self.patterns.iter().any(|p| p.is_match(comment))
    }
}

/// The embedded default tag list for a language code.
pub fn tags_for_language(language: &str) -> Result<TagConfig, ConfigError> {
    match language {
        "en" => Ok(TagConfig::from_lines("en", EN_TAGS)?),
        other => Err(ConfigError::UnknownLanguage {
            language: other.to_string(),
            what: "dispute tags",
        }),
    }
}

/// Tag config from a file, language recorded as given.
pub fn tags_from_file(language: &str, path: &Path) -> Result<TagConfig, ConfigError> {
    Ok(TagConfig::from_lines(language, &read(path)?)?)
}
