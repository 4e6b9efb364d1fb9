//! The `revlog-jsonl` test format: one JSON object per revision, LF
//! terminated, revisions of one page on contiguous lines.
//!
//! The format exists so tests and small experiments never need XML
//! fixtures. Schema per line:
//!
//! ```json
//! {"page_id":1,"title":"T","ns":0,"rev_id":10,"timestamp":"2009-11-01T00:00:00Z",
//!  "editor":{"kind":"registered","name":"Alice"},"comment":"","text":"..."}
//! ```
//!
//! `editor.kind` is `registered`, `anonymous` or `unknown`; an unknown
//! editor is a fresh singleton every time and its `name` is ignored. A
//! `null` text marks a suppressed revision.

use std::io::BufRead;

use editwar_core::history::{EditorId, PageHistory, UnknownEditors};
use serde::Deserialize;

use super::{finish_page, IngestError, RawRevision, StreamOptions};

#[derive(Debug, Deserialize)]
struct RevLine {
    page_id: u64,
    title: String,
    ns: i32,
    rev_id: u64,
    timestamp: String,
    editor: EditorField,
    #[serde(default)]
    comment: String,
    text: Option<String>,
}

#[derive(Debug, Deserialize)]
struct EditorField {
    kind: String,
    #[serde(default)]
    name: String,
}

struct OpenPage {
    page_id: u64,
    title: String,
    namespace: i32,
    raw: Vec<RawRevision>,
}

pub struct JsonlPages<R: BufRead> {
    source: R,
    options: StreamOptions,
    unknown: UnknownEditors,
    line: String,
    /// Byte offset of the start of the current line.
    offset: u64,
    line_no: u64,
    current: Option<OpenPage>,
    /// Page id of a group being skipped by the namespace filter.
    skipping: Option<u64>,
    finished: bool,
}

impl<R: BufRead> JsonlPages<R> {
    pub fn new(source: R, options: StreamOptions) -> Self {
        Self {
            source,
            options,
            unknown: UnknownEditors::new(),
            line: String::new(),
            offset: 0,
            line_no: 0,
            current: None,
            skipping: None,
            finished: false,
        }
    }

    fn malformed(&self, message: impl Into<String>) -> IngestError {
        IngestError::Malformed {
            format: "revlog-jsonl",
            offset: self.offset,
            page: self.current.as_ref().map(|p| p.title.clone()),
            message: format!("line {}: {}", self.line_no, message.into()),
        }
    }

    fn editor(&mut self, field: &EditorField) -> Result<EditorId, IngestError> {
        match field.kind.as_str() {
            "registered" => Ok(EditorId::Registered(field.name.clone())),
            "anonymous" => Ok(EditorId::Anonymous(field.name.clone())),
            "unknown" => Ok(self.unknown.mint()),
            other => Err(self.malformed(format!("unknown editor kind {other:?}"))),
        }
    }

    fn flush(&mut self) -> Result<Option<PageHistory>, IngestError> {
        let Some(open) = self.current.take() else {
            return Ok(None);
        };
        let buffered = open.raw.len() as u64;
        let page = finish_page(
            open.page_id,
            open.title,
            open.namespace,
            open.raw,
            self.options.missing_fingerprint,
        );
        self.options.gauge.page_done(buffered, page.is_ok());
        page.map(Some)
    }

    fn next_page(&mut self) -> Result<Option<PageHistory>, IngestError> {
        loop {
            self.offset += self.line.len() as u64;
            self.line.clear();
            let read = self.source.read_line(&mut self.line)?;
            if read == 0 {
                return self.flush();
            }
            self.line_no += 1;
            let trimmed = self.line.trim_end_matches(['\n', '\r']);
            if trimmed.is_empty() {
                continue;
            }
            let parsed: RevLine = match serde_json::from_str(trimmed) {
                Ok(parsed) => parsed,
                Err(e) => return Err(self.malformed(e.to_string())),
            };

            if self.skipping == Some(parsed.page_id) {
                continue;
            }
            self.skipping = None;

            let starts_new_group = match &self.current {
                Some(open) => open.page_id != parsed.page_id,
                None => true,
            };
            let finished = if starts_new_group { self.flush()? } else { None };

            if starts_new_group && !self.options.filter.accepts(parsed.ns) {
                self.skipping = Some(parsed.page_id);
                if let Some(page) = finished {
                    return Ok(Some(page));
                }
                continue;
            }

            if starts_new_group {
                self.current = Some(OpenPage {
                    page_id: parsed.page_id,
                    title: parsed.title.clone(),
                    namespace: parsed.ns,
                    raw: Vec::new(),
                });
            }

            let timestamp = super::parse_timestamp(&parsed.timestamp, |m| {
                IngestError::Malformed {
                    format: "revlog-jsonl",
                    offset: self.offset,
                    page: Some(parsed.title.clone()),
                    message: format!("line {}: {}", self.line_no, m),
                }
            })?;
            let editor = self.editor(&parsed.editor)?;
            let open = self.current.as_mut().expect("group is open");
            open.raw.push(RawRevision {
                rev_id: parsed.rev_id,
                timestamp,
                editor,
                comment: parsed.comment,
                text: parsed.text,
                dump_sha1: None,
                bytes_attr: None,
            });
            self.options.gauge.revision_buffered();

            if let Some(page) = finished {
                return Ok(Some(page));
            }
        }
    }
}

impl<R: BufRead> Iterator for JsonlPages<R> {
    type Item = Result<PageHistory, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        match self.next_page() {
            Ok(Some(page)) => Some(Ok(page)),
            Ok(None) => {
                self.finished = true;
                None
            }
            Err(err) => {
                self.finished = true;
                Some(Err(err))
            }
        }
    }
}
