//! Streaming parser for MediaWiki `pages-meta-history` XML exports.
//!
//! Only the elements the analysis needs are read (`page` > `title`, `ns`,
//! `id`, `revision` > `id`, `timestamp`, `contributor`, `comment`, `text`,
//! `sha1`); everything else is skipped wholesale. One page is buffered at a
//! time, and pages rejected by the namespace filter are skipped without
//! buffering their revisions.

use std::io::BufRead;

use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::{BytesStart, Event};
use quick_xml::name::QName;
use quick_xml::Reader;

use editwar_core::history::{parse_editor, PageHistory, UnknownEditors};

use super::{finish_page, IngestError, RawEditor, RawRevision, StreamOptions};

pub struct XmlPages<R: BufRead> {
    reader: Reader<R>,
    options: StreamOptions,
    unknown: UnknownEditors,
    buf: Vec<u8>,
    scratch: Vec<u8>,
    /// Title of the page being parsed, for error context.
    context: Option<String>,
    finished: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TagKind {
    MediaWiki,
    Page,
    Title,
    Ns,
    Id,
    Revision,
    Timestamp,
    Contributor,
    Username,
    Ip,
    Comment,
    Text,
    Sha1,
    Other,
}

/// Owned facts about a just-read start tag; the event buffer is reused
/// immediately afterwards.
struct StartTag {
    kind: TagKind,
    /// Qualified name, for skipping the whole element.
    name: Vec<u8>,
    deleted: bool,
    sha1: Option<String>,
    bytes: Option<u64>,
}

/// One structural step, fully owned so the reader can move on.
enum Step {
    Start(StartTag),
    End,
    Eof,
    Ignored,
    Xml(quick_xml::Error),
    Bad(String),
}

/// One step inside a leaf element.
enum LeafStep {
    Chunk(String),
    Nested(Vec<u8>),
    End,
    Eof,
    Xml(quick_xml::Error),
    Bad(String),
}

fn classify(start: &BytesStart) -> Result<StartTag, String> {
    let kind = match start.local_name().as_ref() {
        b"mediawiki" => TagKind::MediaWiki,
        b"page" => TagKind::Page,
        b"title" => TagKind::Title,
        b"ns" => TagKind::Ns,
        b"id" => TagKind::Id,
        b"revision" => TagKind::Revision,
        b"timestamp" => TagKind::Timestamp,
        b"contributor" => TagKind::Contributor,
        b"username" => TagKind::Username,
        b"ip" => TagKind::Ip,
        b"comment" => TagKind::Comment,
        b"text" => TagKind::Text,
        b"sha1" => TagKind::Sha1,
        _ => TagKind::Other,
    };
    let mut tag = StartTag {
        kind,
        name: start.name().as_ref().to_vec(),
        deleted: false,
        sha1: None,
        bytes: None,
    };
    for attr in start.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        match attr.key.local_name().as_ref() {
            b"deleted" => tag.deleted = true,
            b"sha1" => {
                let value = attr.unescape_value().map_err(|e| e.to_string())?;
                tag.sha1 = Some(value.into_owned());
            }
            b"bytes" => {
                let value = attr.unescape_value().map_err(|e| e.to_string())?;
                tag.bytes = value.parse().ok();
            }
            _ => {}
        }
    }
    Ok(tag)
}

impl<R: BufRead> XmlPages<R> {
    pub fn new(source: R, options: StreamOptions) -> Self {
        let mut reader = Reader::from_reader(source);
        reader.config_mut().expand_empty_elements = true;
        Self {
            reader,
            options,
            unknown: UnknownEditors::new(),
            buf: Vec::new(),
            scratch: Vec::new(),
            context: None,
            finished: false,
        }
    }

    fn malformed(&self, message: impl Into<String>) -> IngestError {
        IngestError::Malformed {
            format: "mediawiki-xml",
            offset: self.reader.buffer_position(),
            page: self.context.clone(),
            message: message.into(),
        }
    }

    fn xml_error(&self, source: quick_xml::Error) -> IngestError {
        if let quick_xml::Error::Io(io) = &source {
            return IngestError::Io(std::io::Error::new(io.kind(), io.to_string()));
        }
        self.malformed(source.to_string())
    }

    fn read_step(&mut self) -> Step {
        self.buf.clear();
        match self.reader.read_event_into(&mut self.buf) {
            Ok(Event::Start(start)) => match classify(&start) {
                Ok(tag) => Step::Start(tag),
                Err(message) => Step::Bad(message),
            },
            Ok(Event::End(_)) => Step::End,
            Ok(Event::Eof) => Step::Eof,
            Ok(_) => Step::Ignored,
            Err(source) => Step::Xml(source),
        }
    }

    fn read_leaf_step(&mut self) -> LeafStep {
        self.buf.clear();
        match self.reader.read_event_into(&mut self.buf) {
            Ok(Event::Text(text)) => match text.decode() {
                Ok(chunk) => LeafStep::Chunk(chunk.into_owned()),
                Err(e) => LeafStep::Bad(e.to_string()),
            },
            Ok(Event::CData(data)) => match data.decode() {
                Ok(chunk) => LeafStep::Chunk(chunk.into_owned()),
                Err(e) => LeafStep::Bad(e.to_string()),
            },
            Ok(Event::GeneralRef(entity)) => match entity.resolve_char_ref() {
                Ok(Some(ch)) => LeafStep::Chunk(ch.to_string()),
                Ok(None) => match entity.decode() {
                    Ok(name) => match resolve_predefined_entity(&name) {
                        Some(resolved) => LeafStep::Chunk(resolved.to_string()),
                        None => LeafStep::Bad(format!("unsupported entity &{name};")),
                    },
                    Err(e) => LeafStep::Bad(e.to_string()),
                },
                Err(e) => LeafStep::Bad(e.to_string()),
            },
            Ok(Event::Start(nested)) => LeafStep::Nested(nested.name().as_ref().to_vec()),
            Ok(Event::End(_)) => LeafStep::End,
            Ok(Event::Eof) => LeafStep::Eof,
            Ok(_) => LeafStep::Chunk(String::new()),
            Err(source) => LeafStep::Xml(source),
        }
    }

    /// Skip the element whose start tag was just read.
    fn skip(&mut self, name: &[u8]) -> Result<(), IngestError> {
        self.scratch.clear();
        self.reader
            .read_to_end_into(QName(name), &mut self.scratch)
            .map_err(|e| self.xml_error(e))?;
        Ok(())
    }

    /// Collect the text content of a leaf element just opened, resolving
    /// character and predefined entity references. No whitespace trimming,
    /// no normalization: fingerprints want the exact bytes.
    fn leaf_text(&mut self) -> Result<String, IngestError> {
        let mut out = String::new();
        loop {
            match self.read_leaf_step() {
                LeafStep::Chunk(chunk) => out.push_str(&chunk),
                LeafStep::Nested(name) => self.skip(&name)?,
                LeafStep::End => return Ok(out),
                LeafStep::Eof => return Err(self.malformed("unexpected end of file in element")),
                LeafStep::Xml(source) => return Err(self.xml_error(source)),
                LeafStep::Bad(message) => return Err(self.malformed(message)),
            }
        }
    }

    fn leaf_number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, IngestError> {
        let text = self.leaf_text()?;
        text.trim()
            .parse()
            .map_err(|_| self.malformed(format!("invalid {what}: {text:?}")))
    }

    /// Parse one `<contributor>` element (start tag already consumed).
    fn parse_contributor(&mut self, deleted_attr: bool) -> Result<RawEditor, IngestError> {
        let mut username = None;
        let mut ip = None;
        loop {
            match self.read_step() {
                Step::Start(tag) => match tag.kind {
                    TagKind::Username => username = Some(self.leaf_text()?),
                    TagKind::Ip => ip = Some(self.leaf_text()?),
                    _ => self.skip(&tag.name)?,
                },
                Step::End => break,
                Step::Eof => return Err(self.malformed("unexpected end of file in contributor")),
                Step::Ignored => {}
                Step::Xml(source) => return Err(self.xml_error(source)),
                Step::Bad(message) => return Err(self.malformed(message)),
            }
        }
        Ok(RawEditor {
            username,
            ip,
            deleted: deleted_attr,
        })
    }

    /// Parse one `<revision>` element (start tag already consumed).
    fn parse_revision(&mut self) -> Result<RawRevision, IngestError> {
        let mut rev_id: Option<u64> = None;
        let mut timestamp: Option<i64> = None;
        let mut editor: Option<RawEditor> = None;
        let mut comment = String::new();
        let mut text: Option<String> = None;
        let mut sha1_element: Option<String> = None;
        let mut sha1_attr: Option<String> = None;
        let mut bytes_attr: Option<u64> = None;
        loop {
            match self.read_step() {
                Step::Start(tag) => match tag.kind {
                    TagKind::Id if rev_id.is_none() => {
                        rev_id = Some(self.leaf_number("revision id")?)
                    }
                    TagKind::Timestamp => {
                        let raw = self.leaf_text()?;
                        timestamp = Some(super::parse_timestamp(&raw, |m| self.malformed(m))?);
                    }
                    TagKind::Contributor => editor = Some(self.parse_contributor(tag.deleted)?),
                    TagKind::Comment => {
                        let content = self.leaf_text()?;
                        // a suppressed comment stays empty
                        if !tag.deleted {
                            comment = content;
                        }
                    }
                    TagKind::Text => {
                        sha1_attr = tag.sha1;
                        bytes_attr = tag.bytes;
                        let content = self.leaf_text()?;
                        if !tag.deleted {
                            text = Some(content);
                        }
                    }
                    TagKind::Sha1 => sha1_element = Some(self.leaf_text()?),
                    _ => self.skip(&tag.name)?,
                },
                Step::End => break,
                Step::Eof => return Err(self.malformed("unexpected end of file in revision")),
                Step::Ignored => {}
                Step::Xml(source) => return Err(self.xml_error(source)),
                Step::Bad(message) => return Err(self.malformed(message)),
            }
        }
        let rev_id = rev_id.ok_or_else(|| self.malformed("revision without id"))?;
        let timestamp = timestamp.ok_or_else(|| self.malformed("revision without timestamp"))?;
        let raw_editor = editor.ok_or_else(|| self.malformed("revision without contributor"))?;
        let editor = parse_editor(
            raw_editor.username.as_deref(),
            raw_editor.ip.as_deref(),
            raw_editor.deleted,
            &mut self.unknown,
        )
        .map_err(|e| self.malformed(e.to_string()))?;
        // the sha1 attribute on <text> wins over the <sha1> element
        let dump_sha1 = sha1_attr.or(sha1_element).filter(|s| !s.is_empty());
        Ok(RawRevision {
            rev_id,
            timestamp,
            editor,
            comment,
            text,
            dump_sha1,
            bytes_attr,
        })
    }

    /// Parse one `<page>` element (start tag already consumed). Returns
    /// `None` when the namespace filter rejects the page.
    fn parse_page(&mut self) -> Result<Option<PageHistory>, IngestError> {
        let mut title: Option<String> = None;
        let mut namespace: Option<i32> = None;
        let mut page_id: Option<u64> = None;
        let mut raw: Vec<RawRevision> = Vec::new();
        let mut buffered: u64 = 0;
        loop {
            match self.read_step() {
                Step::Start(tag) => match tag.kind {
                    TagKind::Title => {
                        let text = self.leaf_text()?;
                        self.context = Some(text.clone());
                        title = Some(text);
                    }
                    TagKind::Ns => {
                        let ns: i32 = self.leaf_number("namespace")?;
                        namespace = Some(ns);
                        if !self.options.filter.accepts(ns) {
                            // drop the rest of the page without buffering it
                            self.skip(b"page")?;
                            self.options.gauge.page_done(buffered, false);
                            self.context = None;
                            return Ok(None);
                        }
                    }
                    TagKind::Id if page_id.is_none() => {
                        page_id = Some(self.leaf_number("page id")?)
                    }
                    TagKind::Revision => {
                        raw.push(self.parse_revision()?);
                        buffered += 1;
                        self.options.gauge.revision_buffered();
                    }
                    _ => self.skip(&tag.name)?,
                },
                Step::End => break,
                Step::Eof => return Err(self.malformed("unexpected end of file in page")),
                Step::Ignored => {}
                Step::Xml(source) => return Err(self.xml_error(source)),
                Step::Bad(message) => return Err(self.malformed(message)),
            }
        }
        let title = title.ok_or_else(|| self.malformed("page without title"))?;
        let namespace = namespace.ok_or_else(|| self.malformed("page without ns"))?;
        let page_id = page_id.ok_or_else(|| self.malformed("page without id"))?;
        let page = finish_page(
            page_id,
            title,
            namespace,
            raw,
            self.options.missing_fingerprint,
        );
        self.options.gauge.page_done(buffered, page.is_ok());
        self.context = None;
        page.map(Some)
    }

    fn next_page(&mut self) -> Result<Option<PageHistory>, IngestError> {
        loop {
            match self.read_step() {
                Step::Start(tag) => match tag.kind {
                    TagKind::Page => {
                        if let Some(page) = self.parse_page()? {
                            return Ok(Some(page));
                        }
                    }
                    // descend into the document root
                    TagKind::MediaWiki => {}
                    _ => self.skip(&tag.name)?,
                },
                Step::End => {}
                Step::Eof => return Ok(None),
                Step::Ignored => {}
                Step::Xml(source) => return Err(self.xml_error(source)),
                Step::Bad(message) => return Err(self.malformed(message)),
            }
        }
    }
}

impl<R: BufRead> Iterator for XmlPages<R> {
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
