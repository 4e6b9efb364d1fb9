//! Fixture generators shared by the integration and acceptance tests, plus
//! a DOM-style (whole file in memory) reference parser kept independent of
//! the streaming implementation.

#![allow(dead_code)]

use std::collections::HashMap;
use std::fmt::Write as _;

use editwar_core::history::{fingerprint, EditorId, Fingerprint, PageHistory, RevisionRecord};

#[derive(Debug, Clone)]
pub enum Editor {
    Registered(String),
    Anonymous(String),
    Deleted,
}

#[derive(Debug, Clone)]
pub struct FixtureRevision {
    pub rev_id: u64,
    pub timestamp: i64,
    pub editor: Editor,
    pub comment: String,
    pub text: Option<String>,
    pub sha1: Option<String>,
}

#[derive(Debug, Clone)]
pub struct FixturePage {
    pub page_id: u64,
    pub title: String,
    pub ns: i32,
    pub revisions: Vec<FixtureRevision>,
}

pub fn reg(name: &str) -> Editor {
    Editor::Registered(name.to_string())
}

/// Plain page: registered editors, all texts retained, ids and timestamps
/// running with the index.
pub fn simple_page(
    page_id: u64,
    title: &str,
    revisions: &[(&str, &str, &str)], // (editor, text, comment)
) -> FixturePage {
    FixturePage {
        page_id,
        title: title.to_string(),
        ns: 0,
        revisions: revisions
            .iter()
            .enumerate()
            .map(|(i, (editor, text, comment))| FixtureRevision {
                rev_id: i as u64 + 1,
                timestamp: 1_000_000 + i as i64,
                editor: reg(editor),
                comment: comment.to_string(),
                text: Some(text.to_string()),
                sha1: None,
            })
            .collect(),
    }
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(ch),
        }
    }
    out
}

pub fn iso(ts: i64) -> String {
    chrono::DateTime::from_timestamp(ts, 0)
        .expect("timestamp in range")
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

/// Render fixture pages as a MediaWiki export document.
pub fn to_xml(pages: &[FixturePage]) -> String {
    let mut out = String::new();
    out.push_str("<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.10/\" version=\"0.10\" xml:lang=\"en\">\n");
    out.push_str("  <siteinfo>\n    <sitename>Testipedia</sitename>\n    <dbname>testwiki</dbname>\n    <namespaces>\n      <namespace key=\"0\" />\n      <namespace key=\"1\">Talk</namespace>\n    </namespaces>\n  </siteinfo>\n");
    for page in pages {
        write_xml_page(&mut out, page);
    }
    out.push_str("</mediawiki>\n");
    out
}

pub fn write_xml_page(out: &mut String, page: &FixturePage) {
    let _ = write!(
        out,
        "  <page>\n    <title>{}</title>\n    <ns>{}</ns>\n    <id>{}</id>\n",
        escape_xml(&page.title),
        page.ns,
        page.page_id
    );
    for rev in &page.revisions {
        let _ = write!(
            out,
            "    <revision>\n      <id>{}</id>\n      <timestamp>{}</timestamp>\n",
            rev.rev_id,
            iso(rev.timestamp)
        );
        match &rev.editor {
            Editor::Registered(name) => {
                let _ = write!(
                    out,
                    "      <contributor>\n        <username>{}</username>\n        <id>{}</id>\n      </contributor>\n",
                    escape_xml(name),
                    rev.rev_id % 97 + 1
                );
            }
            Editor::Anonymous(ip) => {
                let _ = write!(
                    out,
                    "      <contributor>\n        <ip>{}</ip>\n      </contributor>\n",
                    escape_xml(ip)
                );
            }
            Editor::Deleted => {
                out.push_str("      <contributor deleted=\"deleted\" />\n");
            }
        }
        if !rev.comment.is_empty() {
            let _ = writeln!(out, "      <comment>{}</comment>", escape_xml(&rev.comment));
        }
        out.push_str("      <model>wikitext</model>\n      <format>text/x-wiki</format>\n");
        match &rev.text {
            Some(text) => {
                let _ = writeln!(
                    out,
                    "      <text bytes=\"{}\" xml:space=\"preserve\">{}</text>",
                    text.len(),
                    escape_xml(text)
                );
            }
            None => out.push_str("      <text deleted=\"deleted\" />\n"),
        }
        if let Some(sha1) = &rev.sha1 {
            let _ = writeln!(out, "      <sha1>{sha1}</sha1>");
        }
        out.push_str("    </revision>\n");
    }
    out.push_str("  </page>\n");
}

/// Render fixture pages as revlog-jsonl lines.
pub fn to_jsonl(pages: &[FixturePage]) -> String {
    let mut out = String::new();
    for page in pages {
        for rev in &page.revisions {
            out.push_str(&jsonl_line(page, rev));
            out.push('\n');
        }
    }
    out
}

pub fn jsonl_line(page: &FixturePage, rev: &FixtureRevision) -> String {
    let (kind, name) = match &rev.editor {
        Editor::Registered(name) => ("registered", name.clone()),
        Editor::Anonymous(ip) => ("anonymous", ip.clone()),
        Editor::Deleted => ("unknown", String::new()),
    };
    serde_json::json!({
        "page_id": page.page_id,
        "title": page.title,
        "ns": page.ns,
        "rev_id": rev.rev_id,
        "timestamp": iso(rev.timestamp),
        "editor": {"kind": kind, "name": name},
        "comment": rev.comment,
        "text": rev.text,
    })
    .to_string()
}

/// One page engineered to an exact (both, text-only, comment-only) revert
/// split under the default English patterns. Block k uses its own texts, so
/// blocks never interfere.
pub fn split_page(page_id: u64, title: &str, both: usize, text_only: usize, comment_only: usize) -> FixturePage {
    let mut specs: Vec<(String, String, String)> = Vec::new();
    for k in 0..both {
        specs.push(("alice".into(), format!("b{k}-base"), String::new()));
        specs.push(("bob".into(), format!("b{k}-edit"), String::new()));
        specs.push(("alice".into(), format!("b{k}-base"), "rv vandalism".into()));
    }
    for k in 0..text_only {
        specs.push(("alice".into(), format!("t{k}-base"), String::new()));
        specs.push(("bob".into(), format!("t{k}-edit"), String::new()));
        specs.push(("alice".into(), format!("t{k}-base"), String::new()));
    }
    for k in 0..comment_only {
        specs.push(("alice".into(), format!("c{k}-base"), String::new()));
        specs.push(("bob".into(), format!("c{k}-edit"), "rv test".into()));
    }
    FixturePage {
        page_id,
        title: title.to_string(),
        ns: 0,
        revisions: specs
            .iter()
            .enumerate()
            .map(|(i, (editor, text, comment))| FixtureRevision {
                rev_id: i as u64 + 1,
                timestamp: 1_000_000 + i as i64,
                editor: reg(editor),
                comment: comment.clone(),
                text: Some(text.clone()),
                sha1: None,
            })
            .collect(),
    }
}

/// Independent DOM reference parser: reads the whole document with
/// roxmltree, then applies the documented semantics (sorting, ordinals,
/// editor identity, fingerprint source selection) from scratch.
pub fn dom_reference_parse(xml: &str, keep_ns: &[i32]) -> Vec<PageHistory> {
    let doc = roxmltree::Document::parse(xml).expect("fixture XML parses");
    let mut unknown_serial = 0u64;
    let mut pages = Vec::new();
    for page_node in doc
        .descendants()
        .filter(|n| n.has_tag_name("page"))
    {
        let text_of = |name: &str| -> Option<String> {
            page_node
                .children()
                .find(|c| c.has_tag_name(name))
                .map(|c| c.text().unwrap_or("").to_string())
        };
        let title = text_of("title").expect("title");
        let ns: i32 = text_of("ns").expect("ns").trim().parse().expect("ns number");
        let page_id: u64 = text_of("id").expect("id").trim().parse().expect("page id");
        if !keep_ns.contains(&ns) {
            // the streaming parser skips before reading revisions, so no
            // unknown-editor serials may be spent on a skipped page
            continue;
        }

        struct DomRev {
            rev_id: u64,
            timestamp: i64,
            editor: EditorId,
            comment: String,
            text: Option<String>,
            sha1: Option<String>,
        }
        let mut revs: Vec<DomRev> = Vec::new();
        for rev_node in page_node.children().filter(|c| c.has_tag_name("revision")) {
            let child_text = |name: &str| -> Option<String> {
                rev_node
                    .children()
                    .find(|c| c.has_tag_name(name))
                    .map(|c| c.text().unwrap_or("").to_string())
            };
            let rev_id: u64 = child_text("id").expect("rev id").trim().parse().unwrap();
            let timestamp = chrono::DateTime::parse_from_rfc3339(
                child_text("timestamp").expect("timestamp").trim(),
            )
            .unwrap()
            .timestamp();
            let contributor = rev_node
                .children()
                .find(|c| c.has_tag_name("contributor"))
                .expect("contributor");
            let editor = if contributor.attribute("deleted").is_some() {
                let id = EditorId::Unknown(unknown_serial);
                unknown_serial += 1;
                id
            } else if let Some(username) = contributor
                .children()
                .find(|c| c.has_tag_name("username"))
            {
                EditorId::Registered(username.text().unwrap_or("").to_string())
            } else if let Some(ip) = contributor.children().find(|c| c.has_tag_name("ip")) {
                EditorId::Anonymous(ip.text().unwrap_or("").to_string())
            } else {
                let id = EditorId::Unknown(unknown_serial);
                unknown_serial += 1;
                id
            };
            let comment = rev_node
                .children()
                .find(|c| c.has_tag_name("comment"))
                .filter(|c| c.attribute("deleted").is_none())
                .map(|c| c.text().unwrap_or("").to_string())
                .unwrap_or_default();
            let text_node = rev_node.children().find(|c| c.has_tag_name("text"));
            let text = match &text_node {
                Some(node) if node.attribute("deleted").is_none() => {
                    Some(node.text().unwrap_or("").to_string())
                }
                _ => None,
            };
            let sha1 = text_node
                .and_then(|n| n.attribute("sha1").map(str::to_string))
                .or_else(|| child_text("sha1"))
                .filter(|s| !s.is_empty());
            revs.push(DomRev {
                rev_id,
                timestamp,
                editor,
                comment,
                text,
                sha1,
            });
        }

        let all_texts = revs.iter().all(|r| r.text.is_some());
        let mut records: Vec<RevisionRecord> = revs
            .into_iter()
            .map(|r| {
                let print: Option<Fingerprint> = if all_texts {
                    Some(fingerprint(r.text.as_deref().unwrap().as_bytes()))
                } else {
                    r.sha1.clone().map(Fingerprint::Dump)
                };
                RevisionRecord {
                    page_id,
                    rev_id: r.rev_id,
                    ordinal: 0,
                    timestamp: r.timestamp,
                    editor: r.editor,
                    comment: r.comment,
                    fingerprint: print,
                    text_bytes: r.text.as_ref().map(|t| t.len() as u64).unwrap_or(0),
                    text: r.text,
                }
            })
            .collect();
        records.sort_by_key(|r| (r.timestamp, r.rev_id));
        for (i, r) in records.iter_mut().enumerate() {
            r.ordinal = i;
        }
        pages.push(PageHistory {
            page_id,
            title,
            namespace: ns,
            revisions: records,
        });
    }
    pages
}

/// Deterministic multi-page fixture with shuffled revision order, escaped
/// characters, anonymous and suppressed contributors.
pub fn shuffled_fixture(pages: usize, revisions_per_page: usize, seed: u64) -> Vec<FixturePage> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for p in 0..pages {
        let titles = [
            "Plain title",
            "Ampersands & <angles>",
            "Quotes \"and\" 'apostrophes'",
            "Unicode – π — title",
            "Trailing spaces  ",
        ];
        let texts = [
            "lorem ipsum".to_string(),
            String::new(),
            "a & b < c > d \"e\"".to_string(),
            "line one\nline two\n".to_string(),
            "π × ∞".to_string(),
            "{{Disputed}} content".to_string(),
        ];
        let mut revisions = Vec::new();
        for i in 0..revisions_per_page {
            let editor = match rng.random_range(0..10u8) {
                0 => Editor::Anonymous(format!("10.0.{}.{}", rng.random_range(0..255u8), i % 251)),
                1 => Editor::Deleted,
                n => Editor::Registered(format!("user{}", n % 4)),
            };
            let comment = match rng.random_range(0..6u8) {
                0 => "rv vandalism".to_string(),
                1 => "Reverted edits by \"X\" & co".to_string(),
                _ => String::new(),
            };
            revisions.push(FixtureRevision {
                rev_id: (1000 + i * 7 % revisions_per_page.max(1) * 13 + i) as u64,
                timestamp: 1_200_000_000 + rng.random_range(0..5000i64),
                editor,
                comment,
                text: Some(texts[rng.random_range(0..texts.len())].clone()),
                sha1: None,
            });
        }
        // distinct rev ids
        let mut seen = HashMap::new();
        for r in &mut revisions {
            let n = seen.entry(r.rev_id).or_insert(0u64);
            r.rev_id = r.rev_id * 100 + *n;
            *n += 1;
        }
        revisions.shuffle(&mut rng);
        out.push(FixturePage {
            page_id: p as u64 + 1,
            title: format!("{} {}", titles[p % titles.len()], p),
            ns: 0,
            revisions,
        });
    }
    out
}
