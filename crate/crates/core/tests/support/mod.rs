//! Shared fixtures and straight-line brute-force oracles, kept independent
//! of the library's own detection and metric paths.

// each test target compiles its own copy, not all of them use everything
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::Rng;

use editwar_core::history::{fingerprint, EditorId, PageHistory, RevisionRecord};

pub fn reg(name: &str) -> EditorId {
    EditorId::Registered(name.to_string())
}

/// Build a history from (editor, text, comment) triples, timestamps and
/// rev ids running with the index.
pub fn build_history(title: &str, revisions: &[(String, String, String)]) -> PageHistory {
    let revisions = revisions
        .iter()
        .enumerate()
        .map(|(i, (editor, text, comment))| RevisionRecord {
            page_id: 1,
            rev_id: i as u64,
            ordinal: 0,
            timestamp: i as i64,
            editor: reg(editor),
            comment: comment.clone(),
            fingerprint: Some(fingerprint(text.as_bytes())),
            text_bytes: text.len() as u64,
            text: Some(text.clone()),
        })
        .collect();
    PageHistory::assemble(1, title.to_string(), 0, revisions)
}

/// Random history of up to 12 revisions, texts from 4 symbols, editors from
/// 3 ids, empty comments.
pub fn random_history(rng: &mut impl Rng, title: &str) -> PageHistory {
    let n = rng.random_range(0..=12usize);
    let specs: Vec<(String, String, String)> = (0..n)
        .map(|_| {
            let editor = format!("e{}", rng.random_range(0..3u8));
            let text = ["A", "B", "C", "D"][rng.random_range(0..4usize)].to_string();
            (editor, text, String::new())
        })
        .collect();
    build_history(title, &specs)
}

/// Exhaustive text-revert oracle: scan all fingerprint-equal (i-1, j) pairs,
/// keep per j the nearest match, then drop adjacent and self ones.
/// Returns (j, i, reverter, reverted).
pub fn brute_force_text_reverts(h: &PageHistory) -> Vec<(usize, usize, EditorId, EditorId)> {
    let revs = &h.revisions;
    let mut out = Vec::new();
    for j in 0..revs.len() {
        let Some(fp_j) = revs[j].fingerprint.as_ref() else {
            continue;
        };
        let mut nearest = None;
        for (k, earlier) in revs.iter().enumerate().take(j) {
            if earlier.fingerprint.as_ref() == Some(fp_j) {
                nearest = Some(k);
            }
        }
        let Some(k) = nearest else { continue };
        let i = k + 1;
        if i >= j {
            continue; // adjacent duplicate restores nothing
        }
        if revs[i].editor == revs[j].editor {
            continue; // self-revert
        }
        out.push((j, i, revs[j].editor.clone(), revs[i].editor.clone()));
    }
    out
}

/// Straight-line recomputation of (E, M_r, M_i, M) from the raw history,
/// with no shared code: hash maps, ordered pairs, direct loops.
pub fn brute_force_measures(h: &PageHistory) -> (u64, u64, u64, u64) {
    let mut edits: HashMap<EditorId, u64> = HashMap::new();
    for rev in &h.revisions {
        *edits.entry(rev.editor.clone()).or_insert(0) += 1;
    }

    let mut directed: HashSet<(EditorId, EditorId)> = HashSet::new();
    for (_, _, reverter, reverted) in brute_force_text_reverts(h) {
        directed.insert((reverter, reverted));
    }

    let mut mutual: Vec<(EditorId, EditorId)> = Vec::new();
    for (a, b) in &directed {
        if a < b && directed.contains(&(b.clone(), a.clone())) {
            mutual.push((a.clone(), b.clone()));
        }
    }

    if mutual.is_empty() {
        return (0, 0, 0, 0);
    }

    let mut involved: HashSet<&EditorId> = HashSet::new();
    for (a, b) in &mutual {
        involved.insert(a);
        involved.insert(b);
    }
    let e = involved.len() as u64;

    let weights: Vec<u64> = mutual
        .iter()
        .map(|(a, b)| edits[a].min(edits[b]))
        .collect();
    let m_r: u64 = weights.iter().sum();
    let w_max = *weights.iter().max().unwrap();
    (e, m_r, e * m_r, e * (m_r - w_max))
}
