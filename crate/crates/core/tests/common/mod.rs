//! Random corpora shared by the integration tests.
#![allow(dead_code)]

use jpeval_core::gec::{Edit, M2Entry};
use jpeval_core::text::{DocumentStream, SentenceRecord};
use jpeval_core::tree::ParseTree;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Sentences = Vec<Vec<String>>;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Words over a tiny alphabet so that prefixes collide often.
pub fn words(rng: &mut StdRng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            (0..len)
                .map(|_| *b"abc".choose(rng).unwrap() as char)
                .collect()
        })
        .collect()
}

/// Cuts a word list into sentences of 1..=max_len tokens.
pub fn segment(rng: &mut StdRng, words: Vec<String>, max_len: usize) -> Sentences {
    let mut out = Vec::new();
    let mut it = words.into_iter().peekable();
    while it.peek().is_some() {
        let n = rng.gen_range(1..=max_len);
        out.push(it.by_ref().take(n).collect());
    }
    out
}

pub fn document(rng: &mut StdRng, n_words: usize, max_len: usize) -> Sentences {
    let w = words(rng, n_words);
    segment(rng, w, max_len)
}

/// Same text, different tokenization and sentence boundaries.
pub fn perturb(rng: &mut StdRng, gold: &Sentences) -> Sentences {
    let mut out: Sentences = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for sentence in gold {
        for token in sentence {
            if !current.is_empty() && rng.gen_bool(0.1) {
                current.last_mut().unwrap().push_str(token);
            } else if token.chars().count() > 1 && rng.gen_bool(0.1) {
                let cut = token
                    .char_indices()
                    .nth(rng.gen_range(1..token.chars().count()))
                    .unwrap()
                    .0;
                current.push(token[..cut].to_string());
                current.push(token[cut..].to_string());
            } else {
                current.push(token.clone());
            }
            if current.len() > 1 && rng.gen_bool(0.05) {
                out.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() && rng.gen_bool(0.8) {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

pub fn stream(sentences: &Sentences) -> DocumentStream {
    DocumentStream::new(
        sentences
            .iter()
            .map(|s| SentenceRecord::new(s.iter()).unwrap())
            .collect(),
    )
}

const POS: [&str; 5] = ["NN", "VB", "DT", "JJ", "."];
const PHRASES: [&str; 4] = ["NP", "VP", "PP", "S"];

/// A random binary-ish bracketing over `tokens`, rooted in `S`.
pub fn tree(rng: &mut StdRng, tokens: &[String]) -> ParseTree {
    let mut nodes: Vec<ParseTree> = tokens
        .iter()
        .map(|t| ParseTree::node(*POS.choose(rng).unwrap(), vec![ParseTree::leaf(t.clone())]))
        .collect();
    while nodes.len() > 1 && rng.gen_bool(0.7) {
        let at = rng.gen_range(0..nodes.len() - 1);
        let width = rng.gen_range(2..=3.min(nodes.len() - at));
        let kids: Vec<ParseTree> = nodes.drain(at..at + width).collect();
        nodes.insert(at, ParseTree::node(*PHRASES.choose(rng).unwrap(), kids));
    }
    ParseTree::node("S", nodes)
}

pub fn trees(rng: &mut StdRng, sentences: &Sentences) -> Vec<ParseTree> {
    sentences.iter().map(|s| tree(rng, s)).collect()
}

/// An edit over document-global token positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalEdit {
    pub start: usize,
    pub end: usize,
    pub type_label: String,
    pub correction: String,
}

fn edit(start: usize, end: usize, type_label: &str, correction: &str) -> Edit {
    Edit {
        span: Some((start, end)),
        type_label: type_label.into(),
        correction: correction.into(),
        required: "REQUIRED".into(),
        comment: "-NONE-".into(),
        annotator: 0,
    }
}

/// Non-overlapping edits inside sentences. Insertions are never placed on
/// a sentence boundary, where their owner would be ambiguous.
pub fn global_edits(rng: &mut StdRng, sentences: &Sentences) -> Vec<GlobalEdit> {
    let mut out = Vec::new();
    let mut offset = 0;
    for s in sentences {
        let mut k = 0;
        while k < s.len() {
            if rng.gen_bool(0.2) {
                let insert = k > 0 && rng.gen_bool(0.3);
                let end = if insert {
                    k
                } else {
                    rng.gen_range(k + 1..=s.len().min(k + 2))
                };
                let ty = *["R:NOUN", "M:DET", "U:PUNCT", "R:VERB"]
                    .choose(rng)
                    .unwrap();
                let cor = *["x", "y", "-NONE-"].choose(rng).unwrap();
                out.push(GlobalEdit {
                    start: offset + k,
                    end: offset + end,
                    type_label: ty.into(),
                    correction: cor.into(),
                });
                k = end.max(k + 1);
            } else {
                k += 1;
            }
        }
        offset += s.len();
    }
    out
}

/// Token positions that must not become sentence boundaries.
pub fn blocked_cuts(edits: &[GlobalEdit]) -> Vec<usize> {
    edits
        .iter()
        .flat_map(|e| {
            if e.start == e.end {
                e.start..e.start + 1
            } else {
                e.start + 1..e.end
            }
        })
        .collect()
}

/// Distributes global edits over a segmentation, adding a noop to every
/// sentence left without edits.
pub fn to_m2(sentences: &Sentences, edits: &[GlobalEdit]) -> Vec<M2Entry> {
    let mut offset = 0;
    sentences
        .iter()
        .map(|s| {
            let (lo, hi) = (offset, offset + s.len());
            offset = hi;
            let mut mine: Vec<Edit> = edits
                .iter()
                .filter(|e| lo <= e.start && e.start < hi && e.end <= hi)
                .map(|e| edit(e.start - lo, e.end - lo, &e.type_label, &e.correction))
                .collect();
            if mine.is_empty() {
                mine.push(Edit::noop(0));
            }
            M2Entry {
                source: s.clone(),
                edits: mine,
            }
        })
        .collect()
}

/// Re-cuts the flattened tokens at random, avoiding the blocked positions.
pub fn resegment(rng: &mut StdRng, sentences: &Sentences, blocked: &[usize]) -> Sentences {
    let tokens: Vec<String> = sentences.iter().flatten().cloned().collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    for (k, t) in tokens.into_iter().enumerate() {
        if !current.is_empty() && !blocked.contains(&k) && rng.gen_bool(0.2) {
            out.push(std::mem::take(&mut current));
        }
        current.push(t);
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}
