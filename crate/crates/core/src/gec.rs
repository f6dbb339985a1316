//! m2 annotations: parsing, cross-segmentation merging and F-beta scoring.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Reverse;
use core::fmt::Write;

use crate::align::{align_sentences, SimilarityConfig};
use crate::metrics::{f_beta, ratio};
use crate::text::{DocumentStream, NormalizationPolicy, SentenceRecord};
use crate::{Error, Result};

pub const NOOP: &str = "noop";
pub const DEFAULT_BETA: f64 = 0.5;

/// One `A` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    /// Half-open token span; `None` for a noop (`-1 -1`).
    pub span: Option<(usize, usize)>,
    pub type_label: String,
    pub correction: String,
    pub required: String,
    pub comment: String,
    pub annotator: usize,
}

impl Edit {
    pub fn noop(annotator: usize) -> Self {
        Edit {
            span: None,
            type_label: NOOP.into(),
            correction: "-NONE-".into(),
            required: "REQUIRED".into(),
            comment: "-NONE-".into(),
            annotator,
        }
    }

    pub fn is_noop(&self) -> bool {
        self.span.is_none()
    }

    fn shifted(&self, offset: usize) -> Edit {
        Edit {
            span: self.span.map(|(s, e)| (s + offset, e + offset)),
            ..self.clone()
        }
    }

    pub fn to_line(&self) -> String {
        let span = match self.span {
            Some((s, e)) => format!("{s} {e}"),
            None => "-1 -1".into(),
        };
        format!(
            "A {span}|||{}|||{}|||{}|||{}|||{}",
            self.type_label, self.correction, self.required, self.comment, self.annotator
        )
    }
}

/// One `S` line and its edits, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Entry {
    pub source: Vec<String>,
    pub edits: Vec<Edit>,
}

impl M2Entry {
    pub fn edits_by_annotator(&self) -> BTreeMap<usize, Vec<&Edit>> {
        let mut out: BTreeMap<usize, Vec<&Edit>> = BTreeMap::new();
        for e in &self.edits {
            out.entry(e.annotator).or_default().push(e);
        }
        out
    }

    fn record(&self) -> Result<SentenceRecord> {
        SentenceRecord::new(self.source.iter())
    }
}

struct Line<'a> {
    entry: usize,
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::M2 {
            entry: self.entry,
            line: self.number,
            message: message.into(),
        }
    }
}

fn parse_edit(line: &Line<'_>, rest: &str, source_len: usize) -> Result<Edit> {
    let fields: Vec<&str> = rest.split("|||").collect();
    let [span, type_label, correction, required, comment, annotator] = fields[..] else {
        return Err(line.error(format!(
            "expected 6 '|||'-separated fields, found {}",
            fields.len()
        )));
    };
    let bounds: Vec<&str> = span.split(' ').collect();
    let [s, e] = bounds[..] else {
        return Err(line.error(format!("span {span:?} is not two integers")));
    };
    let int = |x: &str| {
        x.parse::<i64>()
            .map_err(|_| line.error(format!("span {span:?} is not two integers")))
    };
    let span = match (int(s)?, int(e)?) {
        (-1, -1) => None,
        (s, e) if 0 <= s && s <= e && e as usize <= source_len => Some((s as usize, e as usize)),
        _ => {
            return Err(line.error(format!(
                "span {span:?} out of range for {source_len} tokens"
            )))
        }
    };
    if span.is_none() != (type_label == NOOP) {
        return Err(line.error("span -1 -1 must go with type noop and vice versa"));
    }
    let annotator = annotator
        .parse()
        .map_err(|_| line.error(format!("annotator {annotator:?} is not an integer")))?;
    Ok(Edit {
        span,
        type_label: type_label.into(),
        correction: correction.into(),
        required: required.into(),
        comment: comment.into(),
        annotator,
    })
}

/// Parses blank-line separated m2 entries.
pub fn parse_m2(text: &str) -> Result<Vec<M2Entry>> {
    let mut entries: Vec<M2Entry> = Vec::new();
    let mut open = false;
    for (k, raw) in text.lines().enumerate() {
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        let line = Line {
            entry: entries.len() + usize::from(!open),
            number: k + 1,
            text,
        };
        if line.text.trim().is_empty() {
            open = false;
        } else if let Some(rest) = line
            .text
            .strip_prefix("S ")
            .or((line.text == "S").then_some(""))
        {
            if open {
                return Err(line.error("second S line without a separating blank line"));
            }
            let source: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if source.is_empty() {
                return Err(line.error("empty source sentence"));
            }
            entries.push(M2Entry {
                source,
                edits: Vec::new(),
            });
            open = true;
        } else if let Some(rest) = line.text.strip_prefix("A ") {
            if !open {
                return Err(line.error("A line before any S line"));
            }
            let entry = entries.last_mut().expect("open entry");
            let edit = parse_edit(&line, rest, entry.source.len())?;
            entry.edits.push(edit);
        } else {
            return Err(line.error(format!("unrecognized line {:?}", line.text)));
        }
    }
    Ok(entries)
}

/// Writes entries back in m2 layout, each followed by a blank line.
pub fn serialize_m2(entries: &[M2Entry]) -> String {
    let mut out = String::new();
    for entry in entries {
        let _ = writeln!(out, "S {}", entry.source.join(" "));
        for e in &entry.edits {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Concatenates consecutive entries, shifting each edit by the number of
/// source tokens before its sentence, then drops redundant noops: an
/// annotator with real edits loses its noops, and one with only noops keeps
/// just the first.
pub fn merge_entries(entries: &[M2Entry]) -> M2Entry {
    if let [one] = entries {
        return one.clone();
    }
    let mut source = Vec::new();
    let mut edits = Vec::new();
    for entry in entries {
        edits.extend(entry.edits.iter().map(|e| e.shifted(source.len())));
        source.extend(entry.source.iter().cloned());
    }
    let with_real: BTreeSet<usize> = edits
        .iter()
        .filter(|e| !e.is_noop())
        .map(|e| e.annotator)
        .collect();
    let mut noop_seen = BTreeSet::new();
    edits.retain(|e| {
        !e.is_noop() || (!with_real.contains(&e.annotator) && noop_seen.insert(e.annotator))
    });
    M2Entry { source, edits }
}

fn stream(entries: &[M2Entry]) -> Result<DocumentStream> {
    Ok(DocumentStream::new(
        entries
            .iter()
            .map(M2Entry::record)
            .collect::<Result<Vec<_>>>()?,
    ))
}

/// Aligns gold and system entries by their source text and merges each
/// alignment group into one gold and one system entry.
pub fn merge_and_reindex(
    gold: &[M2Entry],
    sys: &[M2Entry],
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
) -> Result<Vec<(M2Entry, M2Entry)>> {
    let groups = align_sentences(&stream(gold)?, &stream(sys)?, policy, cfg)?;
    Ok(groups
        .into_iter()
        .map(|g| {
            (
                merge_entries(&gold[g.gold_sentences]),
                merge_entries(&sys[g.sys_sentences]),
            )
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Span and correction must agree.
    #[default]
    Correction,
    /// Span alone must agree.
    Detection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypeCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GecScore {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
    pub beta: f64,
    pub per_type: BTreeMap<String, TypeCounts>,
}

impl GecScore {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, beta: f64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        GecScore {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f_beta: f_beta(precision, recall, beta),
            beta,
            per_type: BTreeMap::new(),
        }
    }
}

type Key = (usize, usize, String);

fn keyed<'a>(edits: impl IntoIterator<Item = &'a Edit>, mode: MatchMode) -> BTreeMap<Key, &'a str> {
    edits
        .into_iter()
        .filter_map(|e| {
            let (s, t) = e.span?;
            let cor = match mode {
                MatchMode::Correction => e.correction.clone(),
                MatchMode::Detection => String::new(),
            };
            Some(((s, t, cor), e.type_label.as_str()))
        })
        .collect()
}

/// Annotator preference: F-beta, then tp, then fewer fp, then fewer fn.
type Rank = (f64, usize, Reverse<usize>, Reverse<usize>);

struct Comparison<'a> {
    tp: Vec<&'a str>,
    fp: Vec<&'a str>,
    fn_: Vec<&'a str>,
}

fn compare<'a>(gold: &BTreeMap<Key, &'a str>, sys: &BTreeMap<Key, &'a str>) -> Comparison<'a> {
    Comparison {
        tp: gold
            .iter()
            .filter(|(k, _)| sys.contains_key(*k))
            .map(|(_, t)| *t)
            .collect(),
        fp: sys
            .iter()
            .filter(|(k, _)| !gold.contains_key(*k))
            .map(|(_, t)| *t)
            .collect(),
        fn_: gold
            .iter()
            .filter(|(k, _)| !sys.contains_key(*k))
            .map(|(_, t)| *t)
            .collect(),
    }
}

/// Scores aligned entry pairs. For each pair the gold annotator giving the
/// best running F-beta is used; ties prefer more true positives, then fewer
/// false positives, then fewer false negatives.
pub fn score_gec(pairs: &[(M2Entry, M2Entry)], beta: f64, mode: MatchMode) -> GecScore {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let mut per_type: BTreeMap<String, TypeCounts> = BTreeMap::new();
    for (gold, sys) in pairs {
        let hyp = keyed(&sys.edits, mode);
        let mut annotators: Vec<Vec<&Edit>> = gold.edits_by_annotator().into_values().collect();
        if annotators.is_empty() {
            annotators.push(vec![]);
        }
        let mut best: Option<(Rank, Comparison<'_>)> = None;
        for edits in annotators {
            let c = compare(&keyed(edits, mode), &hyp);
            let (t, p, n) = (tp + c.tp.len(), fp + c.fp.len(), fn_ + c.fn_.len());
            let f = f_beta(ratio(t, t + p), ratio(t, t + n), beta);
            let rank = (f, t, Reverse(p), Reverse(n));
            if best.as_ref().is_none_or(|(b, _)| rank > *b) {
                best = Some((rank, c));
            }
        }
        let ((_, t, Reverse(p), Reverse(n)), c) = best.expect("at least one annotator");
        (tp, fp, fn_) = (t, p, n);
        for ty in c.tp {
            per_type.entry(ty.to_string()).or_default().tp += 1;
        }
        for ty in c.fp {
            per_type.entry(ty.to_string()).or_default().fp += 1;
        }
        for ty in c.fn_ {
            per_type.entry(ty.to_string()).or_default().fn_ += 1;
        }
    }
    GecScore {
        per_type,
        ..GecScore::from_counts(tp, fp, fn_, beta)
    }
}
