//! PARSEVAL bracket scoring over sentence- and word-aligned tree streams.
//!
//! Gold and system trees are aligned through their leaves. Trees that fall
//! into one alignment group are joined under a dummy root, and every
//! constituent span is re-expressed in word-link coordinates, so brackets
//! can be compared even when the two sides tokenize or segment differently.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::align::{align, AlignmentGroup, SimilarityConfig};
use crate::metrics::{prf, ratio, Prf};
use crate::text::{DocumentStream, NormalizationPolicy, SentenceRecord};
use crate::tree::{apply_legacy_filter, get_constituents, merge_trees, LegacyParams, ParseTree};
use crate::Result;

pub const DEFAULT_DUMMY_LABEL: &str = "@S";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsevalOptions {
    /// evalb-compatible deletions; `None` scores every label and token.
    pub legacy: Option<LegacyParams>,
    pub dummy_label: String,
}

impl Default for ParsevalOptions {
    fn default() -> Self {
        ParsevalOptions {
            legacy: None,
            dummy_label: DEFAULT_DUMMY_LABEL.into(),
        }
    }
}

/// One line of the report, covering one alignment group.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceRow {
    /// 1-based group number.
    pub id: usize,
    /// Number of word links.
    pub length: usize,
    pub status: u8,
    /// Percentages.
    pub recall: f64,
    pub precision: f64,
    pub matched_brackets: usize,
    pub gold_brackets: usize,
    pub test_brackets: usize,
    pub cross_brackets: usize,
    pub words: usize,
    pub correct_tags: usize,
    pub tag_accuracy: f64,
}

impl SentenceRow {
    pub fn is_complete_match(&self) -> bool {
        self.matched_brackets == self.gold_brackets && self.matched_brackets == self.test_brackets
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsevalSummary {
    pub sentences: usize,
    pub gold_trees: usize,
    pub sys_trees: usize,
    pub gold_constituents: usize,
    pub sys_constituents: usize,
    pub matched_constituents: usize,
    pub cross_brackets: usize,
    pub bracketing: Prf,
    pub words: usize,
    pub correct_tags: usize,
    pub tag_accuracy: f64,
    pub complete_match: f64,
    pub average_crossing: f64,
    pub no_crossing: f64,
    pub two_or_less_crossing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsevalReport {
    pub rows: Vec<SentenceRow>,
    pub summary: ParsevalSummary,
}

/// A bracket in word-link coordinates.
type Bracket = (String, usize, usize);

struct Side<'a> {
    brackets: Vec<Bracket>,
    leaves: Vec<(&'a str, &'a str)>,
    kept: Vec<bool>,
}

fn side<'a>(trees: &'a [ParseTree], link_of: &[usize], opts: &ParsevalOptions) -> Result<Side<'a>> {
    let trees: Vec<&ParseTree> = trees.iter().map(ParseTree::strip_wrapper).collect();
    let owned: Vec<ParseTree> = trees.iter().map(|&t| t.clone()).collect();
    let merged = merge_trees(&owned, &opts.dummy_label)?;
    let mut constituents = get_constituents(&merged, 0);
    if trees.len() > 1 {
        constituents.remove(0);
    }
    let leaves: Vec<(&str, &str)> = trees.iter().flat_map(|t| t.leaves()).collect();
    let to_links =
        |label: String, first: usize, last: usize| (label, link_of[first], link_of[last] + 1);

    Ok(match &opts.legacy {
        None => Side {
            brackets: constituents
                .into_iter()
                .map(|c| to_links(c.label, c.start, c.end - 1))
                .collect(),
            kept: alloc::vec![true; leaves.len()],
            leaves,
        },
        Some(params) => {
            let view = apply_legacy_filter(&constituents, &leaves, params);
            let mut kept = alloc::vec![false; leaves.len()];
            for &i in &view.kept_leaves {
                kept[i] = true;
            }
            Side {
                brackets: view
                    .constituents
                    .into_iter()
                    .map(|c| {
                        to_links(
                            c.label,
                            view.kept_leaves[c.start],
                            view.kept_leaves[c.end - 1],
                        )
                    })
                    .collect(),
                kept,
                leaves,
            }
        }
    })
}

fn matched(gold: &[Bracket], sys: &[Bracket]) -> usize {
    let mut pool: BTreeMap<&Bracket, usize> = BTreeMap::new();
    for b in gold {
        *pool.entry(b).or_default() += 1;
    }
    sys.iter()
        .filter(|b| match pool.get_mut(b) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        })
        .count()
}

fn crosses(a: &Bracket, b: &Bracket) -> bool {
    (a.1 < b.1 && b.1 < a.2 && a.2 < b.2) || (b.1 < a.1 && a.1 < b.2 && b.2 < a.2)
}

/// System brackets overlapping some gold bracket without nesting.
pub fn cross_brackets(gold: &[(String, usize, usize)], sys: &[(String, usize, usize)]) -> usize {
    sys.iter()
        .filter(|s| gold.iter().any(|g| crosses(s, g)))
        .count()
}

/// POS agreement over 1:1 word links. Returns `(correct, total)`, where
/// `total` counts gold tokens, or only surviving gold tokens in legacy mode.
pub fn pos_accuracy(
    group: &AlignmentGroup,
    gold_leaves: &[(&str, &str)],
    sys_leaves: &[(&str, &str)],
    gold_kept: Option<&[bool]>,
) -> (usize, usize) {
    let kept = |i: usize| gold_kept.is_none_or(|k| k[i]);
    let total = (0..gold_leaves.len()).filter(|&i| kept(i)).count();
    let correct = group
        .word_links
        .iter()
        .filter(|l| l.is_one_to_one())
        .filter(|l| {
            kept(l.gold_range.start)
                && gold_leaves[l.gold_range.start].0 == sys_leaves[l.sys_range.start].0
        })
        .count();
    (correct, total)
}

fn stream(trees: &[ParseTree]) -> Result<DocumentStream> {
    let sentences = trees
        .iter()
        .map(|t| SentenceRecord::new(t.surfaces()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DocumentStream::new(sentences))
}

fn percent(num: usize, den: usize) -> f64 {
    100.0 * ratio(num, den)
}

/// Scores system trees against gold trees.
pub fn evaluate_parseval(
    gold: &[ParseTree],
    sys: &[ParseTree],
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
    opts: &ParsevalOptions,
) -> Result<ParsevalReport> {
    let groups = align(&stream(gold)?, &stream(sys)?, policy, cfg)?;
    let mut rows = Vec::with_capacity(groups.len());
    for (k, group) in groups.iter().enumerate() {
        let g = side(
            &gold[group.gold_sentences.clone()],
            &group.gold_link_of(),
            opts,
        )?;
        let s = side(
            &sys[group.sys_sentences.clone()],
            &group.sys_link_of(),
            opts,
        )?;
        let kept = opts.legacy.is_some().then_some(g.kept.as_slice());
        let (correct_tags, words) = pos_accuracy(group, &g.leaves, &s.leaves, kept);
        let length = group
            .word_links
            .iter()
            .filter(|l| l.gold_range.clone().any(|i| g.kept[i]))
            .count();
        let m = matched(&g.brackets, &s.brackets);
        rows.push(SentenceRow {
            id: k + 1,
            length,
            status: 0,
            recall: percent(m, g.brackets.len()),
            precision: percent(m, s.brackets.len()),
            matched_brackets: m,
            gold_brackets: g.brackets.len(),
            test_brackets: s.brackets.len(),
            cross_brackets: cross_brackets(&g.brackets, &s.brackets),
            words,
            correct_tags,
            tag_accuracy: percent(correct_tags, words),
        });
    }
    let summary = summarize(&rows, gold.len(), sys.len())?;
    Ok(ParsevalReport { rows, summary })
}

fn summarize(rows: &[SentenceRow], gold_trees: usize, sys_trees: usize) -> Result<ParsevalSummary> {
    let sum = |f: fn(&SentenceRow) -> usize| rows.iter().map(f).sum::<usize>();
    let count = |f: &dyn Fn(&SentenceRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let n = rows.len();
    let (gold, test, tp) = (
        sum(|r| r.gold_brackets),
        sum(|r| r.test_brackets),
        sum(|r| r.matched_brackets),
    );
    let cross = sum(|r| r.cross_brackets);
    let (words, correct) = (sum(|r| r.words), sum(|r| r.correct_tags));
    Ok(ParsevalSummary {
        sentences: n,
        gold_trees,
        sys_trees,
        gold_constituents: gold,
        sys_constituents: test,
        matched_constituents: tp,
        cross_brackets: cross,
        bracketing: prf(tp, test, gold)?,
        words,
        correct_tags: correct,
        tag_accuracy: ratio(correct, words),
        complete_match: ratio(count(&|r| r.is_complete_match()), n),
        average_crossing: if n == 0 { 0.0 } else { cross as f64 / n as f64 },
        no_crossing: ratio(count(&|r| r.cross_brackets == 0), n),
        two_or_less_crossing: ratio(count(&|r| r.cross_brackets <= 2), n),
    })
}

const RULE: &str = "============================================================================";

/// Renders a single row in the fixed-width layout.
pub fn format_row(r: &SentenceRow) -> String {
    alloc::format!(
        "{:>4}  {:>4}  {:>3}  {:>6.2} {:>6.2}  {:>5}  {:>5} {:>5}  {:>5}  {:>5} {:>5}  {:>6.2}",
        r.id,
        r.length,
        r.status,
        r.recall,
        r.precision,
        r.matched_brackets,
        r.gold_brackets,
        r.test_brackets,
        r.cross_brackets,
        r.words,
        r.correct_tags,
        r.tag_accuracy
    )
}

/// evalb-style report: header, one row per group, summary block.
pub fn format_report(rows: &[SentenceRow], summary: &ParsevalSummary) -> String {
    let mut out = String::new();
    out.push_str(
        "  Sent.                         Matched  Bracket      Cross         Correct    Tag\n",
    );
    out.push_str(
        "  ID   Len  Stat  Recal  Prec.  Bracket  gold  test  Bracket  Words  Tags  Accracy\n",
    );
    out.push_str(RULE);
    out.push('\n');
    for r in rows {
        out.push_str(&format_row(r));
        out.push('\n');
    }
    out.push_str(RULE);
    out.push('\n');
    let s = summary;
    let lines: [(&str, String); 19] = [
        ("Number of sentence", alloc::format!("{:>6}", s.sentences)),
        ("Number of Error sentence", alloc::format!("{:>6}", 0)),
        ("Number of Skip  sentence", alloc::format!("{:>6}", 0)),
        (
            "Number of Valid sentence",
            alloc::format!("{:>6}", s.sentences),
        ),
        ("Gold trees", alloc::format!("{:>6}", s.gold_trees)),
        ("Test trees", alloc::format!("{:>6}", s.sys_trees)),
        (
            "Gold brackets",
            alloc::format!("{:>6}", s.gold_constituents),
        ),
        ("Test brackets", alloc::format!("{:>6}", s.sys_constituents)),
        (
            "Matched brackets",
            alloc::format!("{:>6}", s.matched_constituents),
        ),
        ("Cross brackets", alloc::format!("{:>6}", s.cross_brackets)),
        (
            "Bracketing Recall",
            alloc::format!("{:>6.2}", 100.0 * s.bracketing.recall),
        ),
        (
            "Bracketing Precision",
            alloc::format!("{:>6.2}", 100.0 * s.bracketing.precision),
        ),
        (
            "Bracketing FMeasure",
            alloc::format!("{:>6.2}", 100.0 * s.bracketing.f1),
        ),
        (
            "Complete match",
            alloc::format!("{:>6.2}", 100.0 * s.complete_match),
        ),
        (
            "Average crossing",
            alloc::format!("{:>6.2}", s.average_crossing),
        ),
        (
            "No crossing",
            alloc::format!("{:>6.2}", 100.0 * s.no_crossing),
        ),
        (
            "2 or less crossing",
            alloc::format!("{:>6.2}", 100.0 * s.two_or_less_crossing),
        ),
        (
            "Tagging accuracy",
            alloc::format!("{:>6.2}", 100.0 * s.tag_accuracy),
        ),
        (
            "Correct tags / words",
            alloc::format!("{} / {}", s.correct_tags, s.words),
        ),
    ];
    out.push_str("=== Summary ===\n");
    for (name, value) in lines {
        let _ = writeln!(out, "{name:<26}= {value}");
    }
    out
}
