//! Sentence-boundary and tokenization scoring over aligned documents.
//!
//! A sentence is a true positive when it forms a 1:1 group whose stripped
//! forms are identical. Merged (m:n) groups never earn sentence credit, but
//! their tokens are still scored through word alignment, so a boundary
//! error does not wipe out the token credit of the sentences involved.

use alloc::vec;
use alloc::vec::Vec;

use crate::align::{
    align_sentences, align_words, AlignmentGroup, MatchKind, SimilarityConfig, WordLink,
};
use crate::metrics::{prf, Prf};
use crate::text::{DocumentStream, NormalizationPolicy};
use crate::Result;

/// Raw counts behind sentence and token precision/recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PreprocessCounts {
    pub sys_sentences: usize,
    pub gold_sentences: usize,
    pub sys_tokens: usize,
    pub gold_tokens: usize,
    pub tp_sentences: usize,
    pub tp_tokens: usize,
}

impl PreprocessCounts {
    fn totals(gold: &DocumentStream, sys: &DocumentStream) -> Self {
        PreprocessCounts {
            sys_sentences: sys.len(),
            gold_sentences: gold.len(),
            sys_tokens: sys.token_count(),
            gold_tokens: gold.token_count(),
            ..Default::default()
        }
    }

    /// Precision over system sentences, recall over gold sentences.
    pub fn sentence_scores(&self) -> Prf {
        prf(self.tp_sentences, self.sys_sentences, self.gold_sentences).expect("tp within totals")
    }

    pub fn token_scores(&self) -> Prf {
        prf(self.tp_tokens, self.sys_tokens, self.gold_tokens).expect("tp within totals")
    }
}

/// Length of the longest common subsequence of two token lists.
fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (k, y) in b.iter().enumerate() {
            let up = row[k + 1];
            row[k + 1] = if x == y { diag + 1 } else { up.max(row[k]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// Token true positives contributed by one word link.
///
/// An exact 1:1 link is one correct token. An exact multi-token link shares
/// no token boundary inside it, so it earns nothing. When the two sides
/// spell different text (a morphological mismatch), tokens that survive
/// unchanged on both sides are counted by longest common subsequence.
pub fn link_token_credit(
    group: &AlignmentGroup,
    link: &WordLink,
    policy: &NormalizationPolicy,
) -> usize {
    match (link.kind, link.is_one_to_one()) {
        (MatchKind::Exact, true) => 1,
        (MatchKind::Exact, false) => 0,
        (MatchKind::Similar, _) => {
            let norm = |s: &str| policy.normalize_token(s);
            let gold: Vec<_> = group.merged_gold.tokens()[link.gold_range.clone()]
                .iter()
                .map(|t| norm(t.surface()))
                .collect();
            let sys: Vec<_> = group.merged_sys.tokens()[link.sys_range.clone()]
                .iter()
                .map(|t| norm(t.surface()))
                .collect();
            let gold: Vec<&str> = gold.iter().map(|s| s.as_str()).collect();
            let sys: Vec<&str> = sys.iter().map(|s| s.as_str()).collect();
            lcs_len(&gold, &sys)
        }
    }
}

fn group_token_credit(group: &AlignmentGroup, policy: &NormalizationPolicy) -> usize {
    group
        .word_links
        .iter()
        .map(|l| link_token_credit(group, l, policy))
        .sum()
}

fn same_tokenization(group: &AlignmentGroup, policy: &NormalizationPolicy) -> bool {
    group.merged_gold.len() == group.merged_sys.len()
        && group
            .merged_gold
            .surfaces()
            .zip(group.merged_sys.surfaces())
            .all(|(g, s)| g == s || policy.normalize_token(g) == policy.normalize_token(s))
}

fn earns_sentence_credit(group: &AlignmentGroup) -> bool {
    group.is_one_to_one() && group.kind == MatchKind::Exact
}

/// Scores sentence boundaries and tokens in a single pass over the aligned
/// groups.
pub fn evaluate_joint(
    gold: &DocumentStream,
    sys: &DocumentStream,
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
) -> Result<PreprocessCounts> {
    let mut counts = PreprocessCounts::totals(gold, sys);
    for group in align_sentences(gold, sys, policy, cfg)? {
        if earns_sentence_credit(&group) {
            counts.tp_sentences += 1;
            if same_tokenization(&group, policy) {
                counts.tp_tokens += group.merged_gold.len();
                continue;
            }
        }
        let group = align_words(group, policy)?;
        counts.tp_tokens += group_token_credit(&group, policy);
    }
    Ok(counts)
}

/// Two-pass variant: sentence boundaries are scored during sentence
/// alignment, tokens afterwards over every aligned group. Produces the same
/// counts as [`evaluate_joint`].
pub fn evaluate_basic(
    gold: &DocumentStream,
    sys: &DocumentStream,
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
) -> Result<PreprocessCounts> {
    let mut counts = PreprocessCounts::totals(gold, sys);
    let groups = align_sentences(gold, sys, policy, cfg)?;
    counts.tp_sentences = groups.iter().filter(|g| earns_sentence_credit(g)).count();

    for group in groups {
        let group = align_words(group, policy)?;
        counts.tp_tokens += if earns_sentence_credit(&group)
            && group
                .word_links
                .iter()
                .all(|l| l.is_one_to_one() && l.kind == MatchKind::Exact)
        {
            group.merged_gold.len()
        } else {
            group_token_credit(&group, policy)
        };
    }
    Ok(counts)
}
