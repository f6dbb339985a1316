//! Monotone sentence alignment and per-group word alignment.
//!
//! Sentences are compared by their stripped forms (surfaces concatenated
//! without separators, after normalization). A gold and a system sentence
//! pair up one to one when their stripped forms are equal, or when they are
//! similar and the following pair matches too. Otherwise sentences are
//! accumulated on both sides until the accumulated texts agree, which yields
//! m:n groups. Inside every group the merged token lists are aligned the same
//! way, producing [`WordLink`]s that tile both token sequences.
//!
//! When gold and system spell exactly the same text, every emitted group and
//! every link is an exact match; fuzzy matching only engages where the texts
//! genuinely differ (different morphological analyses, contractions missing
//! from the lexicon).

mod engine;
mod similarity;

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

pub use similarity::{jaro, length_ratio, similarity, SimilarityConfig};

use crate::text::{
    stripped_form, stripped_tokens, DocumentStream, NormalizationPolicy, SentenceRecord,
};
use crate::Result;
use engine::{align_units, prefix_related, Rules, Units};

/// How the two sides of a group or link were matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchKind {
    /// Normalized texts are identical.
    Exact,
    /// Texts differ; the pairing rests on similarity or on position.
    Similar,
}

/// A block of merged gold tokens aligned with a block of merged system
/// tokens. Ranges are half-open indices into the group's merged token lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordLink {
    pub gold_range: Range<usize>,
    pub sys_range: Range<usize>,
    pub kind: MatchKind,
}

impl WordLink {
    pub fn is_one_to_one(&self) -> bool {
        self.gold_range.len() == 1 && self.sys_range.len() == 1
    }
}

/// Re-indexed id of a token inside its group: the link it belongs to and,
/// when that link holds several tokens on this side, its 1-based position in
/// the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId {
    pub link: usize,
    pub sub: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentGroup {
    /// Range of gold sentence indices in this group.
    pub gold_sentences: Range<usize>,
    /// Range of system sentence indices in this group.
    pub sys_sentences: Range<usize>,
    pub kind: MatchKind,
    /// Gold sentences of the group concatenated; token indices run
    /// continuously across the original sentence boundaries.
    pub merged_gold: SentenceRecord,
    pub merged_sys: SentenceRecord,
    pub word_links: Vec<WordLink>,
    pub gold_ids: Vec<WordId>,
    pub sys_ids: Vec<WordId>,
}

impl AlignmentGroup {
    pub fn is_one_to_one(&self) -> bool {
        self.gold_sentences.len() == 1 && self.sys_sentences.len() == 1
    }

    /// Both merged sides have the same stripped form under `policy`.
    pub fn is_sound(&self, policy: &NormalizationPolicy) -> bool {
        stripped_form(&self.merged_gold, policy) == stripped_form(&self.merged_sys, policy)
    }

    /// Index of the link each merged gold token belongs to.
    pub fn gold_link_of(&self) -> Vec<usize> {
        link_of(&self.word_links, self.merged_gold.len(), |l| {
            l.gold_range.clone()
        })
    }

    /// Index of the link each merged system token belongs to.
    pub fn sys_link_of(&self) -> Vec<usize> {
        link_of(&self.word_links, self.merged_sys.len(), |l| {
            l.sys_range.clone()
        })
    }
}

fn link_of(links: &[WordLink], n: usize, side: impl Fn(&WordLink) -> Range<usize>) -> Vec<usize> {
    let mut out = alloc::vec![0; n];
    for (k, link) in links.iter().enumerate() {
        for slot in &mut out[side(link)] {
            *slot = k;
        }
    }
    out
}

/// Concatenates consecutive sentences into one.
pub fn merge_sentences(sentences: &[SentenceRecord]) -> SentenceRecord {
    match sentences {
        [one] => one.clone(),
        _ => SentenceRecord::new(
            sentences
                .iter()
                .flat_map(|s| s.surfaces().map(String::from)),
        )
        .expect("merged sentences are non-empty and hold valid tokens"),
    }
}

struct SentenceRules<'a> {
    cfg: &'a SimilarityConfig,
}

impl SentenceRules<'_> {
    fn similar(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        self.cfg.is_similar(left.text(i), right.text(j))
    }

    fn lookahead(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        match (i < left.len(), j < right.len()) {
            (false, false) => true,
            (true, true) => self.similar(left, right, i, j),
            _ => false,
        }
    }
}

impl Rules for SentenceRules<'_> {
    fn substitute(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        self.similar(left, right, i, j) && self.lookahead(left, right, i + 1, j + 1)
    }

    fn resync(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        prefix_related(left.text(i), right.text(j)) || self.substitute(left, right, i, j)
    }

    fn accept(&self, left: &str, right: &str) -> bool {
        self.cfg.is_similar(left, right)
    }
}

struct WordRules;

impl Rules for WordRules {
    fn substitute(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        let (ni, nj) = (i + 1, j + 1);
        match (ni < left.len(), nj < right.len()) {
            (false, false) => true,
            (true, true) => left.text(ni) == right.text(nj),
            _ => false,
        }
    }

    fn resync(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool {
        left.text(i) == right.text(j)
    }

    fn accept(&self, _: &str, _: &str) -> bool {
        true
    }
}

/// Aligns gold and system sentences into monotone groups covering both
/// documents. Word links are left empty; see [`align_words`].
pub fn align_sentences(
    gold: &DocumentStream,
    sys: &DocumentStream,
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
) -> Result<Vec<AlignmentGroup>> {
    cfg.validate()?;
    let left = Units::new(gold.sentences.iter().map(|s| stripped_form(s, policy)));
    let right = Units::new(sys.sentences.iter().map(|s| stripped_form(s, policy)));
    let blocks = align_units(&left, &right, &SentenceRules { cfg })?;
    Ok(blocks
        .into_iter()
        .map(|b| AlignmentGroup {
            merged_gold: merge_sentences(&gold.sentences[b.left.clone()]),
            merged_sys: merge_sentences(&sys.sentences[b.right.clone()]),
            gold_sentences: b.left,
            sys_sentences: b.right,
            kind: b.kind,
            word_links: Vec::new(),
            gold_ids: Vec::new(),
            sys_ids: Vec::new(),
        })
        .collect())
}

/// Aligns the merged tokens of `group`, filling in its word links.
///
/// Tokens are compared after lowercasing/NFC (the lexicon is not applied, so
/// `ca n't` against `can not` becomes one 2:2 link).
pub fn align_words(
    mut group: AlignmentGroup,
    policy: &NormalizationPolicy,
) -> Result<AlignmentGroup> {
    let left = Units::new(
        group
            .merged_gold
            .surfaces()
            .map(|s| policy.normalize_token(s)),
    );
    let right = Units::new(
        group
            .merged_sys
            .surfaces()
            .map(|s| policy.normalize_token(s)),
    );
    let blocks = align_units(&left, &right, &WordRules)?;
    group.word_links = blocks
        .into_iter()
        .map(|b| {
            let kind = if b.kind == MatchKind::Similar
                && link_texts_equal(&group, &b.left, &b.right, policy)
            {
                MatchKind::Exact
            } else {
                b.kind
            };
            WordLink {
                gold_range: b.left,
                sys_range: b.right,
                kind,
            }
        })
        .collect();
    Ok(group)
}

/// Lexicon-aware comparison of the two sides of a link.
fn link_texts_equal(
    group: &AlignmentGroup,
    g: &Range<usize>,
    s: &Range<usize>,
    policy: &NormalizationPolicy,
) -> bool {
    if policy.exception_lexicon.is_empty() {
        return false;
    }
    let gold: Vec<&str> = group
        .merged_gold
        .surfaces()
        .skip(g.start)
        .take(g.len())
        .collect();
    let sys: Vec<&str> = group
        .merged_sys
        .surfaces()
        .skip(s.start)
        .take(s.len())
        .collect();
    stripped_tokens(&gold, policy) == stripped_tokens(&sys, policy)
}

/// Assigns every merged token its [`WordId`].
pub fn reindex(groups: Vec<AlignmentGroup>) -> Vec<AlignmentGroup> {
    groups
        .into_iter()
        .map(|mut g| {
            g.gold_ids = ids(&g.word_links, g.merged_gold.len(), |l| l.gold_range.clone());
            g.sys_ids = ids(&g.word_links, g.merged_sys.len(), |l| l.sys_range.clone());
            g
        })
        .collect()
}

fn ids(links: &[WordLink], n: usize, side: impl Fn(&WordLink) -> Range<usize>) -> Vec<WordId> {
    let mut out = Vec::with_capacity(n);
    for (k, link) in links.iter().enumerate() {
        let r = side(link);
        let multi = r.len() > 1;
        out.extend((0..r.len()).map(|p| WordId {
            link: k,
            sub: multi.then_some(p + 1),
        }));
    }
    out
}

/// Sentence alignment, word alignment and re-indexing in one call.
pub fn align(
    gold: &DocumentStream,
    sys: &DocumentStream,
    policy: &NormalizationPolicy,
    cfg: &SimilarityConfig,
) -> Result<Vec<AlignmentGroup>> {
    let groups = align_sentences(gold, sys, policy, cfg)?
        .into_iter()
        .map(|g| align_words(g, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(reindex(groups))
}
