//! Tokenized documents and the readers that build them.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

use crate::{Error, Result};

/// One token: a non-empty surface without whitespace and its position in the
/// sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    surface: String,
    index: usize,
}

impl Token {
    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

fn check_surface(surface: &str) -> Result<()> {
    if surface.is_empty() {
        return Err(Error::Token("empty token".to_owned()));
    }
    if surface.chars().any(char::is_whitespace) {
        return Err(Error::Token(format!(
            "token {surface:?} contains whitespace"
        )));
    }
    Ok(())
}

/// An ordered, non-empty list of tokens together with their concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceRecord {
    tokens: Vec<Token>,
    stripped: String,
}

impl SentenceRecord {
    /// Builds a sentence from token surfaces, numbering them from 0.
    pub fn new<I, S>(surfaces: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut tokens = Vec::new();
        let mut stripped = String::new();
        for (index, surface) in surfaces.into_iter().enumerate() {
            let surface = surface.into();
            check_surface(&surface)?;
            stripped.push_str(&surface);
            tokens.push(Token { surface, index });
        }
        if tokens.is_empty() {
            return Err(Error::Token("sentence has no tokens".to_owned()));
        }
        Ok(SentenceRecord { tokens, stripped })
    }

    /// Splits `line` on runs of Unicode whitespace; `None` for blank lines.
    pub fn from_line(line: &str) -> Option<Self> {
        let tokens: Vec<Token> = line
            .split_whitespace()
            .enumerate()
            .map(|(index, s)| Token {
                surface: s.to_owned(),
                index,
            })
            .collect();
        if tokens.is_empty() {
            return None;
        }
        let stripped = tokens.iter().map(|t| t.surface.as_str()).collect();
        Some(SentenceRecord { tokens, stripped })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Token surfaces concatenated without separators.
    pub fn stripped(&self) -> &str {
        &self.stripped
    }

    /// Surfaces joined by single spaces.
    pub fn to_line(&self) -> String {
        let mut out = String::with_capacity(self.stripped.len() + self.tokens.len());
        for (i, s) in self.surfaces().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(s);
        }
        out
    }
}

/// Sentences in input order plus a label naming their origin.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DocumentStream {
    pub sentences: Vec<SentenceRecord>,
    pub source_label: String,
}

impl DocumentStream {
    pub fn new(sentences: Vec<SentenceRecord>) -> Self {
        DocumentStream {
            sentences,
            source_label: String::new(),
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.source_label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(SentenceRecord::len).sum()
    }

    /// One space-joined line per sentence, each terminated by `\n`.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.to_line());
            out.push('\n');
        }
        out
    }
}

/// Token-sequence equivalences such as `ca n't` ≡ `can not`.
///
/// Every entry maps a variant sequence onto a canonical one. Canonicalization
/// rewrites variants wherever they occur (longest variant first) and leaves
/// canonical sequences untouched, so applying it twice changes nothing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExceptionLexicon {
    entries: BTreeMap<Vec<String>, Vec<String>>,
    longest: usize,
}

impl ExceptionLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shipped English defaults: the `ca n't` contraction split and PTB
    /// quote styles.
    pub fn english() -> Self {
        let mut lex = Self::new();
        lex.insert(&["ca", "n't"], &["can", "not"]);
        lex.insert(&["``"], &["\""]);
        lex.insert(&["''"], &["\""]);
        lex
    }

    pub fn insert<S: AsRef<str>>(&mut self, variant: &[S], canonical: &[S]) {
        let variant: Vec<String> = variant.iter().map(|s| s.as_ref().to_owned()).collect();
        let canonical = canonical.iter().map(|s| s.as_ref().to_owned()).collect();
        if variant.is_empty() {
            return;
        }
        self.longest = self.longest.max(variant.len());
        self.entries.insert(variant, canonical);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses the line format `variant tokens<TAB>canonical tokens`.
    /// Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Self::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(left), Some(right), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Lexicon {
                    line: n + 1,
                    message: "expected exactly two tab-separated token sequences".to_owned(),
                });
            };
            let variant: Vec<&str> = left.split_whitespace().collect();
            let canonical: Vec<&str> = right.split_whitespace().collect();
            if variant.is_empty() || canonical.is_empty() {
                return Err(Error::Lexicon {
                    line: n + 1,
                    message: "empty token sequence".to_owned(),
                });
            }
            lex.insert(&variant, &canonical);
        }
        Ok(lex)
    }

    /// Rewrites every variant occurrence in `tokens` to its canonical form.
    pub fn canonicalize<'a>(&'a self, tokens: &[&'a str]) -> Vec<&'a str> {
        if self.entries.is_empty() {
            return tokens.to_vec();
        }
        let mut out = Vec::with_capacity(tokens.len());
        let mut key: Vec<String> = Vec::with_capacity(self.longest);
        let mut i = 0;
        'outer: while i < tokens.len() {
            let max = self.longest.min(tokens.len() - i);
            for n in (1..=max).rev() {
                key.clear();
                key.extend(tokens[i..i + n].iter().map(|s| (*s).to_owned()));
                if let Some(canonical) = self.entries.get(&key) {
                    out.extend(canonical.iter().map(String::as_str));
                    i += n;
                    continue 'outer;
                }
            }
            out.push(tokens[i]);
            i += 1;
        }
        out
    }
}

/// How token surfaces are normalized before comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizationPolicy {
    pub lowercase: bool,
    pub unicode_nfc: bool,
    pub exception_lexicon: ExceptionLexicon,
}

impl NormalizationPolicy {
    /// No lowercasing, no NFC, empty lexicon.
    pub fn identity() -> Self {
        Self::default()
    }

    fn is_identity(&self) -> bool {
        !self.lowercase && !self.unicode_nfc && self.exception_lexicon.is_empty()
    }

    /// Lowercasing and NFC for a single surface (no lexicon).
    pub fn normalize_token(&self, surface: &str) -> String {
        let mut out = if self.lowercase {
            surface.to_lowercase()
        } else {
            surface.to_owned()
        };
        if self.unicode_nfc {
            out = out.nfc().collect();
        }
        out
    }
}

/// Concatenated surfaces of `sentence` after applying `policy`: lexicon,
/// then lowercasing, then NFC.
pub fn stripped_form(sentence: &SentenceRecord, policy: &NormalizationPolicy) -> String {
    if policy.is_identity() {
        return sentence.stripped.clone();
    }
    let surfaces: Vec<&str> = sentence.surfaces().collect();
    stripped_tokens(&surfaces, policy)
}

/// [`stripped_form`] for an arbitrary token slice.
pub fn stripped_tokens(surfaces: &[&str], policy: &NormalizationPolicy) -> String {
    policy
        .exception_lexicon
        .canonicalize(surfaces)
        .into_iter()
        .map(|s| policy.normalize_token(s))
        .collect()
}

/// One sentence per non-blank line, tokens split on whitespace runs. Both LF
/// and CRLF line endings are accepted.
pub fn read_plain(text: &str) -> DocumentStream {
    DocumentStream::new(text.lines().filter_map(SentenceRecord::from_line).collect())
}

/// Which CoNLL-U lines provide the token surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConlluOptions {
    /// Use the FORM of multiword-token range lines (`3-4`) and drop the
    /// syntactic words they cover. Off by default: syntactic words are used
    /// and range lines are skipped.
    pub multiword_tokens: bool,
}

enum ConlluId {
    Word(usize),
    Range { last: usize },
    Empty,
}

fn parse_conllu_id(field: &str) -> Option<ConlluId> {
    if let Some((a, b)) = field.split_once('-') {
        let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
        return (a >= 1 && a <= b).then_some(ConlluId::Range { last: b });
    }
    if let Some((a, b)) = field.split_once('.') {
        let _: usize = a.parse().ok()?;
        let _: usize = b.parse().ok()?;
        return Some(ConlluId::Empty);
    }
    let n: usize = field.parse().ok()?;
    (n >= 1).then_some(ConlluId::Word(n))
}

/// Reads sentences from CoNLL-U; only the ID and FORM columns are consulted.
pub fn read_conllu(text: &str, options: ConlluOptions) -> Result<DocumentStream> {
    let mut sentences = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut covered_until = 0usize;

    fn flush(current: &mut Vec<String>, sentences: &mut Vec<SentenceRecord>) {
        if !current.is_empty() {
            // Surfaces come from split_whitespace and are never empty.
            sentences.push(SentenceRecord::new(current.drain(..)).expect("valid tokens"));
        }
    }

    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            flush(&mut current, &mut sentences);
            covered_until = 0;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let id_field = cols.next().unwrap_or_default();
        let Some(form) = cols.next() else {
            return Err(Error::Conllu {
                line: line_no,
                message: "expected tab-separated columns".to_owned(),
            });
        };
        let id = parse_conllu_id(id_field).ok_or_else(|| Error::Conllu {
            line: line_no,
            message: format!("malformed ID field {id_field:?}"),
        })?;
        let take = match id {
            ConlluId::Empty => false,
            ConlluId::Range { last } => {
                if options.multiword_tokens {
                    covered_until = last;
                }
                options.multiword_tokens
            }
            ConlluId::Word(w) => w > covered_until,
        };
        if !take {
            continue;
        }
        // Some treebanks allow spaces inside FORM; each piece becomes a token.
        let before = current.len();
        current.extend(form.split_whitespace().map(ToString::to_string));
        if current.len() == before {
            return Err(Error::Conllu {
                line: line_no,
                message: "empty FORM".to_owned(),
            });
        }
    }
    flush(&mut current, &mut sentences);
    Ok(DocumentStream::new(sentences))
}
