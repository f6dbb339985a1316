//! Character similarity used for fuzzy sentence matching.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Thresholds and scales for fuzzy matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityConfig {
    /// Minimum similarity for two sentences to count as the same sentence.
    /// `1.0` disables fuzzy matching.
    pub threshold_alpha: f64,
    /// Weight of each shared prefix or suffix character.
    pub prefix_suffix_scale_p: f64,
    /// Cap on the counted prefix and suffix lengths.
    pub max_affix_len: usize,
    /// Use the length-ratio dissimilarity instead of Jaro with affix boost.
    pub use_length_ratio: bool,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            threshold_alpha: 0.9,
            prefix_suffix_scale_p: 0.1,
            max_affix_len: 4,
            use_length_ratio: false,
        }
    }
}

impl SimilarityConfig {
    /// Exact matching only.
    pub fn exact() -> Self {
        SimilarityConfig {
            threshold_alpha: 1.0,
            ..Self::default()
        }
    }

    pub fn with_threshold(mut self, alpha: f64) -> Self {
        self.threshold_alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold_alpha) {
            return Err(Error::Config(format!(
                "threshold alpha {} is outside [0, 1]",
                self.threshold_alpha
            )));
        }
        let weight = self.prefix_suffix_scale_p * self.max_affix_len as f64;
        if !(weight > 0.0 && weight <= 0.5) {
            return Err(Error::Config(format!(
                "affix scale {} times max affix length {} must lie in (0, 0.5]",
                self.prefix_suffix_scale_p, self.max_affix_len
            )));
        }
        Ok(())
    }

    /// Whether two (non-empty) strings are close enough to be matched.
    pub fn is_similar(&self, a: &str, b: &str) -> bool {
        if a == b {
            return true;
        }
        if a.is_empty() || b.is_empty() || self.threshold_alpha >= 1.0 {
            return false;
        }
        if self.use_length_ratio {
            length_ratio(a, b).is_ok_and(|d| d < 1.0 - self.threshold_alpha)
        } else {
            similarity(a, b, self).is_ok_and(|s| s >= self.threshold_alpha)
        }
    }
}

/// Plain Jaro similarity over already decoded characters.
pub fn jaro(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matched: Vec<char> = Vec::new();
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == ca {
                b_used[j] = true;
                a_matched.push(ca);
                break;
            }
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let mismatched = b
        .iter()
        .zip(&b_used)
        .filter_map(|(c, used)| used.then_some(c))
        .zip(&a_matched)
        .filter(|(x, y)| x != y)
        .count();
    let t = (mismatched / 2) as f64;
    let m = m as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

fn common_affixes(a: &[char], b: &[char], cap: usize) -> (usize, usize) {
    let prefix = a
        .iter()
        .zip(b)
        .take(cap)
        .take_while(|(x, y)| x == y)
        .count();
    let suffix = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take(cap)
        .take_while(|(x, y)| x == y)
        .count();
    (prefix, suffix)
}

/// Jaro similarity boosted by the shared prefix length `l` and suffix length
/// `l'` (each capped at `max_affix_len`):
///
/// `sim = jaro + (l*p + l'*p) / 2 * (1 - jaro)`.
pub fn similarity(s1: &str, s2: &str, cfg: &SimilarityConfig) -> Result<f64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptyString);
    }
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    let base = jaro(&a, &b);
    if base == 0.0 {
        return Ok(0.0);
    }
    let (l, l2) = common_affixes(&a, &b, cfg.max_affix_len);
    let boost =
        (l as f64 * cfg.prefix_suffix_scale_p + l2 as f64 * cfg.prefix_suffix_scale_p) / 2.0;
    Ok((base + boost * (1.0 - base)).min(1.0))
}

/// Length dissimilarity `2 |len1 - len2| / (len1 + len2)` in characters.
pub fn length_ratio(s1: &str, s2: &str) -> Result<f64> {
    let (n1, n2) = (s1.chars().count(), s2.chars().count());
    if n1 + n2 == 0 {
        return Err(Error::EmptyString);
    }
    Ok(2.0 * n1.abs_diff(n2) as f64 / (n1 + n2) as f64)
}
