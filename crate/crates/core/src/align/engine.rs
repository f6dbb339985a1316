//! Monotone block alignment shared by sentence and word alignment.
//!
//! Both sides are sequences of units (sentences or tokens) whose texts, once
//! concatenated, spell (nearly) the same string. Blocks are emitted left to
//! right and tile both sequences.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::MatchKind;
use crate::{Error, Result};

/// Unit texts concatenated into one buffer with byte and character offsets.
pub(crate) struct Units {
    buf: String,
    bytes: Vec<usize>,
    chars: Vec<usize>,
}

impl Units {
    pub(crate) fn new<I, S>(texts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut buf = String::new();
        let mut bytes = alloc::vec![0];
        let mut chars = alloc::vec![0];
        for t in texts {
            let t = t.as_ref();
            buf.push_str(t);
            bytes.push(buf.len());
            chars.push(chars[chars.len() - 1] + t.chars().count());
        }
        Units { buf, bytes, chars }
    }

    pub(crate) fn len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub(crate) fn text(&self, i: usize) -> &str {
        &self.buf[self.bytes[i]..self.bytes[i + 1]]
    }

    pub(crate) fn span(&self, r: Range<usize>) -> &str {
        &self.buf[self.bytes[r.start]..self.bytes[r.end]]
    }

    fn remaining_chars(&self, from: usize) -> usize {
        self.chars[self.len()] - self.chars[from]
    }

    /// Characters before unit `i` plus the characters of `prefix` bytes
    /// into it.
    fn char_offset(&self, i: usize, prefix: &str) -> usize {
        self.chars[i] + prefix.chars().count()
    }
}

/// Whether one text is a prefix of the other.
pub(crate) fn prefix_related(a: &str, b: &str) -> bool {
    let n = a.len().min(b.len());
    a.as_bytes()[..n] == b.as_bytes()[..n]
}

/// The case analysis that differs between sentence and word alignment.
pub(crate) trait Rules {
    /// Units `i` and `j` differ but may still be paired one to one.
    fn substitute(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool;
    /// After a mismatch, the pair `(i, j)` marks a point where both sides
    /// agree again.
    fn resync(&self, left: &Units, right: &Units, i: usize, j: usize) -> bool;
    /// A mismatched block with these texts may be emitted.
    fn accept(&self, left: &str, right: &str) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Block {
    pub left: Range<usize>,
    pub right: Range<usize>,
    pub kind: MatchKind,
}

/// Grows the block starting at `(i, j)` by always extending the side whose
/// accumulated text is shorter, as long as one accumulated text stays a
/// prefix of the other. Returns the block ends once both texts are equal.
fn exact_block(left: &Units, right: &Units, i: usize, j: usize) -> Option<(usize, usize)> {
    let lb = left.buf.as_bytes();
    let rb = right.buf.as_bytes();
    let (l0, r0) = (left.bytes[i], right.bytes[j]);
    let (mut li, mut rj) = (i + 1, j + 1);
    let mut verified = 0;
    loop {
        let llen = left.bytes[li] - l0;
        let rlen = right.bytes[rj] - r0;
        let common = llen.min(rlen);
        if lb[l0 + verified..l0 + common] != rb[r0 + verified..r0 + common] {
            return None;
        }
        verified = common;
        if llen == rlen {
            return Some((li, rj));
        }
        if llen < rlen {
            if li == left.len() {
                return None;
            }
            li += 1;
        } else {
            if rj == right.len() {
                return None;
            }
            rj += 1;
        }
    }
}

fn divergence(left: &Units, right: &Units, l: Range<usize>, r: Range<usize>) -> Error {
    let (a, b) = (left.span(l.clone()), right.span(r.clone()));
    let mut common = 0;
    for ((ia, ca), cb) in a.char_indices().zip(b.chars()) {
        if ca != cb {
            break;
        }
        common = ia + ca.len_utf8();
    }
    Error::AlignmentImpossible {
        gold_offset: left.char_offset(l.start, &a[..common]),
        sys_offset: right.char_offset(r.start, &b[..common]),
    }
}

pub(crate) fn align_units<R: Rules>(left: &Units, right: &Units, rules: &R) -> Result<Vec<Block>> {
    let (nl, nr) = (left.len(), right.len());
    let mut blocks: Vec<Block> = Vec::new();
    let (mut i, mut j) = (0, 0);

    while i < nl && j < nr {
        if left.text(i) == right.text(j) {
            blocks.push(Block {
                left: i..i + 1,
                right: j..j + 1,
                kind: MatchKind::Exact,
            });
            i += 1;
            j += 1;
            continue;
        }
        if let Some((li, rj)) = exact_block(left, right, i, j) {
            blocks.push(Block {
                left: i..li,
                right: j..rj,
                kind: MatchKind::Exact,
            });
            i = li;
            j = rj;
            continue;
        }
        if rules.substitute(left, right, i, j) {
            blocks.push(Block {
                left: i..i + 1,
                right: j..j + 1,
                kind: MatchKind::Similar,
            });
            i += 1;
            j += 1;
            continue;
        }

        // Accumulate until both sides agree again, extending the side with
        // more text left to consume.
        let (mut li, mut rj) = (i + 1, j + 1);
        loop {
            if li == nl || rj == nr {
                li = nl;
                rj = nr;
                if !rules.accept(left.span(i..li), right.span(j..rj)) {
                    return Err(divergence(left, right, i..li, j..rj));
                }
                break;
            }
            if rules.resync(left, right, li, rj)
                && rules.accept(left.span(i..li), right.span(j..rj))
            {
                break;
            }
            if left.remaining_chars(li) > right.remaining_chars(rj) {
                li += 1;
            } else {
                rj += 1;
            }
        }
        blocks.push(Block {
            left: i..li,
            right: j..rj,
            kind: MatchKind::Similar,
        });
        i = li;
        j = rj;
    }

    if i < nl || j < nr {
        // One side ran out first: the trailing units join the last block.
        let Some(last) = blocks.last_mut() else {
            return Err(divergence(left, right, 0..nl, 0..nr));
        };
        let (l, r) = (last.left.start..nl, last.right.start..nr);
        if !rules.accept(left.span(l.clone()), right.span(r.clone())) {
            return Err(divergence(left, right, l, r));
        }
        last.left = l;
        last.right = r;
        last.kind = MatchKind::Similar;
    }
    Ok(blocks)
}
