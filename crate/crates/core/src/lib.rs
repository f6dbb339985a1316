//! Evaluation of NLP system output against gold annotations whose sentence
//! boundaries and tokenization disagree.
//!
//! Gold and system documents are first aligned monotonically at the sentence
//! level (by comparing characters with token separators removed) and then at
//! the word level inside each aligned block. The classical metrics are then
//! applied unchanged to the aligned units:
//!
//! * [`preprocess`]: sentence-boundary and token precision/recall/F1,
//! * [`parseval`]: PARSEVAL bracket scores over merged, re-indexed trees,
//! * [`gec`]: F-beta over m2 edits re-offset into merged sentences.
//!
//! The crate is `no_std` and only needs an allocator; file handling lives in
//! the `jpeval` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod align;
mod error;
pub mod gec;
pub mod metrics;
pub mod parseval;
pub mod preprocess;
pub mod text;
pub mod tree;

pub use error::{Error, Result};
