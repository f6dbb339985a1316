use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("conllu line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("exception lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },

    #[error("bracketed tree line {line}, column {column}: {message}")]
    Bracket {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("parameter file line {line}: {message}")]
    Params { line: usize, message: String },

    #[error("m2 entry {entry} (line {line}): {message}")]
    M2 {
        entry: usize,
        line: usize,
        message: String,
    },

    /// The two documents cannot be brought into agreement.
    #[error(
        "alignment impossible: texts diverge at gold character {gold_offset} / system character {sys_offset}"
    )]
    AlignmentImpossible {
        gold_offset: usize,
        sys_offset: usize,
    },

    #[error("invalid token or sentence: {0}")]
    Token(String),

    #[error("similarity is undefined for empty strings")]
    EmptyString,

    #[error("cannot merge an empty list of trees")]
    EmptyTreeList,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid counts: {0}")]
    Counts(String),
}
