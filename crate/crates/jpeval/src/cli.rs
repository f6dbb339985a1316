//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "jpeval",
    version,
    about = "Evaluate system output against gold data with mismatched segmentation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sentence-boundary and tokenization precision/recall.
    Preprocess(PreprocessArgs),
    /// Bracket precision/recall over constituency trees.
    Parseval(ParsevalArgs),
    /// Grammatical error correction scoring over m2 files.
    Gec(GecArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Gold file, or a directory of gold files.
    #[arg(long)]
    pub gold: PathBuf,
    /// System file, or a directory of system files with matching names.
    #[arg(long)]
    pub sys: PathBuf,
    /// Similarity threshold for fuzzy sentence matches; 1.0 disables them.
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    /// Compare sentence lengths instead of Jaro-Winkler similarity.
    #[arg(long)]
    pub length_ratio: bool,
    #[arg(long)]
    pub lowercase: bool,
    /// Apply Unicode NFC normalization before comparing.
    #[arg(long)]
    pub nfc: bool,
    /// Exception lexicon (tab-separated variant and canonical token sequences).
    #[arg(long, env = "JPEVAL_EXCEPTIONS")]
    pub exceptions: Option<PathBuf>,
    /// Use no exception lexicon at all, not even the built-in one.
    #[arg(long)]
    pub no_exceptions: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads in directory mode (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = InputFormat::Plain)]
    pub format: InputFormat,
    /// In CoNLL-U input, use multiword-token lines instead of their parts.
    #[arg(long)]
    pub multiword: bool,
}

#[derive(Debug, Args)]
pub struct ParsevalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Delete punctuation and configured labels before scoring, like evalb.
    #[arg(long)]
    pub legacy: bool,
    /// Parameter file for legacy mode.
    #[arg(long, requires = "legacy")]
    pub params: Option<PathBuf>,
    #[arg(long, default_value = jpeval_core::parseval::DEFAULT_DUMMY_LABEL)]
    pub dummy_label: String,
}

#[derive(Debug, Args)]
pub struct GecArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = jpeval_core::gec::DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Correction)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Plain,
    Conllu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Correction,
    Detection,
}
