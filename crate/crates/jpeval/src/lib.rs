//! Command-line front end for `jpeval-core`.

pub mod cli;
pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Parser;
use jpeval_core::align::SimilarityConfig;
use jpeval_core::gec::{merge_and_reindex, parse_m2, score_gec, MatchMode};
use jpeval_core::parseval::{evaluate_parseval, ParsevalOptions};
use jpeval_core::preprocess::evaluate_joint;
use jpeval_core::text::{
    read_conllu, read_plain, ConlluOptions, ExceptionLexicon, NormalizationPolicy,
};
use jpeval_core::tree::{parse_bracketed, LegacyParams};
use jpeval_core::Error;
use serde::Serialize;

use cli::{Cli, Command, CommonArgs, InputFormat, Mode, OutputFormat};
use report::{emit_structured, render_text, Evaluation, PairResult, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ALIGNMENT: i32 = 3;
pub const EXIT_FORMAT: i32 = 4;

/// Resolved settings, echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub gold_path: String,
    pub sys_path: String,
    pub alpha: f64,
    pub length_ratio: bool,
    pub lowercase: bool,
    pub nfc: bool,
    /// `builtin`, `none`, or the lexicon path.
    pub exceptions: String,
    pub output: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_format: Option<InputFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiword: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legacy: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dummy_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io { path: PathBuf, error: io::Error },
    Eval { path: Option<PathBuf>, error: Error },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io { error, .. } if error.kind() == io::ErrorKind::InvalidData => EXIT_FORMAT,
            Failure::Io { .. } => EXIT_USAGE,
            Failure::Eval {
                error: Error::AlignmentImpossible { .. },
                ..
            } => EXIT_ALIGNMENT,
            Failure::Eval {
                error: Error::Config(_),
                ..
            } => EXIT_USAGE,
            Failure::Eval { .. } => EXIT_FORMAT,
        }
    }

    fn at(path: &Path) -> impl Fn(Error) -> Failure + '_ {
        move |error| Failure::Eval {
            path: Some(path.to_path_buf()),
            error,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io { path, error } => write!(f, "{}: {error}", path.display()),
            Failure::Eval {
                path: Some(p),
                error,
            } => write!(f, "{}: {error}", p.display()),
            Failure::Eval { path: None, error } => write!(f, "{error}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Everything needed to evaluate a pair, built once per run.
struct Evaluator {
    command: Command,
    policy: NormalizationPolicy,
    similarity: SimilarityConfig,
    parseval: ParsevalOptions,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|error| Failure::Io {
        path: path.to_path_buf(),
        error,
    })
}

fn common(command: &Command) -> &CommonArgs {
    match command {
        Command::Preprocess(a) => &a.common,
        Command::Parseval(a) => &a.common,
        Command::Gec(a) => &a.common,
    }
}

fn build(command: Command) -> Result<(Evaluator, RunConfig), Failure> {
    let c = common(&command);
    let similarity = SimilarityConfig {
        threshold_alpha: c.alpha,
        use_length_ratio: c.length_ratio,
        ..SimilarityConfig::default()
    };
    similarity
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let (lexicon, exceptions) = match (&c.exceptions, c.no_exceptions) {
        (_, true) => (ExceptionLexicon::new(), "none".to_string()),
        (Some(path), false) => {
            let lex = ExceptionLexicon::parse(&read(path)?).map_err(Failure::at(path))?;
            (lex, path.display().to_string())
        }
        (None, false) => (ExceptionLexicon::english(), "builtin".to_string()),
    };
    let policy = NormalizationPolicy {
        lowercase: c.lowercase,
        unicode_nfc: c.nfc,
        exception_lexicon: lexicon,
    };
    let mut config = RunConfig {
        subcommand: "",
        gold_path: c.gold.display().to_string(),
        sys_path: c.sys.display().to_string(),
        alpha: c.alpha,
        length_ratio: c.length_ratio,
        lowercase: c.lowercase,
        nfc: c.nfc,
        exceptions,
        output: c.output,
        input_format: None,
        multiword: None,
        legacy: None,
        params: None,
        dummy_label: None,
        beta: None,
        mode: None,
    };
    let mut parseval = ParsevalOptions::default();
    match &command {
        Command::Preprocess(a) => {
            config.subcommand = "preprocess";
            config.input_format = Some(a.format);
            config.multiword = Some(a.multiword);
        }
        Command::Parseval(a) => {
            config.subcommand = "parseval";
            config.legacy = Some(a.legacy);
            config.dummy_label = Some(a.dummy_label.clone());
            parseval.dummy_label = a.dummy_label.clone();
            if a.legacy {
                parseval.legacy = Some(match &a.params {
                    Some(path) => {
                        config.params = Some(path.display().to_string());
                        LegacyParams::parse(&read(path)?, &a.dummy_label)
                            .map_err(Failure::at(path))?
                    }
                    None => LegacyParams::default(),
                });
            }
        }
        Command::Gec(a) => {
            config.subcommand = "gec";
            if !(a.beta > 0.0 && a.beta.is_finite()) {
                return Err(Failure::Usage(format!(
                    "beta must be a positive number, got {}",
                    a.beta
                )));
            }
            config.beta = Some(a.beta);
            config.mode = Some(a.mode);
        }
    }
    Ok((
        Evaluator {
            command,
            policy,
            similarity,
            parseval,
        },
        config,
    ))
}

impl Evaluator {
    fn evaluate(
        &self,
        gold_path: &Path,
        gold: &str,
        sys_path: &Path,
        sys: &str,
    ) -> Result<Evaluation, Failure> {
        let (policy, cfg) = (&self.policy, &self.similarity);
        let pair_error = |error: Error| Failure::Eval { path: None, error };
        match &self.command {
            Command::Preprocess(a) => {
                let load = |text: &str, path: &Path| match a.format {
                    InputFormat::Plain => Ok(read_plain(text)),
                    InputFormat::Conllu => read_conllu(
                        text,
                        ConlluOptions {
                            multiword_tokens: a.multiword,
                        },
                    )
                    .map_err(Failure::at(path)),
                };
                let (g, s) = (load(gold, gold_path)?, load(sys, sys_path)?);
                Ok(Evaluation::Preprocess(
                    evaluate_joint(&g, &s, policy, cfg).map_err(pair_error)?,
                ))
            }
            Command::Parseval(_) => {
                let g = parse_bracketed(gold).map_err(Failure::at(gold_path))?;
                let s = parse_bracketed(sys).map_err(Failure::at(sys_path))?;
                let report =
                    evaluate_parseval(&g, &s, policy, cfg, &self.parseval).map_err(pair_error)?;
                Ok(Evaluation::Parseval(report))
            }
            Command::Gec(a) => {
                let g = parse_m2(gold).map_err(Failure::at(gold_path))?;
                let s = parse_m2(sys).map_err(Failure::at(sys_path))?;
                let pairs = merge_and_reindex(&g, &s, policy, cfg).map_err(pair_error)?;
                let mode = match a.mode {
                    Mode::Correction => MatchMode::Correction,
                    Mode::Detection => MatchMode::Detection,
                };
                Ok(Evaluation::Gec {
                    groups: pairs.len(),
                    score: score_gec(&pairs, a.beta, mode),
                })
            }
        }
    }
}

struct Job {
    name: Option<String>,
    gold: PathBuf,
    sys: PathBuf,
}

fn file_names(dir: &Path) -> Result<Vec<String>, Failure> {
    let io_err = |error| Failure::Io {
        path: dir.to_path_buf(),
        error,
    };
    let mut names = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        if entry.file_type().map_err(io_err)?.is_file() {
            names.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    names.sort();
    Ok(names)
}

fn jobs(gold: &Path, sys: &Path) -> Result<Vec<Job>, Failure> {
    match (gold.is_dir(), sys.is_dir()) {
        (false, false) => Ok(vec![Job {
            name: None,
            gold: gold.to_path_buf(),
            sys: sys.to_path_buf(),
        }]),
        (true, true) => {
            let (g, s) = (file_names(gold)?, file_names(sys)?);
            let unpaired: Vec<&String> = g
                .iter()
                .filter(|n| !s.contains(n))
                .chain(s.iter().filter(|n| !g.contains(n)))
                .collect();
            if !unpaired.is_empty() {
                return Err(Failure::Usage(format!(
                    "files without a counterpart: {}",
                    unpaired
                        .iter()
                        .map(|s| s.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
            Ok(g.into_iter()
                .map(|n| Job {
                    gold: gold.join(&n),
                    sys: sys.join(&n),
                    name: Some(n),
                })
                .collect())
        }
        _ => Err(Failure::Usage(
            "--gold and --sys must both be files or both be directories".into(),
        )),
    }
}

/// Evaluates every job, in parallel when there are several.
fn run_jobs(
    evaluator: &Evaluator,
    jobs: Vec<Job>,
    threads: usize,
) -> Result<Vec<PairResult>, Failure> {
    let inputs = jobs
        .into_iter()
        .map(|j| Ok((read(&j.gold)?, read(&j.sys)?, j)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let slots: Vec<Mutex<Option<Result<PairResult, Failure>>>> =
        inputs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let k = next.fetch_add(1, Ordering::Relaxed);
        let Some((gold, sys, job)) = inputs.get(k) else {
            break;
        };
        let result = evaluator
            .evaluate(&job.gold, gold, &job.sys, sys)
            .map(|evaluation| PairResult {
                name: job.name.clone(),
                gold: job.gold.display().to_string(),
                sys: job.sys.display().to_string(),
                evaluation,
            });
        let result = result.map_err(|f| match (f, &job.name) {
            (Failure::Eval { path: None, error }, Some(name)) => Failure::Eval {
                path: Some(PathBuf::from(name)),
                error,
            },
            (f, _) => f,
        });
        *slots[k].lock().unwrap() = Some(result);
    };
    std::thread::scope(|scope| {
        for _ in 1..threads.min(inputs.len()) {
            scope.spawn(work);
        }
        work();
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every job ran"))
        .collect()
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let c = common(&cli.command);
    for path in [&c.gold, &c.sys] {
        if !path.exists() {
            return Err(Failure::Usage(format!(
                "{}: no such file or directory",
                path.display()
            )));
        }
    }
    let out_path = c.out.clone();
    let output = c.output;
    let threads = c
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let todo = jobs(&c.gold, &c.sys)?;
    let (evaluator, config) = build(cli.command)?;
    let results = run_jobs(&evaluator, todo, threads)?;
    let report = Report { config, results };
    let text = match output {
        OutputFormat::Text => render_text(&report),
        OutputFormat::Json => emit_structured(&report),
    };
    match out_path {
        Some(path) => std::fs::write(&path, text).map_err(|error| Failure::Io { path, error }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|error| Failure::Io {
                    path: "<stdout>".into(),
                    error,
                })
        }
    }
}

/// Runs the tool on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("jpeval: {f}");
            f.exit_code()
        }
    }
}
