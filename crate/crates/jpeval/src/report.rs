//! Text and structured renderings of evaluation results.

use std::collections::BTreeMap;
use std::fmt::Write;

use jpeval_core::gec::GecScore;
use jpeval_core::metrics::Prf;
use jpeval_core::parseval::{format_report, ParsevalReport, SentenceRow};
use jpeval_core::preprocess::PreprocessCounts;
use serde::Serialize;

use crate::RunConfig;

pub const TOOL: &str = "jpeval";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of evaluating one gold/system pair.
#[derive(Debug, Clone)]
pub enum Evaluation {
    Preprocess(PreprocessCounts),
    Parseval(ParsevalReport),
    Gec { groups: usize, score: GecScore },
}

#[derive(Debug, Clone)]
pub struct PairResult {
    /// File name in directory mode.
    pub name: Option<String>,
    pub gold: String,
    pub sys: String,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: RunConfig,
    pub results: Vec<PairResult>,
}

#[derive(Serialize)]
struct PrfDoc {
    precision: f64,
    recall: f64,
    f1: f64,
}

impl From<Prf> for PrfDoc {
    fn from(p: Prf) -> Self {
        PrfDoc {
            precision: p.precision,
            recall: p.recall,
            f1: p.f1,
        }
    }
}

#[derive(Serialize)]
struct PreprocessDoc {
    c_sb_gold: usize,
    c_sb_sys: usize,
    c_tk_gold: usize,
    c_tk_sys: usize,
    tp_sb: usize,
    tp_tk: usize,
    sentences: PrfDoc,
    tokens: PrfDoc,
}

#[derive(Serialize)]
struct RowDoc {
    id: usize,
    length: usize,
    status: u8,
    recall: f64,
    precision: f64,
    matched_brackets: usize,
    gold_brackets: usize,
    test_brackets: usize,
    cross_brackets: usize,
    words: usize,
    correct_tags: usize,
    tag_accuracy: f64,
}

impl From<&SentenceRow> for RowDoc {
    fn from(r: &SentenceRow) -> Self {
        RowDoc {
            id: r.id,
            length: r.length,
            status: r.status,
            recall: r.recall,
            precision: r.precision,
            matched_brackets: r.matched_brackets,
            gold_brackets: r.gold_brackets,
            test_brackets: r.test_brackets,
            cross_brackets: r.cross_brackets,
            words: r.words,
            correct_tags: r.correct_tags,
            tag_accuracy: r.tag_accuracy,
        }
    }
}

#[derive(Serialize)]
struct ParsevalDoc {
    sentences: usize,
    gold_trees: usize,
    sys_trees: usize,
    c_gold: usize,
    c_sys: usize,
    c_tp: usize,
    bracketing: PrfDoc,
    cross_brackets: usize,
    words: usize,
    correct_tags: usize,
    tag_accuracy: f64,
    complete_match: f64,
    average_crossing: f64,
    no_crossing: f64,
    two_or_less_crossing: f64,
    rows: Vec<RowDoc>,
}

#[derive(Serialize)]
struct TypeDoc {
    tp: usize,
    fp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    precision: f64,
    recall: f64,
    f_beta: f64,
}

#[derive(Serialize)]
struct GecDoc {
    aligned_groups: usize,
    tp: usize,
    fp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    precision: f64,
    recall: f64,
    f_beta: f64,
    beta: f64,
    per_type: BTreeMap<String, TypeDoc>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EvaluationDoc {
    Preprocess(PreprocessDoc),
    Parseval(ParsevalDoc),
    Gec(GecDoc),
}

impl From<&Evaluation> for EvaluationDoc {
    fn from(e: &Evaluation) -> Self {
        match e {
            Evaluation::Preprocess(c) => EvaluationDoc::Preprocess(PreprocessDoc {
                c_sb_gold: c.gold_sentences,
                c_sb_sys: c.sys_sentences,
                c_tk_gold: c.gold_tokens,
                c_tk_sys: c.sys_tokens,
                tp_sb: c.tp_sentences,
                tp_tk: c.tp_tokens,
                sentences: c.sentence_scores().into(),
                tokens: c.token_scores().into(),
            }),
            Evaluation::Parseval(r) => {
                let s = &r.summary;
                EvaluationDoc::Parseval(ParsevalDoc {
                    sentences: s.sentences,
                    gold_trees: s.gold_trees,
                    sys_trees: s.sys_trees,
                    c_gold: s.gold_constituents,
                    c_sys: s.sys_constituents,
                    c_tp: s.matched_constituents,
                    bracketing: s.bracketing.into(),
                    cross_brackets: s.cross_brackets,
                    words: s.words,
                    correct_tags: s.correct_tags,
                    tag_accuracy: s.tag_accuracy,
                    complete_match: s.complete_match,
                    average_crossing: s.average_crossing,
                    no_crossing: s.no_crossing,
                    two_or_less_crossing: s.two_or_less_crossing,
                    rows: r.rows.iter().map(RowDoc::from).collect(),
                })
            }
            Evaluation::Gec { groups, score } => EvaluationDoc::Gec(GecDoc {
                aligned_groups: *groups,
                tp: score.tp,
                fp: score.fp,
                fn_: score.fn_,
                precision: score.precision,
                recall: score.recall,
                f_beta: score.f_beta,
                beta: score.beta,
                per_type: score
                    .per_type
                    .iter()
                    .map(|(k, c)| {
                        let sub = GecScore::from_counts(c.tp, c.fp, c.fn_, score.beta);
                        let doc = TypeDoc {
                            tp: c.tp,
                            fp: c.fp,
                            fn_: c.fn_,
                            precision: sub.precision,
                            recall: sub.recall,
                            f_beta: sub.f_beta,
                        };
                        (k.clone(), doc)
                    })
                    .collect(),
            }),
        }
    }
}

#[derive(Serialize)]
struct PairDoc<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    gold: &'a str,
    sys: &'a str,
    scores: EvaluationDoc,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    results: Vec<PairDoc<'a>>,
}

/// JSON document with a fixed key order.
pub fn emit_structured(report: &Report) -> String {
    let doc = ReportDoc {
        tool: TOOL,
        version: VERSION,
        config: &report.config,
        results: report
            .results
            .iter()
            .map(|r| PairDoc {
                name: r.name.as_deref(),
                gold: &r.gold,
                sys: &r.sys,
                scores: (&r.evaluation).into(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

fn config_header(out: &mut String, c: &RunConfig) {
    let _ = writeln!(out, "{TOOL} {VERSION} {}", c.subcommand);
    let _ = writeln!(out, "gold: {}", c.gold_path);
    let _ = writeln!(out, "sys:  {}", c.sys_path);
    let mut settings = vec![
        format!("alpha={}", c.alpha),
        format!("length_ratio={}", c.length_ratio),
        format!("lowercase={}", c.lowercase),
        format!("nfc={}", c.nfc),
        format!("exceptions={}", c.exceptions),
    ];
    if let Some(f) = c.input_format {
        settings.push(format!(
            "format={}",
            serde_json::to_value(f).unwrap().as_str().unwrap()
        ));
    }
    if let Some(m) = c.multiword {
        settings.push(format!("multiword={m}"));
    }
    if let Some(l) = c.legacy {
        settings.push(format!("legacy={l}"));
    }
    if let Some(p) = &c.params {
        settings.push(format!("params={p}"));
    }
    if let Some(d) = &c.dummy_label {
        settings.push(format!("dummy_label={d}"));
    }
    if let Some(b) = c.beta {
        settings.push(format!("beta={b}"));
    }
    if let Some(m) = c.mode {
        settings.push(format!(
            "mode={}",
            serde_json::to_value(m).unwrap().as_str().unwrap()
        ));
    }
    let _ = writeln!(out, "config: {}", settings.join(" "));
}

fn prf_line(out: &mut String, name: &str, gold: usize, sys: usize, tp: usize, p: Prf) {
    let _ = writeln!(
        out,
        "{name:<10} {gold:>9} {sys:>9} {tp:>9} {:>9.4} {:>9.4} {:>9.4}",
        p.precision, p.recall, p.f1
    );
}

fn render_preprocess(out: &mut String, c: &PreprocessCounts) {
    let _ = writeln!(
        out,
        "{:<10} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "", "gold", "system", "tp", "precision", "recall", "f1"
    );
    prf_line(
        out,
        "sentences",
        c.gold_sentences,
        c.sys_sentences,
        c.tp_sentences,
        c.sentence_scores(),
    );
    prf_line(
        out,
        "tokens",
        c.gold_tokens,
        c.sys_tokens,
        c.tp_tokens,
        c.token_scores(),
    );
}

fn render_gec(out: &mut String, groups: usize, s: &GecScore) {
    let _ = writeln!(out, "aligned groups: {groups}");
    let _ = writeln!(
        out,
        "{:<12} {:>7} {:>7} {:>7} {:>8} {:>8} {:>8}",
        "",
        "TP",
        "FP",
        "FN",
        "Prec",
        "Rec",
        format!("F{}", s.beta)
    );
    for (ty, c) in &s.per_type {
        let sub = GecScore::from_counts(c.tp, c.fp, c.fn_, s.beta);
        let _ = writeln!(
            out,
            "{ty:<12} {:>7} {:>7} {:>7} {:>8.4} {:>8.4} {:>8.4}",
            c.tp, c.fp, c.fn_, sub.precision, sub.recall, sub.f_beta
        );
    }
    let _ = writeln!(
        out,
        "{:<12} {:>7} {:>7} {:>7} {:>8.4} {:>8.4} {:>8.4}",
        "total", s.tp, s.fp, s.fn_, s.precision, s.recall, s.f_beta
    );
}

/// Human-readable report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    config_header(&mut out, &report.config);
    for r in &report.results {
        out.push('\n');
        if let Some(name) = &r.name {
            let _ = writeln!(out, "== {name} ==");
        }
        match &r.evaluation {
            Evaluation::Preprocess(c) => render_preprocess(&mut out, c),
            Evaluation::Parseval(p) => out.push_str(&format_report(&p.rows, &p.summary)),
            Evaluation::Gec { groups, score } => render_gec(&mut out, *groups, score),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::OutputFormat;

    fn config() -> RunConfig {
        RunConfig {
            subcommand: "preprocess",
            gold_path: "g".into(),
            sys_path: "s".into(),
            alpha: 0.9,
            length_ratio: false,
            lowercase: false,
            nfc: false,
            exceptions: "builtin".into(),
            output: OutputFormat::Json,
            input_format: None,
            multiword: None,
            legacy: None,
            params: None,
            dummy_label: None,
            beta: None,
            mode: None,
        }
    }

    fn report(counts: PreprocessCounts) -> Report {
        Report {
            config: config(),
            results: vec![PairResult {
                name: None,
                gold: "g".into(),
                sys: "s".into(),
                evaluation: Evaluation::Preprocess(counts),
            }],
        }
    }

    #[test]
    fn hebrew_numbers() {
        let counts = PreprocessCounts {
            sys_sentences: 1,
            gold_sentences: 1,
            sys_tokens: 5,
            gold_tokens: 7,
            tp_sentences: 0,
            tp_tokens: 4,
        };
        let doc = emit_structured(&report(counts));
        assert!(doc.contains("\"precision\": 0.8,"));
        assert!(doc.contains("\"recall\": 0.5714285714285714,"));
        assert_eq!(doc, emit_structured(&report(counts)));
        let keys: Vec<usize> = ["\"tool\"", "\"version\"", "\"config\"", "\"results\""]
            .iter()
            .map(|k| doc.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_evaluation() {
        let doc = emit_structured(&report(PreprocessCounts::default()));
        assert!(doc.contains("\"tp_tk\": 0,"));
        assert!(doc.contains("\"f1\": 1.0"));
        let text = render_text(&report(PreprocessCounts::default()));
        assert!(text.contains("tokens             0         0         0    1.0000"));
    }
}
