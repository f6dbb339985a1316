use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use jpeval::{run, EXIT_ALIGNMENT, EXIT_FORMAT, EXIT_OK, EXIT_USAGE};
use tempfile::TempDir;

const KATE_GOLD: &str = "S Kate Ashby ,
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0

S how are you ? I hope you are well .
A 0 1|||R:ADV|||How|||REQUIRED|||-NONE-|||0

";

const KATE_SYS: &str = "S Kate Ashby , how are you ?
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0

S I hope you are well .
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0

";

const TREE: &str =
    "(TOP (S (INTJ (RB No)) (, ,) (NP (PRP it)) (VP (VBD was) (RB n't) (NP (NNP Black) (NNP Monday))) (. .)))\n";

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: impl AsRef<[u8]>) -> PathBuf {
        let path = self.dir.path().join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).unwrap();
        }
        fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

/// Runs with `--out` so the report can be inspected; returns (code, report).
fn run_to_file(fx: &Fixture, args: &[&str]) -> (i32, String) {
    let out = fx.path("report.out");
    let _ = fs::remove_file(&out);
    let mut argv = vec!["jpeval".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    argv.extend(["--out".into(), s(&out)]);
    let code = run(argv);
    (code, fs::read_to_string(&out).unwrap_or_default())
}

fn json(report: &str) -> serde_json::Value {
    serde_json::from_str(report).unwrap()
}

#[test]
fn gec_kate_ashby() {
    let fx = Fixture::new();
    let (g, sy) = (fx.file("g.m2", KATE_GOLD), fx.file("s.m2", KATE_SYS));
    let (code, text) = run_to_file(
        &fx,
        &["gec", "--gold", &s(&g), "--sys", &s(&sy), "--beta", "0.5"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(
        text.contains("total              0       0       1"),
        "{text}"
    );

    let (code, report) = run_to_file(
        &fx,
        &[
            "gec",
            "--gold",
            &s(&g),
            "--sys",
            &s(&sy),
            "--output",
            "json",
        ],
    );
    assert_eq!(code, EXIT_OK);
    let v = json(&report);
    let scores = &v["results"][0]["scores"];
    assert_eq!(
        (scores["tp"].as_u64(), scores["fn"].as_u64()),
        (Some(0), Some(1))
    );
    assert_eq!(scores["aligned_groups"], 1);
    assert_eq!(v["config"]["beta"], 0.5);
    assert_eq!(v["config"]["mode"], "correction");
}

#[test]
fn parseval_identity() {
    let fx = Fixture::new();
    let t = fx.file("a.mrg", TREE);
    let (code, text) = run_to_file(&fx, &["parseval", "--gold", &s(&t), "--sys", &s(&t)]);
    assert_eq!(code, EXIT_OK);
    assert!(
        text.contains("Bracketing FMeasure       = 100.00"),
        "{text}"
    );
    assert!(
        text.contains("Tagging accuracy          = 100.00"),
        "{text}"
    );

    let (code, text) = run_to_file(
        &fx,
        &["parseval", "--gold", &s(&t), "--sys", &s(&t), "--legacy"],
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("Correct tags / words      = 6 / 6"), "{text}");
}

#[test]
fn parseval_params_file() {
    let fx = Fixture::new();
    let t = fx.file("a.mrg", TREE);
    let prm = fx.file(
        "p.prm",
        "DELETE_LABEL TOP\nDELETE_POS ,\nDELETE_POS .\nDELETE_LABEL INTJ\n",
    );
    let args = [
        "parseval",
        "--gold",
        &s(&t),
        "--sys",
        &s(&t),
        "--legacy",
        "--params",
        &s(&prm),
        "--output",
        "json",
    ];
    let (code, report) = run_to_file(&fx, &args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&report)["results"][0]["scores"]["c_gold"], 4);

    let bad = fx.file("bad.prm", "EQ_LABEL X\n");
    let (code, _) = run_to_file(
        &fx,
        &[
            "parseval",
            "--gold",
            &s(&t),
            "--sys",
            &s(&t),
            "--legacy",
            "--params",
            &s(&bad),
        ],
    );
    assert_eq!(code, EXIT_FORMAT);
}

#[test]
fn hebrew_preprocess_json() {
    let fx = Fixture::new();
    let g = fx.file("g.txt", "B H CL FL HM H NEIM\n");
    let sy = fx.file("s.txt", "B CL FL HM HNEIM\n");
    let args = [
        "preprocess",
        "--gold",
        &s(&g),
        "--sys",
        &s(&sy),
        "--output",
        "json",
    ];
    let (code, first) = run_to_file(&fx, &args);
    assert_eq!(code, EXIT_OK);
    let v = json(&first);
    let tokens = &v["results"][0]["scores"]["tokens"];
    assert_eq!(tokens["precision"], 0.8);
    assert!((tokens["recall"].as_f64().unwrap() - 0.5714).abs() < 1e-4);
    assert_eq!(v["results"][0]["scores"]["tp_tk"], 4);
    assert_eq!(v["tool"], "jpeval");
    assert!(v["version"].is_string());

    let (_, second) = run_to_file(&fx, &args);
    assert_eq!(first, second);
}

#[test]
fn empty_inputs() {
    let fx = Fixture::new();
    let e = fx.file("e.txt", "");
    let (code, report) = run_to_file(
        &fx,
        &[
            "preprocess",
            "--gold",
            &s(&e),
            "--sys",
            &s(&e),
            "--output",
            "json",
        ],
    );
    assert_eq!(code, EXIT_OK);
    let scores = &json(&report)["results"][0]["scores"];
    for key in [
        "c_sb_gold",
        "c_sb_sys",
        "c_tk_gold",
        "c_tk_sys",
        "tp_sb",
        "tp_tk",
    ] {
        assert_eq!(scores[key], 0, "{key}");
    }
    assert_eq!(scores["tokens"]["f1"], 1.0);
}

#[test]
fn conllu_input() {
    let fx = Fixture::new();
    let g = fx.file("g.conllu", "# text\n1\tHe\n2\tcannot\n3\tgo\n\n");
    let sy = fx.file("s.conllu", "1-2\tHecannot\t_\n1\tHe\n2\tcannot\n3\tgo\n\n");
    let base = [
        "preprocess",
        "--format",
        "conllu",
        "--gold",
        &s(&g),
        "--sys",
        &s(&sy),
        "--output",
        "json",
    ];
    let (code, report) = run_to_file(&fx, &base);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&report)["results"][0]["scores"]["tp_tk"], 3);

    let mut with_mwt = base.to_vec();
    with_mwt.push("--multiword");
    let (code, report) = run_to_file(&fx, &with_mwt);
    assert_eq!(code, EXIT_OK);
    let v = json(&report);
    assert_eq!(v["results"][0]["scores"]["tp_tk"], 1);
    assert_eq!(v["config"]["multiword"], true);
}

#[test]
fn usage_errors() {
    let fx = Fixture::new();
    let g = fx.file("g.txt", "a\n");
    assert_eq!(run(["jpeval", "preprocess", "--sys", &s(&g)]), EXIT_USAGE);
    assert_eq!(
        run([
            "jpeval",
            "preprocess",
            "--gold",
            &s(&g),
            "--sys",
            &s(&fx.path("missing"))
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        run([
            "jpeval",
            "preprocess",
            "--gold",
            &s(&g),
            "--sys",
            &s(&g),
            "--alpha",
            "1.5"
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        run([
            "jpeval",
            "gec",
            "--gold",
            &s(&g),
            "--sys",
            &s(&g),
            "--beta",
            "0"
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        run([
            "jpeval",
            "preprocess",
            "--gold",
            &s(&g),
            "--sys",
            &s(fx.dir.path())
        ]),
        EXIT_USAGE
    );
    assert_eq!(run(["jpeval", "bogus"]), EXIT_USAGE);
    assert_eq!(run(["jpeval", "--version"]), EXIT_OK);
}

#[test]
fn alignment_and_format_errors() {
    let fx = Fixture::new();
    let a = fx.file("a.txt", "a b c\n");
    let b = fx.file("b.txt", "x y\nz\n");
    assert_eq!(
        run(["jpeval", "preprocess", "--gold", &s(&a), "--sys", &s(&b)]),
        EXIT_ALIGNMENT
    );

    let bad_tree = fx.file("bad.mrg", "(S (NP (NN a)\n");
    let tree = fx.file("ok.mrg", "(S (NN a))\n");
    assert_eq!(
        run([
            "jpeval",
            "parseval",
            "--gold",
            &s(&bad_tree),
            "--sys",
            &s(&tree)
        ]),
        EXIT_FORMAT
    );

    let bad_m2 = fx.file("bad.m2", "S a b\nA 0 1|||X\n");
    assert_eq!(
        run(["jpeval", "gec", "--gold", &s(&bad_m2), "--sys", &s(&bad_m2)]),
        EXIT_FORMAT
    );

    let binary = fx.file("bin.txt", [0xff, 0xfe, b'\n']);
    assert_eq!(
        run([
            "jpeval",
            "preprocess",
            "--gold",
            &s(&binary),
            "--sys",
            &s(&a)
        ]),
        EXIT_FORMAT
    );

    let bad_conllu = fx.file("bad.conllu", "x\tword\n");
    assert_eq!(
        run([
            "jpeval",
            "preprocess",
            "--format",
            "conllu",
            "--gold",
            &s(&bad_conllu),
            "--sys",
            &s(&bad_conllu)
        ]),
        EXIT_FORMAT
    );
}

#[test]
fn directory_mode() {
    let fx = Fixture::new();
    for (name, g, sy) in [
        ("b.txt", "x y z\n", "x y\nz\n"),
        ("a.txt", "p q\n", "p q\n"),
        ("c.txt", "m n o\n", "mn o\n"),
    ] {
        fx.file(&format!("gold/{name}"), g);
        fx.file(&format!("sys/{name}"), sy);
    }
    let (gd, sd) = (s(&fx.path("gold")), s(&fx.path("sys")));
    let args = [
        "preprocess",
        "--gold",
        &gd,
        "--sys",
        &sd,
        "--output",
        "json",
        "--jobs",
        "3",
    ];
    let (code, report) = run_to_file(&fx, &args);
    assert_eq!(code, EXIT_OK);
    let v = json(&report);
    let names: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["a.txt", "b.txt", "c.txt"]);
    assert_eq!(v["results"][1]["scores"]["tp_sb"], 0);
    assert_eq!(v["results"][2]["scores"]["tp_tk"], 1);

    let (_, serial) = run_to_file(
        &fx,
        &[
            "preprocess",
            "--gold",
            &gd,
            "--sys",
            &sd,
            "--output",
            "json",
            "--jobs",
            "1",
        ],
    );
    assert_eq!(report, serial);

    let (code, text) = run_to_file(&fx, &["preprocess", "--gold", &gd, "--sys", &sd]);
    assert_eq!(code, EXIT_OK);
    assert!(text.find("== a.txt ==").unwrap() < text.find("== c.txt ==").unwrap());

    fx.file("sys/extra.txt", "q\n");
    assert_eq!(
        run(["jpeval", "preprocess", "--gold", &gd, "--sys", &sd]),
        EXIT_USAGE
    );
}

#[test]
fn exceptions_from_environment() {
    let fx = Fixture::new();
    let g = fx.file("g.txt", "It wo n't be\n");
    let sy = fx.file("s.txt", "It will not be\n");
    let lex = fx.file("lex.tsv", "wo n't\twill not\n");
    let bin = env!("CARGO_BIN_EXE_jpeval");
    let out = |envs: &[(&str, &Path)], extra: &[&str]| {
        let mut cmd = Command::new(bin);
        cmd.env_remove("JPEVAL_EXCEPTIONS")
            .args(["preprocess", "--alpha", "1", "--output", "json", "--gold"])
            .arg(&g)
            .arg("--sys")
            .arg(&sy)
            .args(extra);
        for (k, v) in envs {
            cmd.env(k, v);
        }
        cmd.output().unwrap()
    };
    let without = out(&[], &[]);
    assert_eq!(without.status.code(), Some(EXIT_ALIGNMENT));

    let with = out(&[("JPEVAL_EXCEPTIONS", &lex)], &[]);
    assert_eq!(with.status.code(), Some(EXIT_OK));
    let v = json(std::str::from_utf8(&with.stdout).unwrap());
    assert_eq!(v["config"]["exceptions"], s(&lex));
    assert_eq!(v["results"][0]["scores"]["tp_sb"], 1);

    let disabled = out(&[("JPEVAL_EXCEPTIONS", &lex)], &["--no-exceptions"]);
    assert_eq!(disabled.status.code(), Some(EXIT_ALIGNMENT));
    assert!(!disabled.stderr.is_empty());
}

#[test]
fn out_flag_writes_file_only() {
    let fx = Fixture::new();
    let t = fx.file("a.mrg", TREE);
    let bin = env!("CARGO_BIN_EXE_jpeval");
    let report = fx.path("r.txt");
    let o = Command::new(bin)
        .args(["parseval", "--gold"])
        .arg(&t)
        .arg("--sys")
        .arg(&t)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(&report)
        .unwrap()
        .contains("=== Summary ==="));
}
