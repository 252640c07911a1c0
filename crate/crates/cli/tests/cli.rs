use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn wb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wb"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("WB_SEED")
        .output()
        .expect("wb runs")
}

fn code(args: &[&str]) -> i32 {
    wb(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(wb(args).stdout).unwrap()
}

fn stderr(args: &[&str]) -> String {
    String::from_utf8(wb(args).stderr).unwrap()
}

const DEFINITE_ISO: &[&str] = &[
    "definite",
    "--ground",
    "structures/set4.json",
    "--classes",
    "families/full2.json",
    "--scheme",
    "schemes/cycle.json",
    "--phi",
    "iso",
];

#[test]
fn exit_codes_over_the_fixture_corpus() {
    let cases: &[(&[&str], i32)] = &[
        (&["ef", "--left", "structures/chain3.json", "--right", "structures/chain4.json", "--rounds", "3"], 1),
        (&["ef", "--left", "structures/chain3.json", "--right", "structures/chain4.json", "--rounds", "2"], 0),
        (&["strong", "--model", "structures/cycle3.json", "--scheme", "ind"], 0),
        (&["strong", "--model", "structures/two_cycles.json", "--scheme", "ind"], 1),
        (DEFINITE_ISO, 1),
        (&["build", "ind"], 0),
        (&["build", "pc", "--depth", "4"], 0),
        (&["build", "pc"], 2),
        (&["iso", "--left", "structures/chain3.json", "--right", "structures/chain3.json"], 0),
        (&["iso", "--left", "structures/chain3.json", "--right", "structures/chain4.json"], 1),
        (&["bf", "--left", "structures/chain3.json", "--right", "structures/chain4.json"], 1),
        (&["eval", "--model", "structures/chain3.json", "--formula", "all x. Leq(x,x)"], 0),
        (&["eval", "--model", "structures/chain3.json", "--formula", "Leq(x,y)", "--assign", "x=2", "--assign", "y=1"], 1),
        (&["validate-translation", "--translation", "translations/reversal.json", "--model", "structures/chain3.json"], 0),
        (&["spc-check", "--ground", "structures/set3.json", "--classes", "spc/trivial.json", "--scheme", "schemes/true.json"], 0),
        (&["spc-check", "--ground", "structures/set3.json", "--classes", "spc/singleton.json", "--scheme", "schemes/true.json"], 1),
        (&["retract", "--ground", "structures/chain3.json", "--classes", "families/full2.json", "--t", "translations/reversal.json", "--s", "translations/reversal.json", "--witness", "x = v1_1"], 0),
        (&["retract", "--ground", "structures/chain3.json", "--classes", "families/full2.json", "--t", "translations/reversal.json", "--s", "translations/identity.json", "--witness", "x = v1_1"], 1),
        (&["nope"], 2),
        (&["strong", "--model", "missing.json", "--scheme", "ind"], 2),
        (&["eval", "--model", "structures/chain3.json", "--formula", "Leq(x"], 2),
        (&["definite", "--ground", "structures/set4.json", "--classes", "families/full2.json", "--scheme", "cycle", "--phi", "eeq"], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "wb {}", args.join(" "));
    }
}

#[test]
fn definiteness_verdicts() {
    let base = &DEFINITE_ISO[..DEFINITE_ISO.len() - 1];
    let iso: serde_json::Value = serde_json::from_str(&stdout(&[DEFINITE_ISO, &["--format", "json"]].concat())).unwrap();
    assert_eq!(iso["holds"], false);
    assert_eq!(iso["counterexample"][0]["dom"].as_array().unwrap().len(), 1);
    assert_eq!(iso["counterexample"][1]["dom"].as_array().unwrap().len(), 2);
    assert_eq!(code(&[base, &["iec"]].concat()), 0);
    assert_eq!(code(&[base, &["eeq", "--alpha", "ex x. Succ(x,x)"]].concat()), 1);
}

#[test]
fn output_is_deterministic_across_runs_and_job_counts() {
    let one = wb(&[DEFINITE_ISO, &["--jobs", "1"]].concat());
    let four = wb(&[DEFINITE_ISO, &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, wb(DEFINITE_ISO).stdout);
    let corpus = ["corpus", "--suite", "quotient", "--format", "json"];
    assert_eq!(wb(&corpus).stdout, wb(&corpus).stdout);
}

#[test]
fn builders_print_the_golden_texts() {
    let golden = |name: &str| std::fs::read_to_string(fixtures().join("golden").join(name)).unwrap();
    assert_eq!(stdout(&["build", "ind"]), golden("ind.txt"));
    assert_eq!(stdout(&["build", "as"]), golden("as.txt"));
    assert_eq!(stdout(&["build", "hf", "--theory", "dlo"]), golden("hf_dlo.txt"));
    assert_eq!(stdout(&["build", "spc", "--scheme", "ind", "--depth", "4"]), golden("spc_ind_4.txt"));
    assert_eq!(stdout(&["build", "pc", "--scheme", "schemes/ind.json", "--depth", "4"]), golden("pc_ind_4.txt"));
}

#[test]
fn quotient_of_a_preorder_is_a_chain() {
    let out = stdout(&["quotient", "--model", "structures/preorder.json", "--eta", "Leq(x,y)&Leq(y,x)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["universe"], serde_json::json!(["a", "c"]));
    assert_eq!(v["relations"]["Leq"], serde_json::json!([["a", "a"], ["a", "c"], ["c", "c"]]));
}

#[test]
fn errors_name_the_file() {
    let dir = std::env::temp_dir().join(format!("wb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"signature\": {\"relations\": {}},\n \"universe\": [1]}").unwrap();
    let bad = bad.to_str().unwrap();
    let err = stderr(&["aut", "--model", bad]);
    assert!(err.contains(bad) && err.contains("line 2"), "{err}");
    assert!(stderr(&["strong", "--model", "missing.json", "--scheme", "ind"]).contains("missing.json"));
}

#[test]
fn corpus_seeds_and_caps() {
    let summary = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_wb"));
        c.args(["corpus", "--suite", "quotient", "--format", "json"]);
        match seed {
            Some(s) => c.env("WB_SEED", s),
            None => c.env_remove("WB_SEED"),
        };
        let out = c.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    assert_eq!(summary(Some("11"))["seed"], 11);
    assert_eq!(summary(None)["seed"], 0x5EED);

    let dir = std::env::temp_dir().join(format!("wb-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("capped.json");
    std::fs::write(&cfg, r#"{"suites": ["ef-bridge"], "cases": {"ef-bridge": 6}, "caps": {"max_bf_len": 2}}"#).unwrap();
    let out = wb(&["corpus", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("inconclusive"));
    std::fs::write(&cfg, r#"{"suites": ["ef-bridge"], "extra": 1}"#).unwrap();
    assert_eq!(code(&["corpus", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn translations_round_trip_through_the_cli() {
    let composed = stdout(&["compose", "--outer", "translations/reversal.json", "--inner", "translations/lex2.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&composed).unwrap();
    assert_eq!(v["dim"], 2);
    let flags: serde_json::Value =
        serde_json::from_str(&stdout(&["flags", "--translation", "translations/preorder_classes.json", "--format", "json"])).unwrap();
    assert_eq!(flags["unrelativized"], false);
    let conditions = stdout(&[
        "iso-conditions",
        "--t1",
        "translations/identity.json",
        "--t2",
        "translations/identity.json",
        "--iota",
        "x1 = x1s",
    ]);
    assert_eq!(conditions.lines().count(), 5);
}
