use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const SEMICIRCLE: &str = r#"{"type":"semicircle","sigma2":"1"}"#;
const ODD_EPS: &str = r#"{"type":"odd","k2":"1","odd":{"3":"1/4"}}"#;
const GENERAL: &str = r#"{"type":"custom","k":["1/2","3","-1","5","2","-7","1","4"]}"#;
const EVEN: &str = r#"{"type":"custom","k":["0","3","0","5","0","-7","0","4"]}"#;

fn run_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_freechi"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("FREECHI_THREADS", t),
        None => cmd.env_remove("FREECHI_THREADS"),
    };
    cmd.output().expect("spawn freechi")
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn law_file(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn semicircle_sample_variance_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let law = law_file(&dir, "semicircle.json", SEMICIRCLE);
    let out = ok(&[
        "qn",
        "cumulants",
        "--law",
        &law,
        "--n",
        "3",
        "--order",
        "4",
        "--method",
        "closed",
    ]);
    assert_eq!(out, "2 2 2 2\n");
}

#[test]
fn kreweras_right_example_and_json_form() {
    assert_eq!(
        ok(&["nc", "kreweras", "--side", "right", "--partition", "1,3|2"]),
        "1,2|3\n"
    );
    assert_eq!(
        ok(&["nc", "kreweras", "--side", "right", "--partition", "[[1,3],[2]]"]),
        "1,2|3\n"
    );
    let v: Value = serde_json::from_str(&ok(&[
        "--json",
        "nc",
        "kreweras",
        "--side",
        "left",
        "--partition",
        "1,3|2",
    ]))
    .unwrap();
    assert_eq!(v["complement"], serde_json::json!([[1], [2, 3]]));
}

#[test]
fn fid_check_epsilon_law_fails_at_first_minor() {
    let dir = tempfile::tempdir().unwrap();
    let law = law_file(&dir, "oddeps.json", ODD_EPS);
    let o = run(&["--json", "fid", "check", "--law", &law, "--order", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fid_consistent"], false);
    assert_eq!(v["violating_minor"], 1);
    let text = stdout(&run(&["fid", "check", "--law", &law, "--order", "6"]));
    assert!(text.contains("k=1") && text.contains("-1/16"), "{text}");
    assert_eq!(
        run(&["fid", "check", "--law", SEMICIRCLE, "--order", "8"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn qn_methods_agree_within_caps() {
    for law in [SEMICIRCLE, ODD_EPS, GENERAL] {
        for n in ["2", "3"] {
            let outs: Vec<String> = ["closed", "rcyclic", "brute"]
                .iter()
                .map(|m| ok(&["qn", "cumulants", "--law", law, "--n", n, "--order", "4", "--method", m]))
                .collect();
            assert!(outs.iter().all(|o| *o == outs[0]), "{law} n={n}: {outs:?}");
        }
    }
}

#[test]
fn brute_cap_is_named() {
    let o = run(&[
        "qn",
        "cumulants",
        "--law",
        SEMICIRCLE,
        "--n",
        "6",
        "--order",
        "6",
        "--method",
        "brute",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cap") && err.lines().count() == 1, "{err}");
}

#[test]
fn verify_theorem_verdicts() {
    let out = run(&[
        "--json",
        "qn",
        "verify-theorem",
        "--law",
        ODD_EPS,
        "--n",
        "3",
        "--order",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["chi_square"], true);
    assert_eq!(v["law_odd"], true);
    assert_eq!(v["methods_agree"], true);
    assert_eq!(v["orders"].as_array().unwrap().len(), 4);
    assert!(v["orders"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["brute"] == "2" && r["verdict"] == "chi-square"));

    let mp = r#"{"type":"free_poisson","lambda":"1","alpha":"1"}"#;
    let out = run(&[
        "--json",
        "qn",
        "verify-theorem",
        "--law",
        mp,
        "--n",
        "3",
        "--order",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["chi_square"], false);
    assert_eq!(v["law_odd"], false);
    assert_eq!(v["characterization_consistent"], true);
    assert_eq!(v["orders"][1]["verdict"], "differs");
}

#[test]
fn quadform_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let m = law_file(&dir, "a.csv", "1,2/3\n2/3,-1\n");
    let outs: Vec<String> = ["iid", "family", "brute"]
        .iter()
        .map(|meth| {
            ok(&[
                "quadform",
                "cumulants",
                "--matrix",
                &m,
                "--law",
                EVEN,
                "--order",
                "4",
                "--method",
                meth,
            ])
        })
        .collect();
    assert_eq!(outs[0], "0 36 0 9490/9\n");
    assert!(outs.iter().all(|o| *o == outs[0]));
    let json_matrix = ok(&[
        "quadform",
        "cumulants",
        "--matrix",
        r#"[["1","2/3"],["2/3","-1"]]"#,
        "--law",
        EVEN,
        "--order",
        "4",
    ]);
    assert_eq!(json_matrix, outs[0]);
}

#[test]
fn json_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("k.json");
    let c = dir.path().join("k.csv");
    let js = format!("--json={}", j.display());
    let cs = format!("--csv={}", c.display());
    let text = ok(&[&js, &cs, "law", "moments", "--law", SEMICIRCLE, "--order", "6"]);
    assert_eq!(text, "0 1 0 2 0 5\n");
    let v: Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(v["m"], serde_json::json!(["0", "1", "0", "2", "0", "5"]));
    assert_eq!(fs::read_to_string(&c).unwrap(), "r,m\n1,0\n2,1\n3,0\n4,2\n5,0\n6,5\n");

    let csv = ok(&["--csv", "quadform", "cn-coeffs", "--n", "3", "--order", "2"]);
    assert_eq!(csv, "partition,coefficient\n\"1,4|2,3\",2\n\"1,2,3,4\",4/3\n");

    let o = run(&["--csv", "nc", "kreweras", "--side", "right", "--partition", "1|2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nc_listing_and_join() {
    assert_eq!(ok(&["nc", "list", "--n", "6", "--count"]), "132\n");
    assert_eq!(ok(&["nc", "list", "--n", "6", "--kind", "pair", "--count"]), "5\n");
    assert_eq!(ok(&["nc", "list", "--n", "4", "--kind", "pair"]), "1,4|2,3\n1,2|3,4\n");
    assert_eq!(
        ok(&["nc", "join", "--a", "1,3|2|4", "--b", "1|2,4|3"]),
        "1,2,3,4\njoins-to-one: true\n"
    );
    assert_eq!(
        ok(&["nc", "join", "--a", "1,2|3|4", "--b", "1|2|3,4"]),
        "1,2|3,4\njoins-to-one: false\n"
    );
    let o = run(&["nc", "list", "--n", "15"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 14"));
}

#[test]
fn fid_witness_for_commutator_and_square() {
    let comm = r#"[["0","1"],["-1","0"]]"#;
    let o = run(&["fid", "witness", "--matrix", comm, "--law", SEMICIRCLE, "--order", "4"]);
    let text = stdout(&o);
    assert!(text.contains("witness identity: true"), "{text}");
    let square = r#"[["1","0"],["0","1"]]"#;
    let o = run(&[
        "--json", "fid", "witness", "--matrix", square, "--law", SEMICIRCLE, "--order", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identity"], true);
    assert_eq!(v["hankel"]["fid_consistent"], true);
}

#[test]
fn density_emit_tables() {
    let csv = ok(&["--csv", "density", "emit", "--law", SEMICIRCLE, "--points", "11"]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "x,f");
    assert_eq!(rows.len(), 12);
    let mp = r#"{"type":"free_poisson","lambda":"1/2","alpha":"1"}"#;
    let v: Value = serde_json::from_str(&ok(&["--json", "density", "emit", "--law", mp, "--points", "21"])).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 21);
    assert!((v["atom"]["mass"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(run(&["density", "emit", "--law", ODD_EPS]).status.code(), Some(2));
}

#[test]
fn oracle_words_and_polynomials() {
    assert_eq!(
        ok(&["oracle", "moment", "--law", SEMICIRCLE, "--word", "1,2,1,2"]),
        "0\n"
    );
    assert_eq!(
        ok(&["oracle", "moment", "--law", SEMICIRCLE, "--word", "1,1,2,2"]),
        "1\n"
    );
    let mp = r#"{"type":"free_poisson","lambda":"1","alpha":"1"}"#;
    assert_eq!(
        ok(&["oracle", "moment", "--law", SEMICIRCLE, "--law", mp, "--word", "2,2"]),
        "2\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let poly = law_file(&dir, "x2.json", &poly_square());
    assert_eq!(
        ok(&["oracle", "moment", "--law", SEMICIRCLE, "--poly", &poly, "--order", "3"]),
        "1 2 5\n"
    );
}

fn poly_square() -> String {
    r#"{"n_vars":1,"terms":[{"word":[1,1],"re":"1","im":"0"}]}"#.to_string()
}

#[test]
fn malformed_input_exits_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = law_file(&dir, "bad.json", "{\"type\":\"semicircle\"");
    let neg = law_file(&dir, "neg.json", r#"{"type":"semicircle","sigma2":"-1"}"#);
    let short = law_file(&dir, "short.json", r#"{"type":"custom","k":["0","1"]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["law", "cumulants", "--law", &bad, "--order", "3"],
        vec!["law", "cumulants", "--law", &neg, "--order", "3"],
        vec!["law", "cumulants", "--law", &short, "--order", "3"],
        vec!["law", "cumulants", "--law", "/nonexistent/law.json", "--order", "3"],
        vec!["nc", "kreweras", "--side", "right", "--partition", "1,3|3"],
        vec![
            "quadform",
            "cumulants",
            "--matrix",
            r#"[["1","2"],["3"]]"#,
            "--law",
            SEMICIRCLE,
            "--order",
            "2",
        ],
        vec![
            "quadform",
            "cumulants",
            "--matrix",
            r#"[["0","1"],["1","0"]]"#,
            "--law",
            ODD_EPS,
            "--order",
            "2",
        ],
        vec![
            "oracle",
            "moment",
            "--law",
            SEMICIRCLE,
            "--word",
            "1,2,1,2,1,2,1,2,1,2,1,2,1",
        ],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(
            err.starts_with("error: ") && err.trim_end().lines().count() == 1,
            "{args:?}: {err}"
        );
    }
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        run_env(&["nc", "list", "--n", "3"], Some("many")).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "--json",
            "qn",
            "verify-theorem",
            "--law",
            GENERAL,
            "--n",
            "3",
            "--order",
            "4",
        ],
        vec!["--csv", "quadform", "cn-coeffs", "--n", "3", "--order", "3"],
        vec!["nc", "list", "--n", "8", "--kind", "even"],
        vec!["oracle", "moment", "--law", GENERAL, "--word", "1,2,1,3,2,3,1,2"],
    ];
    for args in cases {
        let base = run_env(&args, Some("1"));
        for t in [None, Some("2"), Some("4"), Some("1")] {
            let o = run_env(&args, t);
            assert_eq!(o.status.code(), base.status.code());
            assert_eq!(o.stdout, base.stdout, "{args:?} threads {t:?}");
        }
    }
}
