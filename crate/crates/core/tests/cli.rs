use std::io::Write;
use std::process::{Command, Stdio};

use patience_core::cli::{run_with_stdin, Outcome};
use serde_json::Value;

const ALPHA: &str = r#"{"T":3,"values":["1/2","12/25","91/250"]}"#;
const BETA: &str = r#"{"T":3,"values":["1","2/3","1/2"]}"#;

fn run(args: &[&str]) -> Outcome {
    run_stdin(args, "")
}

fn run_stdin(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("patience").chain(args.iter().copied());
    run_with_stdin(argv, &mut stdin.as_bytes())
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"))
}

fn error_kind(out: &Outcome) -> String {
    assert_eq!(out.code, 2, "{out:?}");
    let v: Value = serde_json::from_str(&out.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn patient_reference_pair_fails_with_witness() {
    let out = run(&["patient", "--alpha", ALPHA, "--beta", BETA]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["failing_index"], 2);
    assert_eq!(v["monotone_ratio"], true);
    assert_eq!(v["gap_ratios"]["per_index"][0]["ratio"], "50/3");
    assert_eq!(v["gap_ratios"]["per_index"][1]["ratio"], "125/87");
    assert!(v["witness"]["x"]["values"].is_array());
}

#[test]
fn dominates_trivial() {
    let s = r#"{"T":2,"values":["1","1"]}"#;
    let out = run(&["dominates", "--x", s, "--y", s]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn dominates_failure_reports_step() {
    let out = run(&[
        "dominates",
        "--x",
        r#"{"T":2,"values":["0","1"]}"#,
        "--y",
        r#"{"T":2,"values":["1","0"]}"#,
    ]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["failure_index"], 1);
    assert_eq!(
        v["witness_weights"]["values"],
        serde_json::json!(["1", "0"])
    );
}

#[test]
fn superior_tighten_chain() {
    let x = r#"{"T":2,"values":["2","1"]}"#;
    let y = r#"{"T":2,"values":["1","1"]}"#;
    assert_eq!(run(&["superior", "--x", x, "--y", y]).code, 0);
    let out = run(&["tighten", "--x", x, "--y", y]);
    assert_eq!(
        json(&out)["tightened"]["values"],
        serde_json::json!(["1", "1"])
    );

    let out = run(&[
        "chain",
        "--x",
        r#"{"T":3,"values":["2","0","0"]}"#,
        "--y",
        r#"{"T":3,"values":["0","1","1"]}"#,
    ]);
    assert_eq!(out.code, 0);
    let steps = &json(&out)["steps"];
    assert_eq!(
        steps[0],
        serde_json::json!({"from": 1, "to": 2, "amount": "1"})
    );
    assert_eq!(
        steps[1],
        serde_json::json!({"from": 1, "to": 3, "amount": "1"})
    );

    let out = run(&[
        "chain",
        "--x",
        r#"{"T":3,"values":["1","3/2","1"]}"#,
        "--y",
        r#"{"T":3,"values":["1","1","3/2"]}"#,
        "--alpha",
        ALPHA,
        "--beta",
        BETA,
    ]);
    assert_eq!(
        json(&out)["ratio_trace"],
        serde_json::json!(["625/396", "3625/2289"])
    );
}

#[test]
fn counterexample_round_trips_through_eval() {
    let out = run(&["counterexample", "--alpha", ALPHA, "--beta", BETA]);
    assert_eq!(out.code, 1);
    let w = json(&out);
    let x = w["x"].to_string();
    let y = w["y"].to_string();
    let out = run(&[
        "eval", "--alpha", ALPHA, "--beta", BETA, "--x", &x, "--y", &y,
    ]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["gap"], w["gap"]);
    assert_eq!(v["alpha_ratio"], w["alpha_ratio"]);
}

#[test]
fn counterexample_when_patience_holds() {
    let out = run(&["counterexample", "--alpha", BETA, "--beta", BETA]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out), serde_json::json!({"holds": true}));
}

#[test]
fn eval_reference_gap_and_weighted_sum() {
    let out = run(&[
        "eval",
        "--alpha",
        ALPHA,
        "--beta",
        BETA,
        "--x",
        r#"{"T":3,"values":["1","3/2","1"]}"#,
        "--y",
        r#"{"T":3,"values":["1","1","3/2"]}"#,
    ]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["gap"], "78/22127");

    let out = run(&[
        "eval",
        "--w",
        r#"{"T":3,"values":["1","1/2","0"]}"#,
        "--x",
        r#"{"T":3,"values":["3","-1","7"]}"#,
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["value"], "5/2");
}

#[test]
fn families_need_a_horizon() {
    let a = r#"{"family":"exponential","a":"2/5"}"#;
    let b = r#"{"family":"exponential","a":"3/10"}"#;
    let out = run(&["patient", "--alpha", a, "--beta", b, "--horizon", "3"]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["failing_index"], 2);
    assert_eq!(v["gap_ratios"]["per_index"][1]["lhs"], "21/100");
    assert_eq!(v["gap_ratios"]["per_index"][1]["rhs"], "6/25");

    assert_eq!(
        error_kind(&run(&["patient", "--alpha", a, "--beta", b])),
        "unsupported"
    );
    let qh = r#"{"family":"quasi_hyperbolic","b":"1/2","d":"9/10"}"#;
    assert_eq!(
        run(&["serene", "--alpha", qh, "--beta", qh, "--horizon", "4"]).code,
        0
    );
}

#[test]
fn infinite_horizon_rules() {
    let a = r#"{"family":"exponential","a":"9/10"}"#;
    let b = r#"{"family":"exponential","a":"1/2"}"#;
    let out = run(&["patient", "--alpha", a, "--beta", b, "--horizon", "inf"]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["failing_index"], 4);
    assert_eq!(v["horizon"], "inf");
    assert_eq!(
        run(&["patient", "--alpha", a, "--beta", a, "--horizon", "inf"]).code,
        0
    );

    assert_eq!(
        error_kind(&run(&[
            "serene",
            "--alpha",
            a,
            "--beta",
            b,
            "--horizon",
            "inf"
        ])),
        "unsupported"
    );
    assert_eq!(
        error_kind(&run(&[
            "patient",
            "--alpha",
            ALPHA,
            "--beta",
            BETA,
            "--horizon",
            "inf"
        ])),
        "unsupported"
    );
    let qh = r#"{"family":"quasi_hyperbolic","b":"1/2","d":"9/10"}"#;
    assert_eq!(
        error_kind(&run(&[
            "patient",
            "--alpha",
            a,
            "--beta",
            qh,
            "--horizon",
            "inf"
        ])),
        "unsupported"
    );
}

#[test]
fn threshold_and_collapse() {
    let out = run(&["threshold", "--b", "1/2", "--horizon", "3"]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["a_bar"], "1/2");

    let out = run(&["collapse", "--a", "9/10", "--b", "1/2"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["t"], 4);
    let out = run(&["collapse", "--a", "1/2", "--b", "1/2", "--horizon", "inf"]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["t"], Value::Null);
    assert_eq!(
        error_kind(&run(&["collapse", "--a", "3/2", "--b", "1/2"])),
        "parameter_out_of_range"
    );
}

#[test]
fn input_errors_exit_2_with_kind() {
    assert_eq!(
        error_kind(&run(&["dominates", "--x", "{", "--y", "{}"])),
        "invalid_input"
    );
    let inc = r#"{"T":2,"values":["1","2"]}"#;
    assert_eq!(
        error_kind(&run(&["patient", "--alpha", inc, "--beta", inc])),
        "invalid_input"
    );
    let short = r#"{"T":2,"values":["1","1/2"]}"#;
    assert_eq!(
        error_kind(&run(&["patient", "--alpha", short, "--beta", BETA])),
        "horizon_mismatch"
    );
    assert_eq!(
        error_kind(&run(&[
            "tighten",
            "--x",
            r#"{"T":2,"values":["0","1"]}"#,
            "--y",
            r#"{"T":2,"values":["1","0"]}"#
        ])),
        "not_dominating"
    );
    let float = r#"{"T":1,"values":[0.5]}"#;
    assert_eq!(
        error_kind(&run(&["dominates", "--x", float, "--y", float])),
        "invalid_input"
    );
    assert_eq!(error_kind(&run(&["frobnicate"])), "usage");
    assert_eq!(error_kind(&run(&["eval", "--x", "{}"])), "usage");
}

#[test]
fn stdin_and_file_inputs() {
    let out = run_stdin(&["patient", "--alpha", "-", "--beta", BETA], ALPHA);
    assert_eq!(out.code, 1);

    let dir = std::env::temp_dir().join(format!("patience-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("alpha.json");
    std::fs::write(&path, ALPHA).unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(run(&["patient", "--alpha", &arg, "--beta", BETA]).code, 1);

    let target = dir.join("out.json");
    let out = run(&[
        "patient",
        "--alpha",
        &arg,
        "--beta",
        BETA,
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written["failing_index"], 2);

    assert_eq!(
        error_kind(&run(&[
            "patient",
            "--alpha",
            "@/nonexistent/x.json",
            "--beta",
            BETA
        ])),
        "invalid_input"
    );
    assert_eq!(
        error_kind(&run_stdin(&["dominates", "--x", "-", "--y", "-"], "{}")),
        "invalid_input"
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_small_run_is_stable() {
    let args = [
        "verify",
        "--suite",
        "patience",
        "--seed",
        "9",
        "--trials",
        "25",
        "--tmax",
        "4",
        "--grid",
        "4",
        "--instances",
        "2000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 9);
    assert!(v["prng"].as_str().unwrap().contains("ChaCha8"));
    assert_eq!(v["suites"][0]["suite"], "patience");

    let out = run(&[
        "verify", "--suite", "relation", "--trials", "1", "--tmax", "3", "--grid", "3",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(error_kind(&run(&["verify", "--suite", "nope"])), "usage");
    assert_eq!(
        error_kind(&run(&["verify", "--trials", "0"])),
        "invalid_input"
    );
}

#[test]
fn verify_serenity_reports_its_disagreements() {
    let out = run(&[
        "verify",
        "--suite",
        "serenity",
        "--trials",
        "200",
        "--instances",
        "2000",
    ]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    let find = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap().clone();
    assert!(
        find("characterization_matches_definition")["violations"]
            .as_u64()
            .unwrap()
            > 0
    );
    assert_eq!(
        find("characterization_matches_definition_without_equal_totals")["violations"],
        0
    );
    assert_eq!(
        find("decreasing_difference_matches_definition")["violations"],
        0
    );
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_patience");
    let out = Command::new(bin)
        .args(["patient", "--alpha", ALPHA, "--beta", BETA])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], false);

    let out = Command::new(bin)
        .args(["dominates", "--x", "[]", "--y", "[]"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(e["error"]["message"].is_string());

    let mut child = Command::new(bin)
        .args([
            "dominates",
            "--x",
            "-",
            "--y",
            r#"{"T":2,"values":["1","1"]}"#,
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"T":2,"values":["2","0"]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}
