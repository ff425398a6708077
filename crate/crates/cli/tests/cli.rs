use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pregalois"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

const SPAN_LEFT: &str = r#"{"pattern":"123","host":"1342","positions":[0,1,2]}"#;
const SPAN_RIGHT: &str = r#"{"pattern":"123","host":"3124","positions":[1,2,3]}"#;
const S3: &str = r#"{"degree":3,"generators":[[1,0,2],[1,2,0]]}"#;

#[test]
fn inflate_prints_the_literal() {
    let (code, v) = report(&["perm", "inflate", "231", "12", "321", "3412"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "569873412");
}

#[test]
fn long_permutations_use_commas() {
    let (code, v) = report(&["perm", "inflate", "21", "12345", "54321"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "6,7,8,9,10,5,4,3,2,1");
    let (code, _) = report(&["perm", "contains", "1,2,3,4,5,6,7,8,10,9", "21"]);
    assert_eq!(code, 0);
}

#[test]
fn separable_and_contains_exit_codes() {
    let (code, v) = report(&["perm", "separable", "41352"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdicts"][0]["witness"]["pattern"], "3142");
    assert_eq!(report(&["perm", "separable", "2143"]).0, 0);
    assert_eq!(report(&["perm", "contains", "41352", "3142"]).0, 0);
    assert_eq!(report(&["perm", "contains", "12345", "21"]).0, 1);
}

#[test]
fn check_ap_on_separable_reports_the_span() {
    let (code, v) = report(&["check-ap", "--class", "separable", "--max-size", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["bounds"]["max_size"], 4);
    let line = &v["verdicts"][0];
    assert_eq!(line["pass"], false);
    assert_eq!(line["summary"], "no amalgam over (123, 1342, 3124)");
}

#[test]
fn class_checks_pass_where_expected() {
    for class in [
        "sets",
        "total_orders",
        "graphs",
        r#"{"builtin":"matchings"}"#,
    ] {
        assert_eq!(report(&["check-jep", "--class", class]).0, 0, "{class}");
    }
    assert_eq!(report(&["check-ap", "--class", "graphs"]).0, 0);
    assert_eq!(
        report(&["check-acat", "--class", "matchings", "--max-size", "3"]).0,
        1
    );
    assert_eq!(
        report(&[
            "check-acat",
            "--class",
            "permutation_groups",
            "--max-size",
            "3"
        ])
        .0,
        0
    );
}

#[test]
fn class_profile_and_product() {
    let (code, v) = report(&["class", "--class", "graphs"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["profile"], serde_json::json!([1, 1, 2, 4, 11]));
    let desc = r#"{"product":[{"builtin":"sets"},"total_orders"]}"#;
    let (code, v) = report(&["class", "--class", desc, "--max-size", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["profile"], serde_json::json!([1, 2, 3]));
    let (code, v) = report(&[
        "class",
        "--class",
        r#"{"avoiding":["21"]}"#,
        "--max-size",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["profile"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn amalgamate_the_separable_span() {
    let base = [
        "amalgamate",
        "--left",
        SPAN_LEFT,
        "--right",
        SPAN_RIGHT,
        "--class",
    ];
    let mut args = base.to_vec();
    args.push("all_permutations");
    let (code, v) = report(&args);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][0]["summary"], "1 amalgams: [41352]");
    assert_eq!(v["result"].as_array().unwrap().len(), 1);
    let mut args = base.to_vec();
    args.push("separable");
    assert_eq!(report(&args).0, 1);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = run(&[
        "amalgamate",
        "--class",
        "sets",
        "--left",
        "{",
        "--right",
        "{}",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    assert_eq!(
        run(&["check-ap", "--class", "no_such_class"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["perm", "inflate", "2x1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["gset", "verify", "--group", "[1,2]"]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_reproducible_without_timings() {
    let args = [
        "--no-timings",
        "check-jep",
        "--class",
        "graphs",
        "--max-size",
        "3",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("timings").is_none());
    let (_, v) = report(&["check-jep", "--class", "graphs", "--max-size", "3"]);
    assert!(v["timings"]["elapsed_ms"].is_number());
}

#[test]
fn text_format() {
    let out = run(&[
        "--format",
        "text",
        "--no-timings",
        "check-ap",
        "--class",
        "separable",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bounds: max_size=4"));
    assert!(text.contains("FAIL amalgamation_property: no amalgam over (123, 1342, 3124)"));
}

#[test]
fn bcat_fiber_and_coequalizer() {
    let f = format!(r#"{{"a":[0],"components":[{SPAN_LEFT}]}}"#);
    let g = format!(r#"{{"a":[0],"components":[{SPAN_RIGHT}]}}"#);
    let (code, v) = report(&[
        "bcat",
        "fiber",
        "--class",
        "separable",
        "--f",
        &f,
        "--g",
        &g,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["object"], serde_json::json!([]));
    let (code, v) = report(&[
        "bcat",
        "fiber",
        "--class",
        "all_permutations",
        "--f",
        &f,
        "--g",
        &g,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["object"].as_array().unwrap().len(), 1);

    // the two point maps of a two-point set
    let e = |i: usize| {
        format!(
            r#"{{"source":{{"signature":[],"size":1}},"target":{{"signature":[],"size":2}},"map":[{i}]}}"#
        )
    };
    let (f, g) = (
        format!(r#"{{"a":[0],"components":[{}]}}"#, e(0)),
        format!(r#"{{"a":[0],"components":[{}]}}"#, e(1)),
    );
    let (code, v) = report(&["bcat", "coeq", "--class", "sets", "--f", &f, "--g", &g]);
    assert_eq!(code, 0);
    let target = v["result"]["target"].as_array().unwrap();
    assert_eq!(target.len(), 1);
    assert_eq!(target[0]["size"], 0);
}

#[test]
fn bcat_verify_and_effective() {
    let (code, v) = report(&[
        "bcat",
        "verify",
        "--class",
        "sets",
        "--max-size",
        "2",
        "--max-atoms",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["bounds"]["max_atoms"], 1);
    assert!(v["verdicts"].as_array().unwrap().len() > 15);
    let (code, v) = report(&["bcat", "effective", "--class", "sets", "--max-size", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][0]["pass"], true);
    let (code, _) = report(&[
        "bcat",
        "effective",
        "--class",
        "sets",
        "--max-size",
        "2",
        "--max-atoms",
        "1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn gset_verify() {
    let c2 = r#"{"degree":2,"generators":[[1,0]]}"#;
    let (code, v) = report(&["gset", "verify", "--group", c2]);
    assert_eq!(code, 0);
    assert_eq!(v["bounds"]["max_size"], 2);
    assert_eq!(v["result"]["full_class"], true);

    let (code, v) = report(&[
        "gset",
        "verify",
        "--group",
        S3,
        "--stab-class",
        "[[0]]",
        "--max-atoms",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["full_class"], false);
    let cosets = v["result"]["coset_relations"].as_array().unwrap();
    assert!(cosets
        .iter()
        .any(|c| c["in_class"] == false && c["effective"] == false));
}

#[test]
fn witnesses_all_hold() {
    let (code, v) = report(&["witnesses"]);
    assert_eq!(code, 0);
    let lines = v["verdicts"].as_array().unwrap();
    assert!(lines.len() >= 15);
    assert!(lines.iter().all(|l| l["pass"] == true));
}
