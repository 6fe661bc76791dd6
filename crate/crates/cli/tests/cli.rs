use std::process::Command;

use equihit::drg::DrgViolation;
use equihit::labelings::Violation;
use equihit::{Error, Label};
use equihit_cli::{run, CliError};
use serde_json::Value;

fn bin(args: &[&str]) -> (i32, String, String) {
    bin_with_env(args, &[])
}

fn bin_with_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_equihit"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn call(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["equihit"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let json = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, json)
}

fn assert_sorted_keys(v: &Value) {
    match v {
        Value::Object(map) => {
            let keys: Vec<&String> = map.keys().collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
            map.values().for_each(assert_sorted_keys);
        }
        Value::Array(items) => items.iter().for_each(assert_sorted_keys),
        _ => {}
    }
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["drg", "--graph", "petersen"], r#"{"b":[3,2],"c":[1,1]}"#),
        (
            &["paley", "--x", "13", "--k", "3", "--hitting"],
            r#"{"alpha":2,"c":[0,1,2],"h":["12","76/5","72/5"],"h_float":[12.0,15.2,14.4],"k":3,"labels":[1,2,3],"x":13}"#,
        ),
        (
            &["graph", "--graph", "c3"],
            r#"{"edges":[[0,1],[0,2],[1,2]],"n":3}"#,
        ),
        (
            &["fequitable", "--graph", "c5"],
            r#"{"labels":[0,1,2],"quotient":[[0,1,0],[2,0,1],[0,1,1]],"valency":2}"#,
        ),
        (
            &["hitting", "exact", "--graph", "c5", "--target", "0"],
            r#"{"h":["0","4","6","6","4"],"h_float":[0.0,4.0,6.0,6.0,4.0],"target":0}"#,
        ),
        (
            &["drg", "--graph", "c6", "--hitting"],
            r#"{"b":[2,1,1],"c":[1,1,2],"h":["5","8","9"],"h_float":[5.0,8.0,9.0],"k":[1,2,2,1]}"#,
        ),
        (
            &["paley", "--x", "17", "--k", "4", "--closed-form"],
            r#"{"alpha":3,"c":[0,2,1,0],"closed_form":["16","256/13","268/13","288/13"],"k":4,"x":17}"#,
        ),
        (
            &["paley", "--x", "9", "--k", "2"],
            r#"{"error":{"detail":"9 is not an odd prime","kind":"NotPrime"}}"#,
        ),
    ];
    for (args, expected) in cases {
        let (code, stdout, _) = bin(args);
        assert_eq!(stdout.trim_end(), *expected, "{args:?}");
        assert_eq!(code, if expected.contains("\"error\"") { 1 } else { 0 });
    }
}

#[test]
fn json_keys_are_sorted_and_rationals_are_strings() {
    for args in [
        &[
            "srgprod",
            "--graph",
            "petersen",
            "--hitting",
            "--closed-form",
        ][..],
        &[
            "paley",
            "--x",
            "41",
            "--k",
            "4",
            "--quotient",
            "--hitting",
            "--closed-form",
        ],
        &[
            "partition",
            "--graph",
            "c5*c5",
            "--center",
            "0",
            "--refine",
            "--transition",
        ],
        &[
            "hitting",
            "quotient",
            "--graph",
            "petersen*c5",
            "--labeling",
            "product",
        ],
        &[
            "hitting", "mc", "--graph", "petersen", "--source", "1", "--target", "0", "--trials",
            "50",
        ],
        &["verify", "--suite", "drg", "--format", "json"],
        &["drg", "--array", "3,2;1,1", "--hitting", "--quotient"],
    ] {
        let (code, json) = call(args);
        assert_eq!(code, 0, "{args:?}");
        assert_sorted_keys(&json);
        if let Some(h) = json.get("h") {
            assert!(
                h.as_array().unwrap().iter().all(Value::is_string),
                "{args:?}"
            );
        }
    }
    let (_, json) = call(&["srgprod", "--params", "5,2,0,1", "--closed-form"]);
    assert_eq!(json["closed_form"]["d4"], "36");
    assert_eq!(json["kronecker_sum_agrees"], true);
}

#[test]
fn domain_errors_exit_one_with_structured_error() {
    for (args, kind) in [
        (&["drg", "--graph", "p4"][..], "NotDRG"),
        (&["drg", "--graph", "star3"], "NotDRG"),
        (&["fequitable", "--graph", "star3"], "Violation"),
        (&["paley", "--x", "11", "--k", "3"], "BadCongruence"),
        (&["paley", "--x", "15", "--k", "7"], "NotPrime"),
        (&["srgprod", "--graph", "c6"], "NotSRG"),
        (&["srgprod", "--params", "5,2,1,1"], "InvalidSrgParams"),
        (
            &["hitting", "exact", "--graph", "c5", "--target", "9"],
            "VertexOutOfRange",
        ),
        (
            &[
                "hitting", "mc", "--graph", "c5", "--source", "1", "--target", "0", "--trials", "0",
            ],
            "InvalidWalk",
        ),
        (
            &[
                "hitting",
                "mc",
                "--graph",
                "c9",
                "--source",
                "4",
                "--target",
                "0",
                "--step-cap",
                "1",
            ],
            "AllTruncated",
        ),
        (&["graph", "--graph", "/nonexistent/g.json"], "InvalidInput"),
        (
            &[
                "hitting",
                "quotient",
                "--graph",
                "c4",
                "--labeling",
                "product",
            ],
            "InvalidInput",
        ),
    ] {
        let (code, stdout, stderr) = bin(args);
        assert_eq!(code, 1, "{args:?}: {stdout}");
        let json: Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(json["error"]["kind"], kind, "{args:?}");
        assert!(json["error"]["detail"].is_string());
        assert!(stderr.starts_with("error:"));
    }
}

#[test]
fn partition_query_reports_non_equitable_without_failing() {
    let (code, json) = call(&["partition", "--graph", "p4", "--center", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json["equitable"], false);
    assert!(json["witness"].is_string());
    let (_, json) = call(&["partition", "--graph", "p4", "--center", "1", "--refine"]);
    assert_eq!(json["equitable"], true);
    assert_eq!(
        json["partition"]["blocks"],
        serde_json::json!([[1], [0], [2], [3]])
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["drg"],
        &["paley", "--x", "13"],
        &[
            "hitting", "mc", "--graph", "c5", "--source", "x", "--target", "0",
        ],
        &["drg", "--graph", "petersen", "--format", "csv"],
        &["verify", "--suite", "nope"],
    ] {
        let (code, stdout, stderr) = bin(args);
        assert_eq!(code, 2, "{args:?}: {stdout}{stderr}");
        assert!(!stderr.is_empty() || stdout.contains("Usage"), "{args:?}");
    }
    let (code, stdout, _) = bin(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("verify"));
}

/// Every core error constructor maps to exit code 1; the match keeps the
/// list complete when variants are added.
#[test]
fn every_domain_error_maps_to_exit_one() {
    let samples = vec![
        Error::SelfLoop(0),
        Error::DuplicateEdge(0, 1),
        Error::VertexOutOfRange { vertex: 3, n: 2 },
        Error::Disconnected,
        Error::PartitionMismatch("x".into()),
        Error::NotEquitable {
            block: 0,
            target: 1,
            u: 0,
            v: 1,
            count_u: 0,
            count_v: 1,
        },
        Error::IsolatedBlock(0),
        Error::NotStabilized(2),
        Error::SingularSystem,
        Error::DimensionMismatch("x".into()),
        Error::InvalidWalk("x".into()),
        Error::AllTruncated(1),
        Error::InvalidLabeling("x".into()),
        Error::Violation(Violation::EmptyClass {
            center: 0,
            label: Label::Int(2),
        }),
        Error::NotDrg(DrgViolation::NotRegular {
            u: 0,
            v: 1,
            deg_u: 1,
            deg_v: 2,
        }),
        Error::InvalidArray("x".into()),
        Error::NonIntegralKi(2),
        Error::NotSrg("x".into()),
        Error::InvalidSrgParams("x".into()),
        Error::DegenerateDenominator,
        Error::NotPrime(9),
        Error::BadCongruence { x: 11, k: 3 },
        Error::NonConstantClass(1),
        Error::ColumnSumMismatch {
            column: 0,
            expected: 4,
            found: 3,
        },
        Error::OddParity(3),
        Error::ConstraintViolation("x".into()),
        Error::WrongClassCount {
            expected: 3,
            found: 2,
        },
    ];
    let mut kinds = std::collections::BTreeSet::new();
    for e in samples {
        match &e {
            Error::SelfLoop(_)
            | Error::DuplicateEdge(..)
            | Error::VertexOutOfRange { .. }
            | Error::Disconnected
            | Error::PartitionMismatch(_)
            | Error::NotEquitable { .. }
            | Error::IsolatedBlock(_)
            | Error::NotStabilized(_)
            | Error::SingularSystem
            | Error::DimensionMismatch(_)
            | Error::InvalidWalk(_)
            | Error::AllTruncated(_)
            | Error::InvalidLabeling(_)
            | Error::Violation(_)
            | Error::NotDrg(_)
            | Error::InvalidArray(_)
            | Error::NonIntegralKi(_)
            | Error::NotSrg(_)
            | Error::InvalidSrgParams(_)
            | Error::DegenerateDenominator
            | Error::NotPrime(_)
            | Error::BadCongruence { .. }
            | Error::NonConstantClass(_)
            | Error::ColumnSumMismatch { .. }
            | Error::OddParity(_)
            | Error::ConstraintViolation(_)
            | Error::WrongClassCount { .. } => {}
        }
        let cli = CliError::from(e.clone());
        assert_eq!(cli.exit_code(), 1);
        let json = cli.to_json();
        assert_eq!(json["error"]["kind"], e.kind());
        assert_eq!(json["error"]["detail"], e.to_string());
        kinds.insert(e.kind());
    }
    assert_eq!(kinds.len(), 27, "kinds are distinct");
    assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
}

#[test]
fn monte_carlo_output_is_deterministic() {
    let args = [
        "hitting", "mc", "--graph", "c5", "--source", "1", "--target", "0", "--trials", "1000",
        "--seed", "42",
    ];
    let first = bin(&args);
    let second = bin(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, second);
    let other_seed = bin(&[
        "hitting", "mc", "--graph", "c5", "--source", "1", "--target", "0", "--trials", "1000",
        "--seed", "43",
    ]);
    assert_ne!(first.1, other_seed.1);
}

#[test]
fn verify_report_does_not_depend_on_thread_count() {
    let one = bin_with_env(
        &["verify", "--suite", "srgprod"],
        &[("EQUIHIT_THREADS", "1")],
    );
    let three = bin_with_env(
        &["verify", "--suite", "srgprod"],
        &[("EQUIHIT_THREADS", "3")],
    );
    assert_eq!(one, three);
    assert_eq!(one.0, 0);
    assert_eq!(one.1.lines().count(), 3);
    assert!(one.1.lines().all(|l| l.starts_with("PASS [srgprod]")));

    let (code, stdout, _) = bin(&["verify", "--suite", "paley3"]);
    assert_eq!(code, 0);
    for x in [7, 13, 19, 31, 37, 43] {
        assert!(
            stdout.contains(&format!("PASS [paley3] GP({x},3)")),
            "{stdout}"
        );
    }
    let (code, _, _) = bin_with_env(
        &["verify", "--suite", "drg"],
        &[("EQUIHIT_THREADS", "zero")],
    );
    assert_eq!(code, 1);
}

#[test]
fn graph_files_and_products_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("petersen.json");
    let (_, stdout, _) = bin(&["graph", "--graph", "petersen"]);
    std::fs::write(&path, &stdout).unwrap();
    let p = path.to_str().unwrap();
    let (code, stdout, _) = bin(&["drg", "--graph", p]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), r#"{"b":[3,2],"c":[1,1]}"#);

    let (_, json) = call(&["graph", "--graph", &format!("{p}*c5"), "--summary"]);
    assert_eq!(json["n"], 50);
    assert_eq!(json["regular_degree"], 5);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":2,"edges":[[0,0]]}"#).unwrap();
    let (code, json) = call(&["graph", "--graph", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json["error"]["kind"], "SelfLoop");

    let labeling = dir.path().join("f.json");
    // distance labeling of C4
    std::fs::write(
        &labeling,
        r#"{"name":"c4","table":[[0,1,2,1],[1,0,1,2],[2,1,0,1],[1,2,1,0]]}"#,
    )
    .unwrap();
    let (code, json) = call(&[
        "hitting",
        "quotient",
        "--graph",
        "c4",
        "--labeling",
        labeling.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(json["h"], serde_json::json!(["3", "4"]));
}

#[test]
fn csv_for_flat_tables() {
    let (code, stdout, _) = bin(&[
        "paley",
        "--x",
        "13",
        "--k",
        "3",
        "--hitting",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "label,h,h_float\n1,12,12\n2,76/5,15.2\n3,72/5,14.4\n"
    );
    let (_, stdout, _) = bin(&[
        "hitting",
        "quotient",
        "--graph",
        "c5*c5",
        "--labeling",
        "product",
        "--format",
        "csv",
    ]);
    assert!(stdout.contains("\"(0,1)\",24,24"), "{stdout}");
}
