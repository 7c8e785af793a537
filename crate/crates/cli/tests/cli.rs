use std::process::Command;

fn qalcove(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qalcove"))
        .args(args)
        .env_remove("QALCOVE_MAX_PAR")
        .env_remove("QALCOVE_MAX_DEGREE")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qalcove").chain(args.iter().copied());
    let code = qalcove_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

const WORKED: [&str; 10] = [
    "--type",
    "A2",
    "--weight",
    "1,-1",
    "--w",
    "s1",
    "--chain",
    "custom:a1,-a2",
    "--format",
    "table",
];

#[test]
fn worked_table_layout() {
    let mut args = vec!["admissible"];
    args.extend(WORKED);
    let (code, out, _) = qalcove(&args);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("A "));
    assert!(lines[1].starts_with("{} "));
    assert!(lines[2].starts_with("{1} "));
    assert!(lines[3].starts_with("{2} "));
    assert!(lines[4].starts_with("{1,2} "));
    assert!(lines[3].contains("s1*s2"));
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 5] = [
        &[
            "chain",
            "--type",
            "B2",
            "--weight",
            "2,-1",
            "--chain",
            "segment:9",
        ],
        &[
            "chevalley",
            "--type",
            "A2",
            "--weight",
            "2,-1",
            "--chain",
            "segment:3",
            "--x",
            "s2",
            "--xi",
            "1,0",
        ],
        &["qbg", "--type", "B2", "--dot"],
        &["qls", "--type", "G2", "--weight", "1,0", "--w", "s1"],
        &["qk-constants", "--type", "A3", "--format", "json"],
    ];
    for args in runs {
        let a = qalcove(args);
        let b = qalcove(args);
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
        assert_eq!(a.1, b.1, "{args:?}");
        assert_eq!(in_process(args).1, a.1);
    }
}

#[test]
fn zero_weight_is_a_single_identity_term() {
    let (code, out, _) = qalcove(&["chevalley", "--type", "A2", "--weight", "0,0", "--x", "e"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["w"], "e");
    assert_eq!(
        terms[0]["coeff"],
        serde_json::json!([{"q_exp": 0, "weight": [0, 0], "c": 1}])
    );
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 8] = [
        &["nonsense"],
        &["chain", "--type", "Z9", "--weight", "1"],
        &["chain", "--type", "A2", "--weight", "1,2,3"],
        &[
            "admissible",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--w",
            "s7",
        ],
        &[
            "chevalley",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--regime",
            "dominant",
        ],
        &[
            "chevalley",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--chain",
            "custom:a1,a1+a2,-(a1+a2),-a2",
        ],
        &["qk-constants", "--type", "B2"],
        &["verify", "bijection", "--type", "A2"],
    ];
    for args in cases {
        let (code, out, err) = qalcove(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?} wrote partial output");
        assert!(!err.is_empty());
    }
    assert_eq!(qalcove(&["--help"]).0, 0);
}

#[test]
fn unverified_flag_admits_custom_walks() {
    let (code, _, _) = qalcove(&[
        "chevalley",
        "--type",
        "A2",
        "--weight",
        "1,-1",
        "--chain",
        "custom:a1,a1+a2,-(a1+a2),-a2",
        "--unverified",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn verify_suites_pass() {
    let cases: [&[&str]; 6] = [
        &["verify", "ybe", "--type", "B2"],
        &["verify", "bijection", "--type", "B2", "--weight", "1,1"],
        &[
            "verify",
            "chain-independence",
            "--type",
            "A2",
            "--weight",
            "2,-1",
        ],
        &[
            "verify",
            "operator-product",
            "--type",
            "B2",
            "--weight",
            "-1,1",
        ],
        &["verify", "qk-signs", "--type", "A3"],
        &["qk-constants", "--type", "A2", "--verify"],
    ];
    for args in cases {
        let (code, out, err) = qalcove(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(!out.is_empty());
    }
}

#[test]
fn injected_faults_exit_1() {
    let cases: [&[&str]; 5] = [
        &["verify", "ybe", "--type", "A2", "--inject-fault"],
        &[
            "verify",
            "bijection",
            "--type",
            "A2",
            "--weight",
            "1,0",
            "--inject-fault",
        ],
        &[
            "verify",
            "chain-independence",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--inject-fault",
        ],
        &[
            "verify",
            "operator-product",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--inject-fault",
        ],
        &["verify", "qk-signs", "--type", "A2", "--inject-fault"],
    ];
    for args in cases {
        let (code, out, _) = qalcove(args);
        assert_eq!(code, 1, "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], false);
    }
}

#[test]
fn truncation_from_environment() {
    let args = [
        "chevalley",
        "--type",
        "A2",
        "--weight",
        "1,0",
        "--format",
        "table",
    ];
    let run = |par: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_qalcove"))
            .args(args)
            .env("QALCOVE_MAX_PAR", par)
            .env("QALCOVE_MAX_DEGREE", "3")
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert!(run("1").starts_with("truncated: |chi| <= 1, degree <= 3"));
    assert!(run("1").lines().count() < run("2").lines().count());
}

#[test]
fn q_one_removes_q_powers() {
    let (_, out, _) = qalcove(&[
        "chevalley",
        "--type",
        "A2",
        "--weight",
        "1,-1",
        "--x",
        "s1",
        "--xi",
        "1,2",
        "--chain",
        "custom:a1,-a2",
        "--q-one",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for t in v["terms"].as_array().unwrap() {
        for c in t["coeff"].as_array().unwrap() {
            assert_eq!(c["q_exp"], 0);
        }
    }
}

#[test]
fn writes_to_out_file() {
    let path = std::env::temp_dir().join(format!("qalcove-cli-test-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = qalcove(&["qk-constants", "--type", "A1", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "i,w,v,d,N\n1,e,s1,0,1\n1,s1,e,1,1\n"
    );
    std::fs::remove_file(path).unwrap();
}

#[test]
fn qbg_formats() {
    let (code, out, _) = qalcove(&["qbg", "--type", "A2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    let (_, out, _) = qalcove(&["qbg", "--type", "A2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    let (code, out, _) = qalcove(&[
        "qbg",
        "--type",
        "A2",
        "--parabolic",
        "2",
        "--level",
        "1/2",
        "--weight",
        "1,0",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn qk_chevalley_cross_check() {
    for w in ["e", "s1", "s2*s1", "s1*s2*s1"] {
        let (code, _, err) = qalcove(&[
            "qk-chevalley",
            "--type",
            "A2",
            "--i",
            "2",
            "--w",
            w,
            "--cross-check",
        ]);
        assert_eq!(code, 0, "{w}: {err}");
    }
    let (code, _, _) = qalcove(&[
        "qk-chevalley",
        "--type",
        "A2",
        "--i",
        "1",
        "--chain",
        "custom:a1",
    ]);
    assert_eq!(code, 2);
}
