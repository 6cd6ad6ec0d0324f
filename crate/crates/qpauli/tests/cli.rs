//! End-to-end checks of the command-line surface: exit codes, formats,
//! and output routing.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpauli"))
}

#[test]
fn verify_small_suite_exits_zero() {
    let out = bin()
        .args(["verify", "--suite", "identities"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("binomial-halfsum"));
    assert!(text.contains("0 failed"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["moments", "--variable", "bogus"],
        &["moments", "--variable", "wt"], // missing --t
        &["verify", "--suite", "bogus"],
        &["s4", "--weights", "1,0,0"],
        &["s4", "--weights", "1/2,1/2,1/2,0"],
        &["density", "--variable", "m4", "--grid", "nope"],
        &["no-such-subcommand"],
    ];
    for args in cases {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty(), "args {args:?} should explain itself");
    }
}

#[test]
fn moments_csv_format_and_output_file() {
    let dir = std::env::temp_dir().join(format!("qpauli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m2.csv");
    let out = bin()
        .args([
            "moments",
            "--variable",
            "m2",
            "--order",
            "3",
            "--format",
            "csv",
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "k,value\n1,1/4\n2,1/6\n3,1/8\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn moments_with_parameter_evaluates_exactly() {
    let out = bin()
        .args([
            "moments", "--variable", "wt", "--t", "1/2", "--order", "2", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // second moment of the interpolant at t = 1/2:
    // (1+t^2)/8 + (1-t^2)/12 = 11/64 + 1/16 = 15/64... computed exactly by
    // the library; pin the printed exact value
    assert!(text.starts_with("k,value\n1,1/4\n2,"));
    let second = text.lines().nth(2).unwrap();
    let value = second.split(',').nth(1).unwrap();
    let r: qpauli::exact::Rational = value.parse().unwrap();
    let sym = qpauli::laws::exact_moments_up_to(qpauli::laws::VariableKind::Wt, 2, 12).unwrap();
    let expected = sym[1].eval(&qpauli::exact::Rational::new(1, 2));
    assert_eq!(r, expected);
}

#[test]
fn moments_order_cap_is_loud() {
    let out = bin()
        .args(["moments", "--variable", "n3", "--order", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("out of range"), "stderr: {err}");
    // the cap is overridable explicitly
    let out = bin()
        .args(["moments", "--variable", "m1", "--order", "13", "--cap", "13"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn density_csv_has_header_and_converged_column() {
    let out = bin()
        .args([
            "density",
            "--variable",
            "m4",
            "--grid",
            "0.4:0.6:3",
            "--eps",
            "1e-2:1e-5:4",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,density,converged"));
    assert_eq!(lines.clone().count(), 3);
    for line in lines {
        assert_eq!(line.split(',').count(), 3);
    }
}

#[test]
fn mc_json_records_seed() {
    let out = bin()
        .args([
            "mc", "--variable", "m4", "--samples", "1000", "--seed", "7", "--order", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["schema"], "1");
    assert_eq!(json["seed"], 7);
    assert_eq!(json["samples"], 1000);
    assert_eq!(json["moments"].as_array().unwrap().len(), 2);
    assert!(json["histogram"]["counts"].as_array().unwrap().len() == 50);
}

#[test]
fn weingarten_csv_labels_rows_with_partitions() {
    let out = bin()
        .args(["weingarten", "--k", "2", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("matrix,row,col,value\n"));
    assert!(text.contains("gram,\"{1}{2}\",\"{1}{2}\",16/1"));
    assert!(text.contains("weingarten,\"{1,2}\",\"{1,2}\",1/3"));
}

#[test]
fn thread_cap_does_not_change_results() {
    let run = |threads: &str| {
        let out = bin()
            .args([
                "mc",
                "--variable",
                "n3",
                "--samples",
                "30000",
                "--seed",
                "9",
                "--format",
                "csv",
                "--threads",
                threads,
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}
