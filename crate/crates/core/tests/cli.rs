mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn arrkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrkit")).args(args).output().expect("binary runs")
}

fn input(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/inputs").join(name).display().to_string()
}

fn error_of(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("error block is JSON");
    v["error"].clone()
}

#[test]
fn golden_files_are_reproduced_twice() {
    for (file, line) in common::GOLDEN {
        let golden = std::fs::read(common::golden_path(file)).unwrap();
        let args = common::args(line);
        let args: Vec<&str> = args[1..].iter().map(String::as_str).collect();
        let first = arrkit(&args);
        let second = arrkit(&args);
        assert!(first.status.success(), "{line}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "{line}");
        assert_eq!(first.stdout, golden, "{line} differs from {file}");
    }
}

#[test]
fn in_process_run_matches_the_binary() {
    let (file, line) = common::GOLDEN.iter().find(|(f, _)| *f == "lines_p2_4.txt").unwrap();
    let job = <arrkit::cli::JobSpec as clap::Parser>::try_parse_from(common::args(line)).unwrap();
    let text = arrkit::cli::run(&job).unwrap();
    assert_eq!(text.as_bytes(), std::fs::read(common::golden_path(file)).unwrap());
}

#[test]
fn worked_examples() {
    let out = String::from_utf8(arrkit(&["mv", "--example", "lines-p2", "--n", "4"]).stdout).unwrap();
    assert!(out.contains("Betti: 1, 3\n"), "{out}");
    let out = arrkit(&["mv", "--example", "quadric-p3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let e2: Vec<&String> = v["e2"].as_object().unwrap().keys().collect();
    assert_eq!(e2, ["(-1,4)", "(-2,6)", "(0,0)"]);
    let out = String::from_utf8(arrkit(&["chromatic", "--graph", "k3", "--space", "p1"]).stdout).unwrap();
    assert!(out.contains("Euler check: (0, 0, true)"), "{out}");
}

#[test]
fn exit_codes_and_error_blocks() {
    let cases: [(&[&str], i32, &str); 4] = [
        (&["mv", "--example", "nope"], 2, "SchemaError"),
        (&["cubical-mv", "--example", "braid", "--n", "3"], 3, "InvariantViolation"),
        (&["os-algebra", "--input", &input("chain.json")], 4, "NotLocallyGeometric"),
        (&["os-algebra", "--input", &input("ungradable.json")], 5, "NotGradable"),
    ];
    for (args, code, kind) in cases {
        let out = arrkit(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty());
        let e = error_of(&out);
        assert_eq!(e["kind"], kind);
        assert_eq!(e["exit_code"], code);
        assert!(!e["message"].as_str().unwrap().is_empty());
    }
    let missing = arrkit(&["mv", "--input", "/nonexistent/support.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(arrkit(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn out_flag_and_logging_leave_the_report_unchanged() {
    let dir = std::env::temp_dir().join(format!("arrkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("braid.txt");
    let out = arrkit(&["mv", "--example", "braid", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, std::fs::read(common::golden_path("braid_3.txt")).unwrap());
    let logged = Command::new(env!("CARGO_BIN_EXE_arrkit"))
        .args(["mv", "--example", "braid", "--n", "3"])
        .env("ARRKIT_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(logged.stdout, written);
    assert!(String::from_utf8_lossy(&logged.stderr).contains("running Mv"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn custom_inputs() {
    let support = arrkit(&["mv", "--input", &input("../../assets/quadric_p3.json")]);
    assert!(support.status.success());
    assert!(String::from_utf8_lossy(&support.stdout).contains("Betti: 1, 0, 0, 3, 1"));
    let poset = arrkit(&["os-algebra", "--input", &input("pi3.json"), "--format", "json"]);
    assert!(poset.status.success(), "{}", String::from_utf8_lossy(&poset.stderr));
    let arr = arrkit(&["subspace", "--input", &input("three_lines.json")]);
    let text = String::from_utf8(arr.stdout).unwrap();
    assert!(text.contains("regions of a real form): 6"), "{text}");
    let graph = arrkit(&["chromatic", "--input", &input("triangle.json"), "--space", "p1"]);
    assert!(String::from_utf8_lossy(&graph.stdout).contains("Euler check: (0, 0, true)"));
}
