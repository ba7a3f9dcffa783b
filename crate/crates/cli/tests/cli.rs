use std::process::Command;

use picard_core::io::ReportRecord;

const EX4: &str = r#"{"label":"ex4","f":[2,5,6,2,1],"generators":[{"g":[-1,1,1],"h":[2]}]}"#;
const EX2: &str = r#"{"label":"ex2","f":[-24,76,-78,25,1],"generators":[{"g":[4,-6,1],"h":[-2,3]}]}"#;

fn picard() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_picard"));
    for v in ["PICARD_PRIME", "PICARD_PRECISION", "PICARD_E", "PICARD_CURVE", "PICARD_JOBS"] {
        c.env_remove(v);
    }
    c
}

fn stdout(c: &mut Command) -> (i32, String) {
    let out = c.output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn roots_prints_records() {
    let (code, s) = stdout(picard().args(["roots", "--p", "5", "--n", "3", "--poly", "-1,0,1"]));
    assert_eq!(code, 0);
    assert_eq!(s, "(1,3)\n(124,3)\n");
    let (_, s) = stdout(picard().args(["roots", "--p", "5", "--n", "3", "--poly", "-5,0,1"]));
    assert_eq!(s, "");
    let (_, s) = stdout(picard().args(["roots", "--p", "5", "--n", "3", "--poly", "0,0,1"]));
    assert_eq!(s, "(0,2) non-simple\n");
}

#[test]
fn zeta_reports_and_refuses() {
    let (code, s) = stdout(picard().args(["zeta", "--curve", r#"{"f":[-2,0,0,0,1]}"#, "--prime", "13"]));
    assert_eq!(code, 0, "{s}");
    assert!(s.contains("det M = 2197"));
    assert!(s.contains("point count ok"));
    let (code, _) = stdout(picard().args(["zeta", "--curve", r#"{"f":[-2,0,0,0,1]}"#, "--prime", "3"]));
    assert_ne!(code, 0);
}

#[test]
fn analyze_rejects_invalid_input() {
    let (code, _) = stdout(picard().args(["analyze", "--curve", r#"{"f":[2,5,6,2,2]}"#]));
    assert_ne!(code, 0);
    let (code, _) = stdout(picard().args(["analyze", "--curve", EX4, "--prime", "3"]));
    assert_ne!(code, 0);
    let out = picard().args(["analyze", "--curve", r#"{"f":[1,2"#]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn analyze_split_generator_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _) = stdout(picard().env("PICARD_CURVE", EX4).env("PICARD_PRIME", "11").args(["analyze", "--out", path.to_str().unwrap()]));
    assert_eq!(code, 0);
    let rec: ReportRecord = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(rec.report.is_success());
    assert_eq!((rec.report.s.len(), rec.report.t.len()), (1, 1));
    assert_eq!(rec.p, 11);
    let again: ReportRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(again, rec);
}

#[test]
fn batch_keeps_order_and_flags_problems() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let out = dir.path().join("out.jsonl");
    std::fs::write(&input, format!("{EX4}\n{EX2}\n\n{EX4}\n")).unwrap();
    let (code, s) = stdout(picard().args(["batch", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2", "--precision", "10"]));
    assert_eq!(code, 0, "{s}");
    assert!(s.contains("success: 3"), "{s}");
    assert!(s.contains("duplicate labels: ex4"), "{s}");
    let lines: Vec<ReportRecord> = std::fs::read_to_string(&out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let labels: Vec<_> = lines.iter().map(|r| r.report.label.clone().unwrap()).collect();
    assert_eq!(labels, ["ex4", "ex2", "ex4"]);
    // identical runs give identical reports apart from timing
    let (a, b) = (&lines[0], &lines[2]);
    assert_eq!(a.report, b.report);

    std::fs::write(&input, format!("{EX4}\nnot json\n")).unwrap();
    let (code, s) = stdout(picard().args(["batch", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--precision", "10"]));
    assert_eq!(code, 1);
    assert!(s.contains("invalid: 1"), "{s}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("line 2"));
}

#[test]
fn batch_of_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let out = dir.path().join("out.jsonl");
    std::fs::write(&input, "").unwrap();
    let (code, _) = stdout(picard().args(["batch", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
}
