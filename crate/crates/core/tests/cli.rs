use std::path::Path;
use std::process::{Command, Output};

fn cretan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cretan"))
        .args(args)
        .env_remove("CRETAN_FIXTURE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_sbibd_45() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m45.txt");
    let svg = dir.path().join("m45.svg");
    let o = cretan(&[
        "construct",
        "--order",
        "45",
        "--method",
        "sbibd",
        "--out",
        path_str(&out),
        "--render",
        path_str(&svg),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("cretan-matrix 1\n"));
    assert!(text.lines().any(|l| l == "omega 81/4"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert_eq!(cretan(&["verify", path_str(&out)]).status.code(), Some(0));
}

#[test]
fn tampered_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m13.txt");
    assert_eq!(
        cretan(&[
            "construct",
            "--order",
            "13",
            "--method",
            "sbibd",
            "--out",
            path_str(&out)
        ])
        .status
        .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row = lines.iter().position(|l| l == "entries").unwrap() + 1;
    let mut cells: Vec<&str> = lines[row].split(' ').collect();
    cells[0] = if cells[0] == "1" { "-1" } else { "1" };
    lines[row] = cells.join(" ");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = cretan(&["verify", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert!(
        report.contains("residual") && report.trim_end().ends_with("FAIL"),
        "{report}"
    );
}

#[test]
fn construct_verify_sample_orders() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["3", "5", "13", "21", "37", "45", "65", "81", "145"] {
        let out = dir.path().join(format!("{n}.txt"));
        let o = cretan(&["construct", "--order", n, "--out", path_str(&out)]);
        assert_eq!(o.status.code(), Some(0), "order {n}");
        assert_eq!(cretan(&["verify", path_str(&out)]).status.code(), Some(0), "order {n}");
    }
}

#[test]
fn complex_and_group_outputs_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (n, method) in [
        ("10", "conference"),
        ("9", "gh"),
        ("8", "bordered"),
        ("10", "direct-sum"),
    ] {
        let out = dir.path().join(format!("{method}.txt"));
        let pgm = dir.path().join(format!("{method}.pgm"));
        let o = cretan(&[
            "construct",
            "--order",
            n,
            "--method",
            method,
            "--out",
            path_str(&out),
            "--render",
            path_str(&pgm),
        ]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        assert!(std::fs::read_to_string(&pgm).unwrap().starts_with("P2\n"));
        assert_eq!(cretan(&["verify", path_str(&out)]).status.code(), Some(0), "{method}");
    }
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/gw-5-z3.mat");
    assert_eq!(cretan(&["verify", data]).status.code(), Some(0));
}

#[test]
fn bounds_nine() {
    let o = cretan(&["bounds", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("19683") && s.contains("16888.2"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        cretan(&["construct", "--order", "101", "--method", "regular-hadamard"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cretan(&["construct", "--order", "9", "--method", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cretan(&["construct", "--order", "15", "--method", "regular-hadamard"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cretan(&["frobnicate"]).status.code(), Some(2));
    let empty = tempfile::tempdir().unwrap();
    let o = cretan(&[
        "--fixtures",
        path_str(empty.path()),
        "construct",
        "--order",
        "45",
        "--method",
        "sbibd",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn catalog_outputs() {
    let o = cretan(&["catalog", "--max", "45", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Conflict: 0"), "{s}");
    let o = cretan(&["catalog", "--max", "21", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["rows"][5]["order"], 13);
}

#[test]
fn designs_subcommands() {
    let o = cretan(&["designs", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 12);
    let o = cretan(&["designs", "make", "--family", "singer", "--params", "2", "3"]);
    assert!(stdout(&o).contains("(13,4,1)"));
    let o = cretan(&["designs", "make", "--family", "qr", "--params", "13"]);
    assert_eq!(o.status.code(), Some(2));
}
