//! Runs every documented example under docs/examples against the binary
//! and compares output byte for byte.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

#[test]
fn golden_examples() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let mut cases: Vec<_> = std::fs::read_dir(&root)
        .expect("docs/examples missing")
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_dir())
        .collect();
    cases.sort();
    assert!(!cases.is_empty(), "no golden cases found");
    for case in cases {
        let name = case.file_name().unwrap().to_string_lossy().to_string();
        let args_line = std::fs::read_to_string(case.join("args.txt")).unwrap();
        let input = std::fs::read(case.join("input.json")).unwrap();
        let expected = std::fs::read_to_string(case.join("expected.txt")).unwrap();
        let expected_code: i32 = case
            .join("exit.txt")
            .exists()
            .then(|| {
                std::fs::read_to_string(case.join("exit.txt"))
                    .unwrap()
                    .trim()
                    .parse()
                    .unwrap()
            })
            .unwrap_or(0);
        let mut child = Command::new(env!("CARGO_BIN_EXE_binquad"))
            .args(args_line.split_whitespace())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.as_mut().unwrap().write_all(&input).unwrap();
        let out = child.wait_with_output().unwrap();
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert_eq!(
            out.status.code(),
            Some(expected_code),
            "{name}: unexpected exit code; output:\n{stdout}"
        );
        assert_eq!(stdout, expected, "{name}: output drifted");
    }
}

/// Fixed input and seed give byte-identical verify output.
#[test]
fn verify_is_deterministic() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_binquad"))
            .args(["verify", "--trials", "3", "--seed", "9"])
            .stdin(Stdio::null())
            .output()
            .unwrap();
        assert!(out.status.success(), "verify failed");
        out.stdout
    };
    assert_eq!(run(), run());
}
