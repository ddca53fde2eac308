//! Golden-file harness shared by the golden and acceptance targets.
//!
//! Each directory under `tests/golden` holds an `args` file, the inputs it
//! refers to, and the expected `stdout`, `stderr`, `exit` and optional
//! `expected.json`. In `args`, `@/` expands to the case directory and `@json`
//! to a scratch JSON path. Setting `FERMIEX_BLESS=1` rewrites the expectations.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_fermiex");

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden_cases() -> Vec<PathBuf> {
    let mut cases: Vec<PathBuf> = fs::read_dir(golden_dir())
        .expect("golden directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.join("args").is_file())
        .collect();
    cases.sort();
    cases
}

#[derive(Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
    pub json: Option<String>,
}

pub fn run_case(case: &Path) -> RunOutput {
    let scratch = tempfile::tempdir().expect("tempdir");
    let json_path = scratch.path().join("report.json");
    let args_text = fs::read_to_string(case.join("args")).expect("args file");
    let prefix = format!("{}/", case.display());
    let args: Vec<String> = args_text
        .split_whitespace()
        .map(|a| {
            if a == "@json" {
                json_path.display().to_string()
            } else {
                a.replace("@/", &prefix)
            }
        })
        .collect();
    let out = Command::new(BIN)
        .args(&args)
        .env_remove("FERMI_TOL")
        .output()
        .expect("run fermiex");
    RunOutput {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        exit: out.status.code().expect("exit code"),
        json: fs::read_to_string(&json_path).ok(),
    }
}

fn expected(case: &Path, name: &str) -> Option<String> {
    fs::read_to_string(case.join(name)).ok()
}

/// Runs one case twice and compares both runs byte for byte against the
/// stored expectations.
pub fn check_case(case: &Path) -> Result<(), String> {
    let first = run_case(case);
    if std::env::var_os("FERMIEX_BLESS").is_some() {
        fs::write(case.join("stdout"), &first.stdout).unwrap();
        fs::write(case.join("stderr"), &first.stderr).unwrap();
        fs::write(case.join("exit"), format!("{}\n", first.exit)).unwrap();
        if let Some(json) = &first.json {
            fs::write(case.join("expected.json"), json).unwrap();
        }
    }
    let second = run_case(case);
    let name = case.file_name().unwrap().to_string_lossy().into_owned();
    if first != second {
        return Err(format!("{name}: output differs between runs"));
    }
    let exit = expected(case, "exit").ok_or(format!("{name}: missing exit"))?;
    if exit.trim() != first.exit.to_string() {
        return Err(format!("{name}: exit {} expected {}", first.exit, exit.trim()));
    }
    for (file, actual) in [("stdout", &first.stdout), ("stderr", &first.stderr)] {
        let want = expected(case, file).ok_or(format!("{name}: missing {file}"))?;
        if &want != actual {
            return Err(format!("{name}: {file} differs\n--- expected\n{want}\n--- actual\n{actual}"));
        }
    }
    if expected(case, "expected.json") != first.json {
        return Err(format!("{name}: JSON report differs"));
    }
    Ok(())
}
