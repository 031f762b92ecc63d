//! Golden-file tests: every bundled output regenerates byte-identically.
//!
//! Run with `UPDATE_GOLDEN=1` to rewrite the expectations after an
//! intentional change.

use std::path::PathBuf;
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_flagcalc")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check(name: &str, args: &[&str]) {
    let output = Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "{name}: exit {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &output.stdout).unwrap();
        return;
    }
    let expected = std::fs::read(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; run with UPDATE_GOLDEN=1"));
    assert_eq!(
        output.stdout,
        expected,
        "{name} drifted from its golden file\n--- got ---\n{}",
        String::from_utf8_lossy(&output.stdout)
    );
}

#[test]
fn golden_bbw() {
    check(
        "bbw_projective_leg.txt",
        &["bbw", "A3[xx.]{-5,1,0}", "--base", ".x."],
    );
    check(
        "bbw_full_flag_leg.json",
        &[
            "--format",
            "json",
            "bbw",
            "A3[xxx]{-3,1,-4}",
            "--base",
            ".x.",
        ],
    );
}

#[test]
fn golden_e1_pages() {
    check(
        "e1_twistor_tangent.txt",
        &["e1", "--fibration", "twistor-pp", "1,0,1"],
    );
    check(
        "e1_twistor_negative.txt",
        &["e1", "--fibration", "twistor-pp", "--", "-3,0,0"],
    );
    check(
        "e1_twistor_negative.json",
        &[
            "--format",
            "json",
            "e1",
            "--fibration",
            "twistor-pp",
            "--",
            "-3,0,0",
        ],
    );
    check(
        "e1_grassmann_trivial.txt",
        &["e1", "--fibration", "grassmann-pm", "0,0,0"],
    );
    check(
        "e1_grassmann_trivial_discounted.txt",
        &[
            "e1",
            "--fibration",
            "grassmann-pm",
            "--discount-flags",
            "0,0,0",
        ],
    );
    check(
        "e1_bgg_tangent.txt",
        &["e1", "--fibration", "twistor-pp", "--bgg", "1,0,1"],
    );
}

#[test]
fn golden_duality_and_bgg_complex() {
    check(
        "duality_tangent.txt",
        &["duality", "--fibration", "twistor-pp", "1,0,1"],
    );
    check(
        "duality_random.txt",
        &[
            "--seed",
            "2020",
            "duality",
            "--fibration",
            "grassmann-pm",
            "--random",
            "5",
        ],
    );
    check(
        "bgg_complex_range.txt",
        &["bgg-complex", "--fibration", "twistor-pp", "--", "-6,0,1"],
    );
    check(
        "bgg_complex_general.json",
        &[
            "--format",
            "json",
            "bgg-complex",
            "--fibration",
            "twistor-pp",
            "2,1,3",
        ],
    );
}

#[test]
fn golden_sweeps() {
    check(
        "sweep_line_table.txt",
        &[
            "sweep",
            "--fibration",
            "twistor-pp",
            "--criterion",
            "line-table",
        ],
    );
    check(
        "sweep_zero_small.txt",
        &[
            "sweep",
            "--fibration",
            "twistor-pp",
            "--criterion",
            "zero",
            "--range",
            "0..4,0..2,0..2",
        ],
    );
    check(
        "sweep_tricky_small.txt",
        &[
            "sweep",
            "--fibration",
            "grassmann-pm",
            "--criterion",
            "tricky",
            "--range",
            "0..2,0..2,0..2",
        ],
    );
}

#[test]
fn golden_scenarios() {
    check("scenario_twistor.txt", &["scenario", "twistor-pp"]);
    check("scenario_grassmann.txt", &["scenario", "grassmann-pm"]);
    check(
        "scenario_twistor.json",
        &["--format", "json", "scenario", "twistor-pp"],
    );
}

#[test]
fn exit_codes() {
    // Usage and config errors exit with 2.
    let out = Command::new(binary())
        .args(["e1", "--fibration", "no-such-fibration", "1,0,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(binary())
        .args(["e1", "--fibration", "twistor-pp", "0,0,-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(binary())
        .args(["bbw", "A3[x.x]{0,0,0}", "--base", ".x."])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Checks that pass exit with 0.
    let out = Command::new(binary())
        .args(["duality", "--fibration", "twistor-pp", "1,0,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_dir_env_var() {
    let dir = std::env::temp_dir().join(format!("flagcalc-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(binary())
        .args(["bbw", "A3[xx.]{3,0,2}", "--base", ".x."])
        .env("FLAGCALC_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read(dir.join("bbw.txt")).expect("report written to the output dir");
    assert_eq!(written, out.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
