//! Binary-level checks: exit codes, presentation files, report shapes.

use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_wordmaps"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn info_report_shape() {
    let (stdout, _, code) = run(&["group", "info", "--preset", "q2"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["command"], "group info");
    assert_eq!(report["results"]["order"], 8);
    assert_eq!(report["results"]["exponents"]["e"], 4);
    assert!(report["timing_ms"].is_number());
}

#[test]
fn build_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"p": 3, "kind": "odd-special", "n": 2,
            "B": [[[0, 1], [2, 0]]], "T": [[0, 0]]}}"#
    )
    .unwrap();
    let (stdout, _, code) = run(&["group", "build", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["results"]["order"], 27);
    assert_eq!(report["results"]["is_special_p_group"], true);
}

#[test]
fn degenerate_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind": "two-special", "n": 2, "q": [[[0, 0], [0, 0]]]}"#,
    )
    .unwrap();
    let (_, stderr, code) = run(&["group", "build", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("degenerate"), "{stderr}");
}

#[test]
fn unknown_preset_exits_2() {
    let (_, stderr, code) = run(&["group", "info", "--preset", "nope"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown preset"), "{stderr}");
}

#[test]
fn budget_exit_3() {
    let (_, _, code) = run(&[
        "words", "image", "--word", "[x,y]", "--preset", "example-3-8", "--budget", "7",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn csv_flattening_output() {
    let (stdout, _, code) = run(&["group", "info", "--preset", "q2", "--csv"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("key,value\n"), "{stdout}");
    assert!(stdout.contains("results.order,8\n"));
}

#[test]
fn verify_passes_on_shipped_fleets() {
    let (stdout, _, code) = run(&["verify", "thm-4-11"]);
    assert_eq!(code, 0, "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["results"]["failed"], 0);
    // Census details carry the machine-readable counts.
    let checks = report["results"]["checks"].as_array().unwrap();
    let q2 = checks
        .iter()
        .find(|c| c["name"] == "thm-4-11/q2")
        .unwrap();
    assert_eq!(q2["details"]["census"]["impostors"], 1);
    assert_eq!(q2["details"]["census"]["word_images"], 3);
}

#[test]
fn verify_impostor_rows_for_small_abelians() {
    let (stdout, _, code) = run(&["verify", "thm-3-2", "--fleet", "abelian-small"]);
    assert_eq!(code, 0, "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["results"]["failed"], 0);
    let checks = report["results"]["checks"].as_array().unwrap();
    let row = |name: &str| {
        checks
            .iter()
            .find(|c| c["name"] == format!("thm-3-2/{name}"))
            .unwrap_or_else(|| panic!("missing row {name}"))
    };
    assert_eq!(row("z4")["details"]["got"], true);
    assert_eq!(row("z2x2")["details"]["got"], false);
}

#[test]
fn verify_reports_skips_for_infeasible_members() {
    // The order-243 groups sit above the oracle cap: skipped, not passed.
    let (stdout, _, code) = run(&["verify", "thm-3-2", "--fleet", "extraspecial-small"]);
    assert_eq!(code, 0, "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let skipped = report["results"]["skipped"].as_u64().unwrap();
    assert_eq!(skipped, 2, "{stdout}");
    let passed = report["results"]["passed"].as_u64().unwrap();
    assert_eq!(passed, 6);
}

#[test]
fn image_hex_is_stable() {
    let (stdout, _, code) = run(&["words", "image", "--word", "[x,y]", "--preset", "q2"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // Ranks 0 and 4: the identity and the central involution.
    assert_eq!(report["results"]["image_hex"], "11");
    assert_eq!(report["results"]["size"], 2);
}
