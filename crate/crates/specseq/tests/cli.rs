use std::process::Command;

use specseq::fixtures::{parse_picard, PICARD};

fn specseq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specseq"))
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "mu_depth = 1\n").unwrap();
    let out = specseq().arg("rep").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu_depth"));
}

#[test]
fn jimage_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = specseq().args(["jimage", "--json", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "specseq-report");
    assert_eq!(v["version"], 1);
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn unknown_command_is_rejected() {
    let out = specseq().arg("everything").output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn transfer_fixture_bidegrees() {
    assert_eq!(parse_picard(PICARD).unwrap().len(), 2);
    let flipped = PICARD.replace("exotic = false", "exotic = true");
    assert!(parse_picard(&flipped).is_err());
    let moved = PICARD.replace("varsigma varpi^3 D1^-3", "varsigma varpi^4 D1^-3");
    assert!(parse_picard(&moved).is_err());
}
