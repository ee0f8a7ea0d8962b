use std::path::Path;
use std::process::{Command, Output};

fn chipgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chipgame"))
        .args(args)
        .env_remove("CHIPGAME_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn tower_verifies_at_two() {
    let out = chipgame(&["verify", "--side", "pusher", "--strategy", "tower", "--k", "2", "--variant", "restricted", "--c", "1", "--n", "11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["mode"], "exhaustive");
}

#[test]
fn threshold_prints_three() {
    let out = chipgame(&["threshold", "--k", "2", "--variant", "restricted", "--c", "1", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "3\n");
    let out = chipgame(&["threshold", "--k", "2", "--variant", "restricted", "--c", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["threshold"], 3);
}

#[test]
fn solve_small_general_game() {
    let out = chipgame(&["solve", "--k", "2", "--n", "1", "--variant", "general", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "RemoverWin\n");
    let out = chipgame(&["solve", "--k", "2", "--n", "3", "--jobs", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"], "PusherWin");
    let out = chipgame(&["solve", "--k", "3", "--n", "7", "--variant", "restricted"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["N"].as_u64(), v["c"].as_u64(), v["outcome"].as_str()), (Some(7), Some(1), Some("RemoverWin")));
    assert!(v["statesExplored"].as_u64().unwrap() > 0);
}

#[test]
fn counterexample_exits_one() {
    let out = chipgame(&["verify", "--side", "pusher", "--strategy", "all", "--k", "3", "--n", "3"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["holds"], false);
    assert!(v["counterexample"]["rounds"].is_array());
}

#[test]
fn trials_mode() {
    let out = chipgame(&["verify", "--side", "remover", "--strategy", "fib-remover", "--k", "3", "--n", "6", "--variant", "restricted", "--trials", "200", "--seed", "5", "--jobs", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["summary"]["removerWins"], 200);
}

#[test]
fn usage_errors_exit_two() {
    let out = chipgame(&["play", "--k", "2", "--n", "2", "--pusher", "nonsense"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("brick") && err.contains("tower"), "{err}");
    assert_eq!(code(&chipgame(&["solve", "--k", "2", "--n", "1", "--c", "2"])), 2);
    assert_eq!(code(&chipgame(&["solve", "--k", "0", "--n", "1"])), 2);
    assert_eq!(code(&chipgame(&["frobnicate"])), 2);
    assert_eq!(code(&chipgame(&["emit", "--k", "2", "--n", "4", "--variant", "mmb", "--pusher", "all"])), 2);
}

#[test]
fn budget_exits_three() {
    let out = chipgame(&["solve", "--k", "4", "--n", "14", "--budget", "50"]);
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_chipgame"))
        .args(["verify", "--side", "pusher", "--strategy", "brick", "--k", "4", "--n", "32"])
        .env("CHIPGAME_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = chipgame(&["threshold", "--k", "4", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["bracket"].is_array());
}

#[test]
fn play_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("game.json");
    let f = file.to_str().unwrap();
    let out = chipgame(&["play", "--k", "3", "--n", "26", "--variant", "restricted", "--pusher", "tower", "--remover", "random:seed=3", "--out", f]);
    assert_eq!(code(&out), 0);
    let first = std::fs::read_to_string(&file).unwrap();
    let again = chipgame(&["play", "--k", "3", "--n", "26", "--variant", "restricted", "--pusher", "tower", "--remover", "random:seed=3"]);
    assert_eq!(stdout(&again), first);

    let out = chipgame(&["replay", f]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["kind"].as_str(), v["outcome"].as_str()), (Some("transcript"), Some("PusherWin")));

    let tampered = first.replacen("PusherWin", "RemoverWin", 1);
    std::fs::write(&file, tampered).unwrap();
    assert_eq!(code(&chipgame(&["replay", f])), 1);
    assert_eq!(code(&chipgame(&["replay", "/nonexistent/file.json"])), 2);
}

#[test]
fn emit_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for colorer in ["random:seed=4", "greedy", "solver"] {
        let file = dir.path().join(format!("{colorer}.json"));
        let f = file.to_str().unwrap();
        let out = chipgame(&["emit", "--k", "2", "--n", "4", "--pusher", "brick", "--colorer", colorer, "--out", f]);
        assert_eq!(code(&out), 0, "{colorer}: {}", String::from_utf8_lossy(&out.stderr));
        let out = chipgame(&["replay", f]);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["edges"], 8);
        assert!(!v["monochromatic"].as_array().unwrap().is_empty());
    }
    let out = chipgame(&["emit", "--k", "2", "--n", "4", "--pusher", "brick", "--format", "text"]);
    assert_eq!(stdout(&out).lines().count(), 8);
    assert!(Path::new(env!("CARGO_BIN_EXE_chipgame")).exists());
}

#[test]
fn human_remover_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_chipgame"))
        .args(["play", "--k", "1", "--n", "1", "--human", "remover", "--format", "text"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"x\n1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PusherWin after 1 rounds"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("could not read `x`"));
}
