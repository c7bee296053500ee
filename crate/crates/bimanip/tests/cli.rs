//! End-to-end checks of the `bimanip` binary: subcommands, flags, exit
//! codes and output determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bimanip"))
}

fn tiny_config(dir: &Path, task: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    let text = format!(
        "task.name = {task}\n\
         task.episode_limit = 40\n\
         tactile.grid = 4\n\
         ppo.hidden1 = 8\n\
         ppo.hidden2 = 8\n\
         ppo.envs = 2\n\
         ppo.horizon = 8\n\
         ppo.iterations = 2\n\
         ppo.minibatch = 8\n"
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn missing_config_exits_2_and_names_the_path() {
    let out = bin()
        .args(["train", "--config", "/nonexistent/missing.cfg", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/nonexistent/missing.cfg"), "{err}");
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "task.name = bi_pushing\nno.such_key = 1\n").unwrap();
    let out = bin()
        .args(["train", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn train_twice_yields_identical_logs_and_eval_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_gathering");
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for out in [&out1, &out2] {
        let st = bin()
            .args([
                "train",
                "--config",
                cfg.to_str().unwrap(),
                "--seed",
                "5",
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    }
    let a = std::fs::read(out1.join("trainlog.csv")).unwrap();
    let b = std::fs::read(out2.join("trainlog.csv")).unwrap();
    assert_eq!(a, b, "same config and seed must give identical logs");

    // evaluate the checkpoint through the CLI
    let eval_out = dir.path().join("eval");
    let st = bin()
        .args([
            "eval",
            "--config",
            cfg.to_str().unwrap(),
            "--checkpoint",
            out1.join("checkpoint.json").to_str().unwrap(),
            "--episodes",
            "2",
            "--seed",
            "3",
            "--out",
            eval_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(eval_out.join("report.json").exists());
    assert!(String::from_utf8_lossy(&st.stdout).contains("success_rate"));
}

#[test]
fn eval_requires_exactly_one_policy_source() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_pushing");
    let out = bin()
        .args(["eval", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args([
            "eval",
            "--config",
            cfg.to_str().unwrap(),
            "--oracle",
            "--checkpoint",
            "x.json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_eval_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_pushing");
    let out_dir = dir.path().join("eval");
    let st = bin()
        .args([
            "eval",
            "--config",
            cfg.to_str().unwrap(),
            "--oracle",
            "--episodes",
            "2",
            "--seed",
            "1",
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(out_dir.join("report.csv").exists());
    assert!(out_dir.join("records/ep000.json").exists());
}

#[test]
fn replay_exports_polylines_and_rejects_corrupt_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_pushing");
    let eval_out = dir.path().join("eval");
    bin()
        .args([
            "eval",
            "--config",
            cfg.to_str().unwrap(),
            "--oracle",
            "--episodes",
            "1",
            "--seed",
            "1",
            "--out",
            eval_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let record = eval_out.join("records/ep000.json");
    let replay_out = dir.path().join("replay");
    let st = bin()
        .args([
            "replay",
            "--record",
            record.to_str().unwrap(),
            "--out",
            replay_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(st.status.success());
    assert!(replay_out.join("polylines.csv").exists());
    assert!(replay_out.join("polylines.json").exists());

    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, "{ not json").unwrap();
    let st = bin()
        .args(["replay", "--record", corrupt.to_str().unwrap()])
        .env("BIMANIP_OUT", dir.path().join("default-out"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn sweep_validates_its_parameter_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_gathering");
    let st = bin()
        .args([
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--param",
            "bogus",
            "--seeds",
            "1,2",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&st.stderr).contains("expected n or h"));
}

#[test]
fn out_env_var_provides_the_default_root() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path(), "bi_gathering");
    let root = dir.path().join("root");
    let st = bin()
        .args(["train", "--config", cfg.to_str().unwrap(), "--seed", "2"])
        .env("BIMANIP_OUT", root.to_str().unwrap())
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(root.join("train/checkpoint.json").exists());
}
