use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ace")).args(args).output().expect("spawn ace")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, backend: &str, n_v: u32) -> String {
    let path = dir.join("election.toml");
    let body = format!("[election]\nn_v = {n_v}\nn_t = 3\nn_choices = 3\nbackend = \"{backend}\"\nseed = 11\n");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_then_verify_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "production", 5);
    let out = dir.path().join("out");
    let o = ace(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("accept winner="));
    let metrics = fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(metrics.starts_with("role,index,messages,bytes"));

    let v = ace(&["verify", out.join("transcript.ace").to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), stdout(&v).lines().last());
}

#[test]
fn seed_flag_changes_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tiny_test", 4);
    let run = |seed: &str, out: &str| {
        let out = dir.path().join(out);
        let o = ace(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", seed]);
        assert_eq!(o.status.code(), Some(0));
        fs::read(out.join("transcript.ace")).unwrap()
    };
    let a = run("1", "a");
    assert_eq!(a, run("1", "b"));
    assert_ne!(a, run("2", "c"));
}

#[test]
fn tampered_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "production", 4);
    let out = dir.path().join("chain");
    let o = ace(&["attack", "--scenario", "break_hash_chain", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let file = out.join("transcript.ace");
    let v = ace(&["verify", file.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("blame=board"));

    let text = fs::read_to_string(&file).unwrap();
    let truncated = dir.path().join("truncated.ace");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(ace(&["verify", truncated.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ace(&["verify", dir.path().join("missing.ace").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn attack_policies_report_blame() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "production", 4);
    for (scenario, code, needle) in [
        ("always_swap_commitment", 1, "blame=tallier 1"),
        ("wrong_winner", 1, "blame=designated"),
        ("invalid_vote_garbage_proof", 0, "accept"),
        ("flip_winner", 1, "blame=designated"),
    ] {
        let out = dir.path().join(scenario);
        let o = ace(&["attack", "--scenario", scenario, "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{scenario}: {}", stdout(&o));
        assert!(stdout(&o).contains(needle), "{scenario}: {}", stdout(&o));
    }
    let o = ace(&["attack", "--scenario", "nope", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tiny_test", 20);
    let o = ace(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("group order"));

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[election]\nn_v = \"many\"\n").unwrap();
    let o = ace(&["run", "--config", bad.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_tables() {
    let o = ace(&["stats", "audit-soundness", "--k", "2", "--trials", "400", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("k,trials,cheat_p,undetected,detected,rate,expected,sigma"));
    assert!(lines.next().unwrap().starts_with("2,400,0.5,"));

    let o = ace(&["stats", "receipt-forgery", "--trials", "20"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("20,20,1.000000"));

    let o = ace(&["stats", "complexity", "--k", "2", "--n-v", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);

    assert_eq!(ace(&["stats", "bogus"]).status.code(), Some(2));
    assert_eq!(ace(&["stats", "audit-soundness", "--cheat-p", "1.5"]).status.code(), Some(2));
}
