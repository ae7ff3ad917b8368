use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddrsim"))
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ddrsim-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn quick_config() -> PathBuf {
    write_tmp("quick.cfg", "format=1\npower_up_scale=1000\n")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_reports_and_exits_zero_when_clean() {
    let cfg = quick_config();
    let trace = write_tmp(
        "ok.trace",
        "format=1\nW SINGLE 0x100 0xcafef00d\nR SINGLE 0x100\n",
    );
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("violations:    0"), "{text}");
    assert!(text.contains("\"bytes_transferred\": 16"), "{text}");
}

#[test]
fn run_writes_report_file() {
    let cfg = quick_config();
    let trace = write_tmp("rpt.trace", "format=1\nW SINGLE 0x0 0x1\n");
    let report = write_tmp("out.json", "");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--trace")
        .arg(&trace)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success());
    let json = fs::read_to_string(&report).unwrap();
    assert!(json.contains("\"format\": 1"), "{json}");
}

#[test]
fn bad_trace_exits_two() {
    let cfg = quick_config();
    let trace = write_tmp("bad.trace", "format=1\nX SINGLE 0x0\n");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_key_exits_two() {
    let cfg = write_tmp("bad.cfg", "format=1\nnot_a_key=1\n");
    let trace = write_tmp("empty.trace", "format=1\n");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_key"));
}

#[test]
fn check_mode_clean_run() {
    let cfg = quick_config();
    let out = bin()
        .args(["check", "--config"])
        .arg(&cfg)
        .args(["--random", "50", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("violations:    0"));
}

#[test]
fn inittrace_lists_command_sequence() {
    let cfg = quick_config();
    let out = bin().args(["inittrace", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("format=1\n"), "{text}");
    let cmds: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| {
            l.split_whitespace()
                .find_map(|tok| tok.strip_prefix("cmd="))
                .unwrap()
        })
        .collect();
    assert_eq!(cmds, vec!["PRE", "LMR", "LMR", "PRE", "AR", "AR", "LMR"]);
}

#[test]
fn fsm_trace_prints_cycles() {
    let cfg = quick_config();
    let trace = write_tmp("fsm.trace", "format=1\nR SINGLE 0x0\n");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--trace")
        .arg(&trace)
        .arg("--fsm-trace")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("cycle=0 init="));
}
