//! End-to-end runs of the `reqmon` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const REQS: &str = "# separation\n\
REQ-1: in flight_mode the aircraft shall always satisfy horizontal_intruder_distance > 250 | vertical_intruder_distance > 50\n";

const TRACE: &str = "time,flight_mode,horizontal_intruder_distance,vertical_intruder_distance\n\
0,0,0,0\n1,1,300,10\n2,1,200,10\n3,1,300,10\n";

fn reqmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reqmon")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_reports_the_violation() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = file(&dir, "r.frt", REQS);
    let trace = file(&dir, "t.csv", TRACE);
    let out = reqmon(&["check", "--reqs", &reqs, "--trace", &trace]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("id=REQ-1 first_violation_tick=2 trace_length=4"), "{text}");
    assert!(text.contains("ALERT REQ-1 first violation at tick 2: flight_mode=1"), "{text}");

    let verbose = reqmon(&["check", "--reqs", &reqs, "--trace", &trace, "--verbose"]);
    assert!(stdout(&verbose).contains("VIOLATED"));
}

#[test]
fn check_passes_a_trivial_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = file(&dir, "r.frt", "sys shall satisfy true\n");
    let trace = file(&dir, "t.csv", TRACE);
    let out = reqmon(&["check", "--reqs", &reqs, "--trace", &trace]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "id=REQ-1 first_violation_tick=- trace_length=4\n");
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = file(&dir, "r.frt", REQS);
    let bad = file(&dir, "bad.frt", "the aircraft shall satisfy\n");
    let trace = file(&dir, "t.csv", TRACE);
    let bad_trace = file(&dir, "bad.csv", "time,flight_mode\n0,1\n5,1\n");

    let out = reqmon(&["check", "--reqs", &bad, "--trace", &trace]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.frt:1:"), "{}", stderr(&out));

    let out = reqmon(&["check", "--reqs", &good, "--trace", &bad_trace]);
    assert_eq!(out.status.code(), Some(2));

    let out = reqmon(&["check", "--reqs", "/nonexistent.frt", "--trace", &trace]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: cannot read"));

    let out = reqmon(&["simulate", "--reqs", &good, "--scenario", "loop"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("available: climb, converging, mode-off, separating"));

    let untriggered = file(&dir, "w.frt", "sys shall within 3 ticks satisfy x\n");
    let out = reqmon(&["formalize", "--reqs", &untriggered]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not monitorable"));
}

#[test]
fn parse_and_formalize() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = file(&dir, "r.frt", REQS);
    let out = reqmon(&["parse", "--reqs", &reqs]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("REQ-1\n  scope:     in flight_mode mode\n  condition: none\n"), "{text}");
    assert!(text.contains("timing:    always"));

    let out = reqmon(&["formalize", "--reqs", &reqs]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("REQ-1\tH ("), "{}", stdout(&out));
}

#[test]
fn simulate_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = file(&dir, "r.frt", REQS);
    let csv = dir.path().join("flight.csv");
    let out = reqmon(&["simulate", "--reqs", &reqs, "--scenario", "converging", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("first_violation_tick=18 trace_length=40"));

    // The written trace replays to the same result.
    let out = reqmon(&["check", "--reqs", &reqs, "--trace", csv.to_str().unwrap()]);
    assert!(stdout(&out).contains("first_violation_tick=18"));

    let out = reqmon(&["simulate", "--reqs", &reqs, "--scenario", "mode-off", "--noise", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gen_writes_requirements() {
    let dir = tempfile::tempdir().unwrap();
    let params = file(&dir, "daa.params", "DAA_HDIST = 250\nDAA_VDIST = 50\nSPARE = 1\n");
    let out = reqmon(&["gen", "--params", &params]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(
        "AUTO-daa-separation: in flight_mode the aircraft shall always satisfy \
         horizontal_intruder_distance > 250 | vertical_intruder_distance > 50"
    ));
    assert!(stderr(&out).contains("`SPARE` is not used"));

    // Generated files are valid requirement files.
    let generated = file(&dir, "gen.frt", &text);
    let trace = file(&dir, "t.csv", TRACE);
    let out = reqmon(&["check", "--reqs", &generated, "--trace", &trace]);
    assert!(stdout(&out).contains("id=AUTO-daa-separation first_violation_tick=2"));

    let partial = file(&dir, "p.params", "DAA_HDIST = 250\n");
    assert_eq!(reqmon(&["gen", "--params", &partial]).status.code(), Some(2));
}

fn c_compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|cc| {
        Command::new(cc)
            .arg("--version")
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .is_ok_and(|s| s.success())
    })
}

fn build(cc: &str, src: &Path) -> PathBuf {
    let exe = src.with_extension("bin");
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-pedantic", "-Werror", "-o"])
        .arg(&exe)
        .arg(src)
        .status()
        .unwrap();
    assert!(status.success());
    exe
}

#[test]
fn codegen_pipeline_agrees_with_check() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = file(&dir, "r.frt", REQS);
    let params = file(&dir, "daa.params", "DAA_HDIST = 250\nDAA_VDIST = 50\n");
    let src = dir.path().join("mon.c");
    let out = reqmon(&[
        "codegen", "--reqs", &reqs, "--params", &params, "--harness", "--out", src.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let code = fs::read_to_string(&src).unwrap();
    assert!(code.contains("st->params.DAA_HDIST"));

    let plain = reqmon(&["codegen", "--reqs", &reqs, "--no-param-table"]);
    assert!(!stdout(&plain).contains("params"));
    assert!(!stdout(&plain).contains("int main"));

    let Some(cc) = c_compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let exe = build(cc, &src);
    let mut child = Command::new(exe)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(TRACE.as_bytes()).unwrap();
    let run = child.wait_with_output().unwrap();
    assert_eq!(stdout(&run), "0,REQ-1,1\n1,REQ-1,1\n2,REQ-1,0\n3,REQ-1,0\n");
}
