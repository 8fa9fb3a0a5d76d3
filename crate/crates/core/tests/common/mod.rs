//! Helpers shared by the integration tests: formula and trace corpora,
//! an engine runner and C toolchain plumbing.

#![allow(dead_code)]

pub mod criteria;
pub mod strategies;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use rand::{Rng, SeedableRng};
use reqmon::formula::{Formula, Interval};
use reqmon::monitor::compile;
use reqmon::trace::{Column, Trace};

pub const REQ1: &str = "in flight_mode the aircraft shall always satisfy \
                        horizontal_intruder_distance > 250 | vertical_intruder_distance > 50";

/// The 4-tick encounter: flight_mode F,T,T,T; h 0,300,200,300; v 0,10,10,10.
pub fn daa_trace() -> Trace {
    Trace::new(4)
        .with_column("flight_mode", Column::Bool(vec![false, true, true, true]))
        .unwrap()
        .with_column("horizontal_intruder_distance", Column::Num(vec![0.0, 300.0, 200.0, 300.0]))
        .unwrap()
        .with_column("vertical_intruder_distance", Column::Num(vec![0.0, 10.0, 10.0, 10.0]))
        .unwrap()
}

/// Every interval with endpoints drawn from {0, 1, 2, inf}.
pub fn small_intervals() -> Vec<Interval> {
    let ends = [Some(0), Some(1), Some(2), None];
    let mut out = Vec::new();
    for lo in [0u32, 1, 2] {
        for hi in ends {
            if let Ok(i) = Interval::new(lo, hi) {
                out.push(i);
            }
        }
    }
    out
}

fn unary(i: &[Interval], g: &Formula) -> Vec<Formula> {
    let mut out = vec![
        Formula::not(g.clone()),
        Formula::yesterday(g.clone()),
        Formula::weak_yesterday(g.clone()),
    ];
    for iv in i {
        out.push(Formula::once(*iv, g.clone()));
        out.push(Formula::historically(*iv, g.clone()));
    }
    out
}

fn binary(i: &[Interval], l: &Formula, r: &Formula) -> Vec<Formula> {
    let mut out = vec![
        Formula::and(l.clone(), r.clone()),
        Formula::or(l.clone(), r.clone()),
        Formula::implies(l.clone(), r.clone()),
    ];
    for iv in i {
        out.push(Formula::since(*iv, l.clone(), r.clone()));
    }
    out
}

/// All formulas of depth at most one over signals `p` and `q`.
pub fn depth_one_formulas() -> Vec<Formula> {
    let i = small_intervals();
    let atoms = [Formula::signal("p"), Formula::signal("q")];
    let mut out: Vec<Formula> = atoms.to_vec();
    for a in &atoms {
        out.extend(unary(&i, a));
    }
    for l in &atoms {
        for r in &atoms {
            out.extend(binary(&i, l, r));
        }
    }
    out
}

fn random_interval<R: Rng>(rng: &mut R, bounds: &[Option<u32>]) -> Interval {
    loop {
        let lo = bounds[rng.gen_range(0..bounds.len())];
        let hi = bounds[rng.gen_range(0..bounds.len())];
        if let Some(Ok(i)) = lo.map(|lo| Interval::new(lo, hi)) {
            return i;
        }
    }
}

/// A random formula of depth at most `depth` over `p` and `q` with
/// interval endpoints from `bounds` (`None` = unbounded).
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, bounds: &[Option<u32>]) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 6) {
        return match rng.gen_range(0..20) {
            0 => Formula::tt(),
            1 => Formula::ff(),
            k if k % 2 == 0 => Formula::signal("p"),
            _ => Formula::signal("q"),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Formula::not(random_formula(rng, d, bounds)),
        1 => Formula::yesterday(random_formula(rng, d, bounds)),
        2 => Formula::weak_yesterday(random_formula(rng, d, bounds)),
        3 => {
            let i = random_interval(rng, bounds);
            Formula::once(i, random_formula(rng, d, bounds))
        }
        4 => {
            let i = random_interval(rng, bounds);
            Formula::historically(i, random_formula(rng, d, bounds))
        }
        5 => Formula::and(random_formula(rng, d, bounds), random_formula(rng, d, bounds)),
        6 => Formula::or(random_formula(rng, d, bounds), random_formula(rng, d, bounds)),
        7 => Formula::implies(random_formula(rng, d, bounds), random_formula(rng, d, bounds)),
        _ => {
            let i = random_interval(rng, bounds);
            Formula::since(i, random_formula(rng, d, bounds), random_formula(rng, d, bounds))
        }
    }
}

/// Depth-limited formulas whose depth is exactly in `lo..=hi`.
pub fn random_formulas_with_depth(seed: u64, count: usize, lo: usize, hi: usize) -> Vec<Formula> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bounds = [Some(0), Some(1), Some(2), None];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let target = rng.gen_range(lo..=hi);
        let f = random_formula(&mut rng, target, &bounds);
        if (lo..=hi).contains(&f.depth()) {
            out.push(f);
        }
    }
    out
}

pub fn pq_trace(p: &[bool], q: &[bool]) -> Trace {
    Trace::new(p.len())
        .with_column("p", Column::Bool(p.to_vec()))
        .unwrap()
        .with_column("q", Column::Bool(q.to_vec()))
        .unwrap()
}

/// All `4^len` traces of length `len` over `p` and `q`.
pub fn all_pq_traces(len: usize) -> Vec<Trace> {
    (0..1u32 << (2 * len))
        .map(|code| {
            let bit = |k: usize| code >> k & 1 == 1;
            let p: Vec<bool> = (0..len).map(bit).collect();
            let q: Vec<bool> = (0..len).map(|t| bit(len + t)).collect();
            pq_trace(&p, &q)
        })
        .collect()
}

pub fn random_pq_trace(rng: &mut impl Rng, len: usize) -> Trace {
    // Biased columns give long runs, which the Since operators need.
    let bias_p = rng.gen_range(0.2..0.95);
    let bias_q = rng.gen_range(0.05..0.8);
    let p: Vec<bool> = (0..len).map(|_| rng.gen_bool(bias_p)).collect();
    let q: Vec<bool> = (0..len).map(|_| rng.gen_bool(bias_q)).collect();
    pq_trace(&p, &q)
}

/// Verdicts of a freshly compiled monitor over the whole trace.
pub fn engine_stream(f: &Formula, trace: &Trace) -> Vec<bool> {
    let mut m = compile(f).expect("formula compiles");
    (0..trace.len()).map(|t| m.step(&trace.row(t)).expect("step")).collect()
}

/// A working C compiler, if the environment has one.
pub fn c_compiler() -> Option<String> {
    let mut candidates: Vec<String> = std::env::var("CC").into_iter().collect();
    candidates.extend(["cc", "gcc", "clang"].map(String::from));
    candidates.into_iter().find(|cc| {
        Command::new(cc)
            .arg("--version")
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .is_ok_and(|s| s.success())
    })
}

/// Compile a C99 program, treating warnings as errors.
pub fn compile_c(cc: &str, source: &str, dir: &Path, name: &str) -> Result<PathBuf, String> {
    let src = dir.join(format!("{name}.c"));
    let exe = dir.join(name);
    std::fs::write(&src, source).map_err(|e| e.to_string())?;
    let out = Command::new(cc)
        .args(["-std=c99", "-O1", "-Wall", "-Wextra", "-pedantic", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(exe)
}

/// Run a program with `input` on stdin; returns (status, stdout, stderr).
pub fn run_with_stdin(exe: &Path, input: &str) -> (Option<i32>, String, String) {
    let mut child = Command::new(exe)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.take().unwrap().write_all(input.as_bytes()).expect("write stdin");
    let out = child.wait_with_output().expect("wait");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// The output the generated CSV driver should print for these streams.
pub fn expected_driver_output(ids: &[String], streams: &[Vec<bool>], len: usize) -> String {
    let mut out = String::new();
    for t in 0..len {
        for (id, s) in ids.iter().zip(streams) {
            out.push_str(&format!("{t},{id},{}\n", s[t] as u8));
        }
    }
    out
}
