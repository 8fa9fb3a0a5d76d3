//! One check per acceptance criterion. Each returns a short summary on
//! success and the reason on failure.

use std::hint::black_box;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reqmon::codegen::{emit_harness, EmitOptions, MonitorSpec};
use reqmon::formula::{formalize, Formula, Interval};
use reqmon::fretish::{
    parse_requirement, print_requirement, BoolExpr, CmpOp, FretishError, NumExpr, Scope, Timing,
};
use reqmon::harness::{builtin_scenario, generate_scenario, replay, run_live, write_trace};
use reqmon::monitor::{compile, CompiledMonitor};
use reqmon::semantics::verdict_stream;
use reqmon::templates::{parse_params, Catalog};
use reqmon::trace::{Trace, Value};

use super::*;

pub enum Outcome {
    Pass(String),
    Skip(String),
    Fail(String),
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Outcome::Fail(format!($($msg)+));
        }
    };
}

/// Verdicts computed by hand from the definition of `H (mode -> sep)`:
/// tick t holds iff no tick s <= t has the mode on with both distances
/// at or below their thresholds.
fn separation_by_hand(mode: &[bool], h: &[f64], v: &[f64]) -> Vec<bool> {
    (0..mode.len())
        .map(|t| (0..=t).all(|s| !mode[s] || h[s] > 250.0 || v[s] > 50.0))
        .collect()
}

/// Frozen verdicts of Requirement 1 on the 4-tick trace.
pub const REQ1_VERDICTS: [bool; 4] = [true, true, false, false];

pub fn golden_path() -> Outcome {
    let start = Instant::now();
    let r = match parse_requirement(REQ1, "REQ-1") {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(format!("parse error: {e}")),
    };
    let sep = BoolExpr::or(
        BoolExpr::cmp(CmpOp::Gt, NumExpr::signal("horizontal_intruder_distance"), NumExpr::lit(250.0)),
        BoolExpr::cmp(CmpOp::Gt, NumExpr::signal("vertical_intruder_distance"), NumExpr::lit(50.0)),
    );
    ensure!(r.scope == Scope::InMode("flight_mode".into()), "scope {:?}", r.scope);
    ensure!(r.condition.is_none(), "condition {:?}", r.condition);
    ensure!(r.component == "aircraft", "component {}", r.component);
    ensure!(r.timing == Timing::Always, "timing {:?}", r.timing);
    ensure!(r.response == sep, "response {:?}", r.response);

    let f = formalize(&r).unwrap();
    let shape = Formula::historically(
        Interval::UNTIMED,
        Formula::implies(Formula::signal("flight_mode"), Formula::Atom(sep)),
    );
    ensure!(f == shape, "formula {f:?}");

    let by_hand = separation_by_hand(
        &[false, true, true, true],
        &[0.0, 300.0, 200.0, 300.0],
        &[0.0, 10.0, 10.0, 10.0],
    );
    ensure!(by_hand == REQ1_VERDICTS, "hand evaluation {by_hand:?}");
    let trace = daa_trace();
    let oracle = verdict_stream(&f, &trace).unwrap();
    ensure!(oracle == REQ1_VERDICTS, "oracle {oracle:?}");
    let engine = engine_stream(&f, &trace);
    ensure!(engine == REQ1_VERDICTS, "engine {engine:?}");
    let report = &replay(&[("REQ-1".into(), f)], &trace).unwrap()[0];
    ensure!(report.first_violation_tick == Some(2), "first violation {:?}", report.first_violation_tick);

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Outcome::Pass(format!("verdicts T,T,F,F, first violation at tick 2, {elapsed:.2?}"))
}

/// Walk every trace of length `len` over p and q as a prefix tree,
/// stepping one monitor with snapshots, and compare each leaf's verdict
/// path with the oracle's stream on the corresponding full trace.
fn exhaustive_mismatches(f: &Formula, len: usize, traces: &[Trace]) -> usize {
    let mut m = compile(f).unwrap();
    let slots: Vec<bool> = m.signals().map(|s| s == "p").collect();
    let mut path = vec![false; len];
    let mut mismatches = 0;

    #[allow(clippy::too_many_arguments)]
    fn walk(
        m: &mut CompiledMonitor,
        slots: &[bool],
        t: usize,
        code: u32,
        path: &mut [bool],
        f: &Formula,
        traces: &[Trace],
        mismatches: &mut usize,
    ) {
        let len = path.len();
        if t == len {
            if verdict_stream(f, &traces[code as usize]).unwrap() != path {
                *mismatches += 1;
            }
            return;
        }
        let snapshot = m.state().clone();
        for (p, q) in [(false, false), (true, false), (false, true), (true, true)] {
            let inputs: Vec<Value> = slots.iter().map(|is_p| Value::Bool(if *is_p { p } else { q })).collect();
            path[t] = m.step_ordered(&inputs).unwrap();
            let code = code | (p as u32) << t | (q as u32) << (len + t);
            walk(m, slots, t + 1, code, path, f, traces, mismatches);
            m.restore(&snapshot);
        }
    }

    walk(&mut m, &slots, 0, 0, &mut path, f, traces, &mut mismatches);
    mismatches
}

pub fn differential() -> Outcome {
    let start = Instant::now();
    let by_len: Vec<Vec<Trace>> = (0..=6).map(all_pq_traces).collect();

    let shallow = depth_one_formulas();
    let mut mismatches = 0;
    let mut pairs = 0usize;
    for f in &shallow {
        for len in 1..=6 {
            mismatches += exhaustive_mismatches(f, len, &by_len[len]);
            pairs += by_len[len].len();
        }
    }

    let deep = random_formulas_with_depth(0x5eed, 600, 2, 4);
    for f in &deep {
        mismatches += exhaustive_mismatches(f, 6, &by_len[6]);
        pairs += by_len[6].len();
    }
    let exhaustive_time = start.elapsed();

    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
    let bounds = [Some(0), Some(1), Some(2), Some(3), Some(5), Some(8), None];
    let random_pairs = 1200;
    let mut random_mismatches = 0;
    for _ in 0..random_pairs {
        let depth = rng.gen_range(0..=6);
        let f = random_formula(&mut rng, depth, &bounds);
        let len = rng.gen_range(1..=200);
        let trace = random_pq_trace(&mut rng, len);
        if engine_stream(&f, &trace) != verdict_stream(&f, &trace).unwrap() {
            random_mismatches += 1;
        }
    }
    let elapsed = start.elapsed();

    ensure!(
        mismatches == 0 && random_mismatches == 0,
        "{mismatches} exhaustive and {random_mismatches} random mismatches"
    );
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:.1?}");
    Outcome::Pass(format!(
        "{} depth<=1 formulas on every trace of length 1..=6, {} sampled depth 2-4 formulas on every length-6 trace \
         ({pairs} formula/trace pairs, {exhaustive_time:.1?}); {random_pairs} random pairs up to depth 6 and length 200; \
         0 mismatches in {elapsed:.1?}",
        shallow.len(),
        deep.len()
    ))
}

/// Formulas used for the memory and timing checks.
pub fn corpus() -> Vec<Formula> {
    let mut out = depth_one_formulas();
    out.extend(random_formulas_with_depth(0xc0de, 200, 2, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    let wide = [Some(0), Some(3), Some(10), Some(50), Some(200), None];
    out.extend((0..40).map(|_| random_formula(&mut rng, 6, &wide)));
    out
}

fn random_inputs(rng: &mut impl Rng, m: &CompiledMonitor) -> Vec<Value> {
    m.signals().map(|_| Value::Bool(rng.gen())).collect()
}

/// Best-of-rounds time for one step, taken from many copies of `m`.
fn step_time(m: &CompiledMonitor, inputs: &[Value]) -> Duration {
    const COPIES: u32 = 400;
    let mut best = Duration::MAX;
    for _ in 0..9 {
        let mut copies: Vec<CompiledMonitor> = (0..COPIES).map(|_| m.clone()).collect();
        let start = Instant::now();
        for c in copies.iter_mut() {
            black_box(c.step_ordered(black_box(inputs)).unwrap());
        }
        best = best.min(start.elapsed() / COPIES);
    }
    best
}

pub fn bounded_memory() -> Outcome {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut early = Duration::ZERO;
    let mut late = Duration::ZERO;
    for (i, f) in corpus.iter().enumerate() {
        let mut m = compile(f).unwrap();
        let initial = m.state().size_bytes();
        let mut at_10 = None;
        for tick in 0..10_000u32 {
            if tick == 10 {
                at_10 = Some(m.state().size_bytes());
                if i % 8 == 0 {
                    let inputs = random_inputs(&mut rng, &m);
                    early += step_time(&m, &inputs);
                }
            }
            let inputs = random_inputs(&mut rng, &m);
            m.step_ordered(&inputs).unwrap();
        }
        let at_10k = m.state().size_bytes();
        ensure!(
            at_10 == Some(at_10k) && initial == at_10k,
            "formula #{i}: {initial} bytes initially, {at_10:?} at tick 10, {at_10k} at tick 10000"
        );
        ensure!(m.state().tick() == 10_000, "tick counter {}", m.state().tick());
        if i % 8 == 0 {
            let inputs = random_inputs(&mut rng, &m);
            late += step_time(&m, &inputs);
        }
    }
    let ratio = late.as_secs_f64() / early.as_secs_f64();
    ensure!(ratio <= 5.0, "step-time ratio {ratio:.2} (tick 10: {early:?}, tick 10000: {late:?})");
    Outcome::Pass(format!(
        "{} formulas keep a constant state size; step-time ratio tick 10000 / tick 10 = {ratio:.2}",
        corpus.len()
    ))
}

fn heap_free(source: &str) -> bool {
    ["malloc", "calloc", "realloc", "free"].iter().all(|w| !source.contains(w))
}

pub fn codegen_differential() -> Outcome {
    let Some(cc) = c_compiler() else {
        return Outcome::Skip("no C compiler found".into());
    };
    let dir = tempfile::tempdir().unwrap();

    let mut formulas = depth_one_formulas();
    formulas.extend(random_formulas_with_depth(0xcc, 60, 2, 4));
    let specs: Vec<MonitorSpec> = formulas
        .iter()
        .enumerate()
        .map(|(i, f)| MonitorSpec::new(format!("F{i}"), f.clone()))
        .collect();
    let ids: Vec<String> = specs.iter().map(|s| s.id.clone()).collect();
    let source = emit_harness(&specs, &EmitOptions::default()).unwrap();
    ensure!(heap_free(&source), "heap identifier in emitted source");
    let exe = match compile_c(&cc, &source, dir.path(), "boolean") {
        Ok(e) => e,
        Err(e) => return Outcome::Fail(format!("C compile failed:\n{e}")),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0xc99);
    let mut pairs = 0;
    for round in 0..5 {
        let len = if round == 0 { 6 } else { rng.gen_range(20..120) };
        let trace = random_pq_trace(&mut rng, len);
        let streams: Vec<Vec<bool>> = formulas.iter().map(|f| engine_stream(f, &trace)).collect();
        let (status, stdout, stderr) = run_with_stdin(&exe, &write_trace(&trace));
        ensure!(status == Some(0), "driver exited with {status:?}: {stderr}");
        ensure!(
            stdout == expected_driver_output(&ids, &streams, len),
            "verdicts differ on round {round}"
        );
        pairs += formulas.len();
    }

    // Numeric requirements over generated flights, with and without the
    // parameter table.
    let catalog = Catalog::builtin();
    let params = parse_params("DAA_HDIST = 250\nDAA_VDIST = 50\nMAX_ALT = 400\nGEOFENCE_MARGIN = 9000\n").unwrap();
    let mut numeric: Vec<MonitorSpec> = catalog
        .generate(&params)
        .unwrap()
        .into_iter()
        .map(|inst| MonitorSpec {
            id: inst.requirement.id.clone(),
            formula: formalize(&inst.requirement).unwrap(),
            params: inst.bindings,
        })
        .collect();
    let deadline = parse_requirement(
        "in flight_mode mode upon horizontal_intruder_distance < 1000 the aircraft shall within 3 ticks \
         satisfy vertical_intruder_distance > 50 + 0 * altitude",
        "DL",
    )
    .unwrap();
    numeric.push(MonitorSpec::new("DL", formalize(&deadline).unwrap()));
    for table in [true, false] {
        let options = EmitOptions { param_table: table };
        let source = emit_harness(&numeric, &options).unwrap();
        ensure!(heap_free(&source), "heap identifier in emitted source");
        let exe = match compile_c(&cc, &source, dir.path(), if table { "tuned" } else { "inlined" }) {
            Ok(e) => e,
            Err(e) => return Outcome::Fail(format!("C compile failed:\n{e}")),
        };
        let ids: Vec<String> = numeric.iter().map(|s| s.id.clone()).collect();
        for name in ["converging", "climb", "separating", "mode-off"] {
            let trace = generate_scenario(&builtin_scenario(name).unwrap());
            let streams: Vec<Vec<bool>> = numeric.iter().map(|s| engine_stream(&s.formula, &trace)).collect();
            let (status, stdout, stderr) = run_with_stdin(&exe, &write_trace(&trace));
            ensure!(status == Some(0), "driver exited with {status:?}: {stderr}");
            ensure!(
                stdout == expected_driver_output(&ids, &streams, trace.len()),
                "numeric verdicts differ on {name}"
            );
            pairs += numeric.len();
        }
    }
    Outcome::Pass(format!("{pairs} formula/trace pairs byte-identical using {cc}; no heap identifiers"))
}

pub fn template_pipeline() -> Outcome {
    let catalog = Catalog::builtin();
    let daa = parse_params("DAA_HDIST = 250\nDAA_VDIST = 50\n").unwrap();
    let inst = catalog.instantiate("daa-separation", &daa).unwrap();
    let golden = formalize(&parse_requirement(REQ1, "REQ-1").unwrap()).unwrap();
    let regenerated = formalize(&inst.requirement).unwrap();
    ensure!(regenerated == golden, "regenerated formula {regenerated:?}");

    let ceiling = parse_params("MAX_ALT = 400\n").unwrap();
    let alt = catalog.generate(&ceiling).unwrap();
    ensure!(alt.len() == 1, "expected one generated requirement, got {}", alt.len());
    let f = formalize(&alt[0].requirement).unwrap();
    let trace = generate_scenario(&builtin_scenario("climb").unwrap());
    let oracle_first = verdict_stream(&f, &trace).unwrap().iter().position(|ok| !ok);
    let exceeding = (0..trace.len()).find(|t| {
        trace.value("flight_mode", *t) == Some(Value::Bool(true))
            && trace.value("altitude", *t).and_then(Value::as_num).unwrap() >= 400.0
    });
    let report = &replay(&[(alt[0].requirement.id.clone(), f)], &trace).unwrap()[0];
    ensure!(oracle_first.is_some(), "the oracle saw no violation");
    ensure!(oracle_first == exceeding, "oracle {oracle_first:?}, altitude column {exceeding:?}");
    ensure!(
        report.first_violation_tick == oracle_first.map(|t| t as u64),
        "monitor flagged {:?}, oracle {oracle_first:?}",
        report.first_violation_tick
    );
    Outcome::Pass(format!(
        "daa-separation regenerates the golden formula; altitude-ceiling flags tick {}",
        oracle_first.unwrap()
    ))
}

fn live_streams(reqs: &[(String, Formula)], trace: &Trace) -> Vec<Vec<bool>> {
    let mut streams = vec![Vec::new(); reqs.len()];
    for tick in run_live(reqs, trace.clone()).unwrap() {
        for (s, v) in streams.iter_mut().zip(tick.unwrap().verdicts) {
            s.push(v.ok);
        }
    }
    streams
}

pub fn live_replay() -> Outcome {
    let params = parse_params("DAA_HDIST = 250\nDAA_VDIST = 50\nMAX_ALT = 400\n").unwrap();
    let mut reqs: Vec<(String, Formula)> = Catalog::builtin()
        .generate(&params)
        .unwrap()
        .into_iter()
        .map(|i| (i.requirement.id.clone(), formalize(&i.requirement).unwrap()))
        .collect();
    reqs.insert(0, ("REQ-1".into(), formalize(&parse_requirement(REQ1, "REQ-1").unwrap()).unwrap()));

    let mut summary = Vec::new();
    for name in ["separating", "converging", "mode-off"] {
        let trace = generate_scenario(&builtin_scenario(name).unwrap());
        let live = live_streams(&reqs, &trace);
        let replayed = replay(&reqs, &trace).unwrap();
        for (l, r) in live.iter().zip(&replayed) {
            ensure!(*l == r.verdicts, "{name}: live and replay differ for {}", r.id);
            let oracle = verdict_stream(&reqs.iter().find(|(id, _)| *id == r.id).unwrap().1, &trace).unwrap();
            ensure!(*l == oracle, "{name}: live and oracle differ for {}", r.id);
        }
        let first = replayed[0].first_violation_tick;
        match name {
            "converging" => {
                let k = match first {
                    Some(k) => k as usize,
                    None => return Outcome::Fail("converging scenario never violates".into()),
                };
                ensure!(
                    live[0].iter().enumerate().all(|(t, ok)| *ok == (t < k)),
                    "REQ-1 verdict topic does not flip once at tick {k}"
                );
            }
            _ => ensure!(first.is_none(), "{name}: unexpected violation at {first:?}"),
        }
        summary.push(format!("{name}: {}", first.map_or("clean".into(), |k| format!("violates at {k}"))));
    }

    // With the mode off, no geometry can produce a violation.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ff);
    for _ in 0..25 {
        let mut s = builtin_scenario("mode-off").unwrap();
        for v in s.intruder.position.iter_mut().chain(s.intruder.velocity.iter_mut()) {
            *v = rng.gen_range(-300.0..300.0);
        }
        s.noise = rng.gen_range(0.0..100.0);
        s.seed = rng.gen();
        let trace = generate_scenario(&s);
        let live = live_streams(&reqs, &trace);
        ensure!(live.iter().flatten().all(|ok| *ok), "mode-off scenario produced a violation");
    }
    Outcome::Pass(format!("{}; 25 random mode-off flights clean", summary.join(", ")))
}

const FIELDS: [&str; 6] = [
    "in flight_mode",
    "when x > 1,",
    "the aircraft",
    "shall",
    "always",
    "satisfy y < 2",
];

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn parser_round_trip() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&strategies::requirement(), |req| {
        let text = print_requirement(&req);
        let back = parse_requirement(&text, "GEN").map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        if !back.same_structure(&req) {
            return Err(TestCaseError::fail(format!("{text} changed structure")));
        }
        Ok(())
    });
    if let Err(e) = result {
        return Outcome::Fail(format!("round trip: {e}"));
    }

    let mut rejected = 0;
    for perm in permutations(6) {
        let text = perm.iter().map(|i| FIELDS[*i]).collect::<Vec<_>>().join(" ");
        let canonical = perm == [0, 1, 2, 3, 4, 5];
        match parse_requirement(&text, "P") {
            Ok(_) if canonical => {}
            Err(FretishError::Parse { .. }) if !canonical => rejected += 1,
            other => return Outcome::Fail(format!("`{text}` gave {other:?}")),
        }
    }
    ensure!(rejected == 719, "{rejected} orderings rejected");
    Outcome::Pass("1000 random requirements round-trip; all 719 other field orderings rejected".into())
}
