//! `reqmon`: requirements in, monitors and verdicts out.
//!
//! Exit status is 0 when every requirement holds, 1 when at least one is
//! violated and 2 for usage, file-format and pipeline errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use reqmon::codegen::{emit_harness, emit_with, EmitOptions, MonitorSpec, ParamBinding};
use reqmon::formula::{formalize, print_formula, Formula};
use reqmon::fretish::{parse_requirements_file, print_bool, Requirement, Scope, Timing};
use reqmon::harness::{
    builtin_scenario, collect_reports, format_alerts, format_records, format_table, generate_scenario, read_trace,
    replay, write_trace, ViolationReport, BUILTIN_SCENARIOS,
};
use reqmon::templates::{parse_params, Catalog};
use reqmon::trace::{SignalKind, Trace};

#[derive(Parser)]
#[command(name = "reqmon", version, about = "Compile structured requirements into runtime monitors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the fields of every requirement.
    Parse {
        #[arg(long)]
        reqs: PathBuf,
    },
    /// Print the temporal formula of every requirement.
    Formalize {
        #[arg(long)]
        reqs: PathBuf,
    },
    /// Emit C monitors.
    Codegen {
        #[arg(long)]
        reqs: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parameter file whose values become tunable constants.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Inline every literal instead of emitting a parameter table.
        #[arg(long)]
        no_param_table: bool,
        /// Append a `main` that replays a CSV trace from standard input.
        #[arg(long)]
        harness: bool,
    },
    /// Monitor a recorded trace.
    Check {
        #[arg(long)]
        reqs: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Also print a per-tick verdict table.
        #[arg(long)]
        verbose: bool,
    },
    /// Fly a built-in scenario and monitor it live.
    Simulate {
        #[arg(long)]
        reqs: PathBuf,
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Half-width of uniform noise on the intruder distances, in feet.
        #[arg(long)]
        noise: Option<f64>,
        /// Also write the generated trace as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
    /// Generate requirements from templates and a parameter file.
    Gen {
        #[arg(long)]
        params: PathBuf,
        /// Extra TOML template catalog; its entries override built-ins.
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_requirements(path: &Path) -> Result<Vec<Requirement>> {
    let text = read(path)?;
    parse_requirements_file(&text).map_err(|e| anyhow!("{}:{}: {e}", path.display(), e.pos()))
}

fn load_formulas(path: &Path) -> Result<Vec<(String, Formula)>> {
    load_requirements(path)?
        .iter()
        .map(|r| Ok((r.id.clone(), formalize(r)?)))
        .collect()
}

fn signal_hints(reqs: &[(String, Formula)]) -> Result<BTreeMap<String, SignalKind>> {
    let mut hints = BTreeMap::new();
    for (id, f) in reqs {
        let kinds = f.signal_kinds().map_err(|e| anyhow!("requirement {id}: {e}"))?;
        for (name, kind) in kinds {
            if let Some(prev) = hints.insert(name.clone(), kind) {
                if prev != kind {
                    bail!("signal `{name}` is boolean in one requirement and numeric in another");
                }
            }
        }
    }
    Ok(hints)
}

fn print_reports(reports: &[ViolationReport], trace: &Trace, verbose: bool) -> ExitCode {
    print!("{}", format_records(reports, trace.len()));
    print!("{}", format_alerts(reports));
    if verbose {
        println!();
        print!("{}", format_table(trace, reports));
    }
    if reports.iter().any(ViolationReport::violated) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn describe(r: &Requirement) -> String {
    let scope = match &r.scope {
        Scope::Global => "global".to_string(),
        Scope::InMode(m) => format!("in {m} mode"),
    };
    let condition = r
        .condition
        .as_ref()
        .map_or_else(|| "none".to_string(), |c| format!("{} {}", c.flavor.keyword(), print_bool(&c.expr)));
    let timing = match r.timing {
        Timing::Always => "always".to_string(),
        Timing::Never => "never".to_string(),
        Timing::Within(n) => format!("within {n} ticks"),
    };
    format!(
        "{}\n  scope:     {scope}\n  condition: {condition}\n  component: {}\n  shall\n  timing:    {timing}\n  response:  {}\n",
        r.id,
        r.component,
        print_bool(&r.response)
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Parse { reqs } => {
            for r in load_requirements(&reqs)? {
                print!("{}", describe(&r));
            }
        }
        Command::Formalize { reqs } => {
            for (id, f) in load_formulas(&reqs)? {
                println!("{id}\t{}", print_formula(&f));
            }
        }
        Command::Codegen {
            reqs,
            out,
            params,
            no_param_table,
            harness,
        } => {
            let bindings: Vec<ParamBinding> = match &params {
                Some(p) => parse_params(&read(p)?)
                    .with_context(|| p.display().to_string())?
                    .into_iter()
                    .map(|(key, value)| ParamBinding { key, value })
                    .collect(),
                None => Vec::new(),
            };
            let specs: Vec<MonitorSpec> = load_formulas(&reqs)?
                .into_iter()
                .map(|(id, formula)| MonitorSpec {
                    id,
                    formula,
                    params: bindings.clone(),
                })
                .collect();
            let options = EmitOptions {
                param_table: !no_param_table,
            };
            let code = if harness {
                emit_harness(&specs, &options)?
            } else {
                emit_with(&specs, &options)?
            };
            write_out(out.as_deref(), &code)?;
        }
        Command::Check { reqs, trace, verbose } => {
            let formulas = load_formulas(&reqs)?;
            let hints = signal_hints(&formulas)?;
            let data = read_trace(&read(&trace)?, &hints).with_context(|| trace.display().to_string())?;
            let reports = replay(&formulas, &data)?;
            return Ok(print_reports(&reports, &data, verbose));
        }
        Command::Simulate {
            reqs,
            scenario,
            seed,
            noise,
            out,
            verbose,
        } => {
            let mut s = builtin_scenario(&scenario).ok_or_else(|| {
                anyhow!("unknown scenario `{scenario}` (available: {})", BUILTIN_SCENARIOS.join(", "))
            })?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(noise) = noise {
                if !(noise.is_finite() && noise >= 0.0) {
                    bail!("--noise must be a non-negative number");
                }
                s.noise = noise;
            }
            let formulas = load_formulas(&reqs)?;
            let data = generate_scenario(&s);
            if let Some(p) = &out {
                fs::write(p, write_trace(&data)).with_context(|| format!("cannot write {}", p.display()))?;
            }
            let reports = collect_reports(&formulas, &data)?;
            return Ok(print_reports(&reports, &data, verbose));
        }
        Command::Gen { params, templates, out } => {
            let values = parse_params(&read(&params)?).with_context(|| params.display().to_string())?;
            let mut catalog = Catalog::builtin();
            if let Some(t) = &templates {
                catalog.extend(Catalog::from_toml(&read(t)?).with_context(|| t.display().to_string())?);
            }
            for key in catalog.unused_keys(&values) {
                eprintln!("warning: parameter `{key}` is not used by any template");
            }
            let mut text = format!("# generated from {}\n", params.display());
            for inst in catalog.generate(&values)? {
                text.push_str(&format!("{}: {}\n", inst.requirement.id, inst.text));
            }
            write_out(out.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
