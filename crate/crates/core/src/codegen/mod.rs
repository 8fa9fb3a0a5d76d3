//! Standalone C99 monitors.
//!
//! [`emit`] produces one translation unit holding every requested
//! monitor. The generated code uses only fixed-size storage: each
//! temporal operator becomes a few fields of `monitor_state_t`, sized at
//! generation time exactly like the Rust engine's state.
//!
//! ```c
//! void monitor_init(monitor_state_t *st);
//! void monitor_step(monitor_state_t *st, const monitor_input_t *in,
//!                   unsigned char *verdicts);
//! ```
//!
//! [`emit_harness`] appends a `main` that replays a CSV trace from stdin
//! and prints `tick,id,verdict` lines.

mod driver;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::formula::{Formula, Interval};
use crate::fretish::{BoolExpr, NumExpr};
use crate::monitor::{compile, MonitorError};
use crate::trace::SignalKind;

pub use driver::emit_harness;

const C_KEYWORDS: &[&str] = &[
    "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else", "enum",
    "extern", "float", "for", "goto", "if", "inline", "int", "long", "register", "restrict", "return",
    "short", "signed", "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void",
    "volatile", "while", "_Bool", "_Complex", "_Imaginary",
];

/// Names the generated functions use for their own parameters.
const PARAMETER_NAMES: &[&str] = &["st", "in", "verdicts", "params", "tick"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodegenError {
    #[error("requirement {id}: {source}")]
    Monitor {
        id: String,
        #[source]
        source: MonitorError,
    },
    #[error("signal `{name}` is boolean in one requirement and numeric in another")]
    KindConflict { name: String },
    #[error("`{0}` cannot be used as a C identifier in generated code")]
    ReservedIdentifier(String),
    #[error("parameter `{key}` is bound to both {first} and {second}")]
    ParamConflict { key: String, first: f64, second: f64 },
    #[error("duplicate requirement id `{0}`")]
    DuplicateId(String),
}

/// A named numeric constant that can be tuned after generation.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBinding {
    pub key: String,
    pub value: f64,
}

/// One requirement to be emitted.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSpec {
    pub id: String,
    pub formula: Formula,
    /// Literals equal to a binding's value are read from
    /// `st->params.KEY` instead of being inlined.
    pub params: Vec<ParamBinding>,
}

impl MonitorSpec {
    pub fn new(id: impl Into<String>, formula: Formula) -> Self {
        MonitorSpec {
            id: id.into(),
            formula,
            params: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitOptions {
    /// Emit a `params` table for bound literals. When off, every literal
    /// is inlined.
    pub param_table: bool,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions { param_table: true }
    }
}

/// Emit with default options.
pub fn emit(specs: &[MonitorSpec]) -> Result<String, CodegenError> {
    emit_with(specs, &EmitOptions::default())
}

pub fn emit_with(specs: &[MonitorSpec], options: &EmitOptions) -> Result<String, CodegenError> {
    let unit = Unit::new(specs, options)?;
    Ok(unit.render())
}

fn check_identifier(name: &str) -> Result<(), CodegenError> {
    let reserved = C_KEYWORDS.contains(&name)
        || PARAMETER_NAMES.contains(&name)
        || name.starts_with("monitor_")
        || name.starts_with("__")
        || (name.starts_with('_') && name.chars().nth(1).is_some_and(|c| c.is_ascii_uppercase()));
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if reserved || !valid {
        return Err(CodegenError::ReservedIdentifier(name.to_string()));
    }
    Ok(())
}

/// Shared analysis of a set of specs, used by both the monitor unit and
/// the CSV driver.
pub(crate) struct Unit<'a> {
    pub(crate) specs: &'a [MonitorSpec],
    pub(crate) signals: BTreeMap<String, SignalKind>,
    pub(crate) params: BTreeMap<String, f64>,
    /// Prefix of every generated local and state field; no signal starts
    /// with it.
    pub(crate) prefix: String,
    use_params: bool,
}

impl<'a> Unit<'a> {
    pub(crate) fn new(specs: &'a [MonitorSpec], options: &EmitOptions) -> Result<Self, CodegenError> {
        let mut signals = BTreeMap::new();
        let mut params: BTreeMap<String, f64> = BTreeMap::new();
        let mut ids = std::collections::BTreeSet::new();
        for spec in specs {
            if !ids.insert(spec.id.as_str()) {
                return Err(CodegenError::DuplicateId(spec.id.clone()));
            }
            compile(&spec.formula).map_err(|source| CodegenError::Monitor {
                id: spec.id.clone(),
                source,
            })?;
            let kinds = spec.formula.signal_kinds().map_err(|c| CodegenError::Monitor {
                id: spec.id.clone(),
                source: MonitorError::KindConflict(c.signal),
            })?;
            for (name, kind) in kinds {
                check_identifier(&name)?;
                match signals.insert(name.clone(), kind) {
                    Some(prev) if prev != kind => return Err(CodegenError::KindConflict { name }),
                    _ => {}
                }
            }
            if options.param_table {
                for b in &spec.params {
                    check_identifier(&b.key)?;
                    match params.insert(b.key.clone(), b.value) {
                        Some(prev) if prev != b.value => {
                            return Err(CodegenError::ParamConflict {
                                key: b.key.clone(),
                                first: prev,
                                second: b.value,
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
        let mut prefix = String::from("rm_");
        while signals.keys().any(|s| s.starts_with(&prefix)) {
            prefix.insert(prefix.len() - 1, 'm');
        }
        Ok(Unit {
            specs,
            signals,
            use_params: options.param_table && !params.is_empty(),
            params,
            prefix,
        })
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("/* Generated runtime monitors. Verdict slots:\n");
        for (i, spec) in self.specs.iter().enumerate() {
            let _ = writeln!(out, " *   [{i}] {}", comment_safe(&spec.id));
        }
        out.push_str(" */\n\n");
        self.render_declarations(&mut out);
        let bodies: Vec<Body> = self.specs.iter().enumerate().map(|(i, s)| self.body(i, s)).collect();
        self.render_state(&mut out, &bodies);
        self.render_init(&mut out, &bodies);
        self.render_step(&mut out, &bodies);
        out
    }

    fn render_declarations(&self, out: &mut String) {
        let _ = writeln!(out, "#define MONITOR_COUNT {}", self.specs.len());
        let _ = writeln!(out, "#define MONITOR_SIGNAL_COUNT {}\n", self.signals.len());
        out.push_str("typedef struct {\n");
        if self.signals.is_empty() {
            let _ = writeln!(out, "    unsigned char {}unused;", self.prefix);
        }
        for (name, kind) in &self.signals {
            let _ = writeln!(out, "    {} {name};", c_type(*kind));
        }
        out.push_str("} monitor_input_t;\n\n");
    }

    fn render_state(&self, out: &mut String, bodies: &[Body]) {
        out.push_str("typedef struct {\n    unsigned long long tick;\n");
        if self.use_params {
            out.push_str("    struct {\n");
            for key in self.params.keys() {
                let _ = writeln!(out, "        double {key};");
            }
            out.push_str("    } params;\n");
        }
        for b in bodies {
            for f in &b.fields {
                out.push_str("    ");
                out.push_str(f);
                out.push('\n');
            }
        }
        out.push_str("} monitor_state_t;\n\n");
    }

    fn render_init(&self, out: &mut String, bodies: &[Body]) {
        out.push_str("void monitor_init(monitor_state_t *st)\n{\n");
        if bodies.iter().any(|b| b.init.iter().any(|l| l.contains("for ("))) {
            let _ = writeln!(out, "    unsigned int {}i;", self.prefix);
        }
        out.push_str("    st->tick = 0;\n");
        if self.use_params {
            for (key, value) in &self.params {
                let _ = writeln!(out, "    st->params.{key} = {};", c_number(*value));
            }
        }
        for b in bodies {
            for line in &b.init {
                let _ = writeln!(out, "    {line}");
            }
        }
        out.push_str("}\n\n");
    }

    fn render_step(&self, out: &mut String, bodies: &[Body]) {
        out.push_str(
            "void monitor_step(monitor_state_t *st, const monitor_input_t *in, unsigned char *verdicts)\n{\n",
        );
        for (name, kind) in &self.signals {
            match kind {
                SignalKind::Bool => {
                    let _ = writeln!(out, "    const unsigned char {name} = in->{name} != 0;");
                }
                SignalKind::Num => {
                    let _ = writeln!(out, "    const double {name} = in->{name};");
                }
            }
        }
        if self.signals.is_empty() {
            out.push_str("    (void)in;\n");
        }
        for (i, b) in bodies.iter().enumerate() {
            let _ = writeln!(out, "    /* {} */", comment_safe(&self.specs[i].id));
            for line in &b.step {
                let _ = writeln!(out, "    {line}");
            }
            let _ = writeln!(out, "    verdicts[{i}] = {};", b.verdict);
        }
        out.push_str("    st->tick++;\n}\n");
    }

    fn body(&self, index: usize, spec: &MonitorSpec) -> Body {
        let mut b = BodyBuilder {
            unit: self,
            params: if self.use_params { &spec.params } else { &[] },
            tag: format!("{}r{index}_", self.prefix),
            next: 0,
            body: Body::default(),
        };
        let verdict = b.formula(&spec.formula);
        let mut body = b.body;
        body.verdict = verdict;
        body
    }
}

#[derive(Default)]
struct Body {
    fields: Vec<String>,
    init: Vec<String>,
    step: Vec<String>,
    verdict: String,
}

struct BodyBuilder<'u, 'p> {
    unit: &'u Unit<'u>,
    params: &'p [ParamBinding],
    tag: String,
    next: usize,
    body: Body,
}

impl BodyBuilder<'_, '_> {
    /// Emit statements for the temporal operators inside `f` and return a
    /// C expression for its value at the current tick.
    fn formula(&mut self, f: &Formula) -> String {
        match f {
            Formula::Atom(e) => self.bool_expr(e),
            Formula::Not(g) => format!("!({})", self.formula(g)),
            Formula::And(l, r) => {
                let (l, r) = (self.formula(l), self.formula(r));
                format!("({l}) && ({r})")
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.formula(l), self.formula(r));
                format!("({l}) || ({r})")
            }
            Formula::Implies(l, r) => {
                let (l, r) = (self.formula(l), self.formula(r));
                format!("({l}) ? ({r}) : 1")
            }
            Formula::Yesterday(g) | Formula::WeakYesterday(g) => {
                let child = self.formula(g);
                let init = matches!(f, Formula::WeakYesterday(_));
                let (s, v) = self.names();
                self.field(format!("unsigned char {s};"));
                self.init(format!("st->{s} = {};", init as u8));
                self.step(format!("const unsigned char {v} = st->{s};"));
                self.step(format!("st->{s} = {child};"));
                v
            }
            Formula::Once(i, g) => {
                let child = self.formula(g);
                self.once_like(*i, child, false)
            }
            Formula::Historically(i, g) => {
                let child = self.formula(g);
                self.once_like(*i, child, true)
            }
            Formula::Since(i, p, q) => {
                let (p, q) = (self.formula(p), self.formula(q));
                self.since(*i, p, q)
            }
        }
    }

    fn names(&mut self) -> (String, String) {
        let n = self.next;
        self.next += 1;
        (format!("{}s{n}", self.tag), format!("{}v{n}", self.tag))
    }

    fn field(&mut self, line: String) {
        self.body.fields.push(line);
    }

    fn init(&mut self, line: String) {
        self.body.init.push(line);
    }

    fn step(&mut self, line: String) {
        self.body.step.push(line);
    }

    fn once_like(&mut self, i: Interval, child: String, historically: bool) -> String {
        let (s, v) = self.names();
        let p = &self.unit.prefix;
        let lo = i.lo();
        let hit = if historically {
            format!("!({child})")
        } else {
            child.clone()
        };
        match i.hi() {
            None if lo == 0 => {
                let op = if historically { "&&" } else { "||" };
                self.field(format!("unsigned char {s};"));
                self.init(format!("st->{s} = {};", historically as u8));
                self.step(format!("st->{s} = st->{s} {op} ({child});"));
                self.step(format!("const unsigned char {v} = st->{s};"));
            }
            None => {
                self.field(format!("unsigned char {s}_seen;"));
                self.field(format!("unsigned long {s}_age;"));
                self.init(format!("st->{s}_seen = 0;"));
                self.init(format!("st->{s}_age = 0;"));
                self.step(format!("if (st->{s}_seen) {{"));
                self.step(format!("    if (st->{s}_age < {lo}UL) st->{s}_age++;"));
                self.step(format!("}} else if ({hit}) {{"));
                self.step(format!("    st->{s}_seen = 1;"));
                self.step(format!("    st->{s}_age = 0;"));
                self.step("}".to_string());
                let neg = if historically { "!" } else { "" };
                self.step(format!(
                    "const unsigned char {v} = {neg}(st->{s}_seen && st->{s}_age >= {lo}UL);"
                ));
            }
            Some(hi) => {
                let n = hi as u64 + 1;
                self.field(format!("unsigned char {s}_buf[{n}];"));
                self.field(format!("unsigned long {s}_cur;"));
                self.field(format!("unsigned long {s}_cnt;"));
                self.init(format!("for ({p}i = 0; {p}i < {n}UL; {p}i++) st->{s}_buf[{p}i] = 0;"));
                self.init(format!("st->{s}_cur = 0;"));
                self.init(format!("st->{s}_cnt = 0;"));
                let entering = if lo == 0 {
                    format!("{p}h")
                } else {
                    format!("st->{s}_buf[({p}c + {}UL) % {n}UL]", n - lo as u64)
                };
                self.step("{".to_string());
                self.step(format!("    const unsigned char {p}h = {hit};"));
                self.step(format!("    const unsigned long {p}c = st->{s}_cur;"));
                self.step(format!("    const unsigned char {p}e = {entering};"));
                self.step(format!("    st->{s}_cnt = st->{s}_cnt - st->{s}_buf[{p}c] + {p}e;"));
                self.step(format!("    st->{s}_buf[{p}c] = {p}h;"));
                self.step(format!("    st->{s}_cur = ({p}c + 1UL) % {n}UL;"));
                self.step("}".to_string());
                let test = if historically { "==" } else { ">" };
                self.step(format!("const unsigned char {v} = st->{s}_cnt {test} 0UL;"));
            }
        }
        v
    }

    fn since(&mut self, i: Interval, lhs: String, rhs: String) -> String {
        let (s, v) = self.names();
        let p = &self.unit.prefix;
        let lo = i.lo();
        match i.hi() {
            None if lo == 0 => {
                self.field(format!("unsigned char {s};"));
                self.init(format!("st->{s} = 0;"));
                self.step(format!("st->{s} = ({rhs}) || (({lhs}) && st->{s});"));
                self.step(format!("const unsigned char {v} = st->{s};"));
            }
            None => {
                self.field(format!("unsigned char {s}_valid;"));
                self.field(format!("unsigned long {s}_age;"));
                self.init(format!("st->{s}_valid = 0;"));
                self.init(format!("st->{s}_age = 0;"));
                self.step("{".to_string());
                self.step(format!("    const unsigned char {p}p = {lhs};"));
                self.step(format!("    const unsigned char {p}q = {rhs};"));
                self.step(format!("    if (!{p}p) {{"));
                self.step(format!("        st->{s}_valid = {p}q;"));
                self.step(format!("        st->{s}_age = 0;"));
                self.step(format!("    }} else if (st->{s}_valid) {{"));
                self.step(format!("        if (st->{s}_age < {lo}UL) st->{s}_age++;"));
                self.step(format!("    }} else if ({p}q) {{"));
                self.step(format!("        st->{s}_valid = 1;"));
                self.step(format!("        st->{s}_age = 0;"));
                self.step("    }".to_string());
                self.step("}".to_string());
                self.step(format!("const unsigned char {v} = st->{s}_valid && st->{s}_age >= {lo}UL;"));
            }
            Some(hi) => {
                let n = hi as u64 + 1;
                let back = (2 * n - 1 - lo as u64) % n;
                self.field(format!("unsigned char {s}_buf[{n}];"));
                self.field(format!("unsigned long {s}_cur;"));
                self.field(format!("unsigned long {s}_run;"));
                self.field(format!("unsigned long {s}_recent;"));
                self.init(format!("for ({p}i = 0; {p}i < {n}UL; {p}i++) st->{s}_buf[{p}i] = 0;"));
                self.init(format!("st->{s}_cur = 0;"));
                self.init(format!("st->{s}_run = 0;"));
                self.init(format!("st->{s}_recent = {n}UL;"));
                self.step("{".to_string());
                self.step(format!("    const unsigned char {p}p = {lhs};"));
                self.step(format!("    const unsigned char {p}q = {rhs};"));
                self.step(format!("    st->{s}_buf[st->{s}_cur] = {p}q;"));
                self.step(format!("    st->{s}_cur = (st->{s}_cur + 1UL) % {n}UL;"));
                self.step(format!("    if (st->{s}_buf[(st->{s}_cur + {back}UL) % {n}UL]) {{"));
                self.step(format!("        st->{s}_recent = {lo}UL;"));
                self.step(format!("    }} else if (st->{s}_recent < {n}UL) {{"));
                self.step(format!("        st->{s}_recent++;"));
                self.step("    }".to_string());
                self.step(format!("    if (!{p}p) {{"));
                self.step(format!("        st->{s}_run = 0;"));
                self.step(format!("    }} else if (st->{s}_run < {n}UL) {{"));
                self.step(format!("        st->{s}_run++;"));
                self.step("    }".to_string());
                self.step("}".to_string());
                self.step(format!(
                    "const unsigned char {v} = st->{s}_recent <= {hi}UL && st->{s}_recent <= st->{s}_run;"
                ));
            }
        }
        v
    }

    fn bool_expr(&self, e: &BoolExpr) -> String {
        match e {
            BoolExpr::Lit(b) => (if *b { "1" } else { "0" }).to_string(),
            BoolExpr::Signal(s) => s.clone(),
            BoolExpr::Cmp(op, l, r) => {
                format!("{} {} {}", self.num_operand(l), op.symbol(), self.num_operand(r))
            }
            BoolExpr::Not(x) => format!("!({})", self.bool_expr(x)),
            BoolExpr::And(l, r) => format!("({}) && ({})", self.bool_expr(l), self.bool_expr(r)),
            BoolExpr::Or(l, r) => format!("({}) || ({})", self.bool_expr(l), self.bool_expr(r)),
        }
    }

    fn num_operand(&self, e: &NumExpr) -> String {
        let text = self.num_expr(e);
        match e {
            NumExpr::Lit(_) | NumExpr::Signal(_) => text,
            _ if self.param_for(e).is_some() => text,
            _ => format!("({text})"),
        }
    }

    /// The parameter key a literal (or negated literal) refers to.
    fn param_for(&self, e: &NumExpr) -> Option<String> {
        let key = |v: f64| self.params.iter().find(|b| b.value == v).map(|b| b.key.clone());
        match e {
            NumExpr::Lit(v) => key(*v).map(|k| format!("st->params.{k}")),
            NumExpr::Neg(inner) => match inner.as_ref() {
                NumExpr::Lit(v) if !self.params.iter().any(|b| b.value == *v) => {
                    key(-v).map(|k| format!("st->params.{k}"))
                }
                _ => None,
            },
            _ => None,
        }
    }

    fn num_expr(&self, e: &NumExpr) -> String {
        if let Some(p) = self.param_for(e) {
            return p;
        }
        match e {
            NumExpr::Lit(v) => c_number(*v),
            NumExpr::Signal(s) => s.clone(),
            NumExpr::Neg(x) => format!("-{}", self.num_operand(x)),
            NumExpr::Add(l, r) => format!("{} + {}", self.num_operand(l), self.num_operand(r)),
            NumExpr::Sub(l, r) => format!("{} - {}", self.num_operand(l), self.num_operand(r)),
            NumExpr::Mul(l, r) => format!("{} * {}", self.num_operand(l), self.num_operand(r)),
        }
    }
}

fn c_type(kind: SignalKind) -> &'static str {
    match kind {
        SignalKind::Bool => "unsigned char",
        SignalKind::Num => "double",
    }
}

/// A finite double as a C literal that reads back to the same value.
pub(crate) fn c_number(v: f64) -> String {
    let text = format!("{v:?}");
    if text.starts_with('-') {
        format!("({text})")
    } else {
        text
    }
}

pub(crate) fn comment_safe(text: &str) -> String {
    text.replace("*/", "* /").replace('\n', " ")
}
