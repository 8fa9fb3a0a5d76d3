//! A `main` that feeds CSV rows from stdin through the monitors.
//!
//! The first line is a header; columns are matched to signals by name and
//! unknown columns are ignored. Every later line is one tick. Output is
//! one `tick,id,verdict` line per requirement per tick. A malformed row
//! ends the program with status 2.

use std::fmt::Write;

use super::{c_type, comment_safe, CodegenError, EmitOptions, MonitorSpec, Unit};
use crate::trace::SignalKind;

/// Longest accepted input line, including the newline.
pub const MAX_LINE: usize = 65_536;
/// Most columns accepted per row.
pub const MAX_COLS: usize = 256;

/// The monitor unit from [`super::emit_with`] followed by a CSV driver.
pub fn emit_harness(specs: &[MonitorSpec], options: &EmitOptions) -> Result<String, CodegenError> {
    let unit = Unit::new(specs, options)?;
    let mut out = String::from("#include <stdio.h>\n#include <stdlib.h>\n#include <string.h>\n\n");
    out.push_str(&unit.render());
    out.push('\n');
    render_driver(&unit, &mut out);
    Ok(out)
}

fn c_string(text: &str) -> String {
    let mut s = String::from("\"");
    for c in text.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            c if c.is_ascii_graphic() || c == ' ' => s.push(c),
            c => {
                let mut buf = [0u8; 4];
                for b in c.encode_utf8(&mut buf).bytes() {
                    let _ = write!(s, "\\{b:03o}");
                }
            }
        }
    }
    s.push('"');
    s
}

fn render_driver(unit: &Unit, out: &mut String) {
    let _ = writeln!(out, "#define DRIVER_MAX_LINE {MAX_LINE}");
    let _ = writeln!(out, "#define DRIVER_MAX_COLS {MAX_COLS}\n");

    out.push_str("static const char *const driver_ids[MONITOR_COUNT + 1] = {");
    for spec in unit.specs {
        let _ = write!(out, "{}, ", c_string(&spec.id));
    }
    out.push_str("0};\n");
    out.push_str("static const char *const driver_signals[MONITOR_SIGNAL_COUNT + 1] = {");
    for name in unit.signals.keys() {
        let _ = write!(out, "{}, ", c_string(name));
    }
    out.push_str("0};\n\n");

    out.push_str(DRIVER_HELPERS);
    if unit.signals.values().any(|k| *k == SignalKind::Num) {
        out.push_str(DRIVER_NUM);
    }
    if unit.signals.values().any(|k| *k == SignalKind::Bool) {
        out.push_str(DRIVER_BOOL);
    }

    out.push_str("int main(void)\n{\n");
    out.push_str(
        "    static char line[DRIVER_MAX_LINE];
    char *fields[DRIVER_MAX_COLS];
    int cols[MONITOR_SIGNAL_COUNT + 1];
    unsigned char verdicts[MONITOR_COUNT + 1];
    monitor_state_t st;
    monitor_input_t in;
    unsigned long long row = 1;
    int n, k, m;

    memset(&in, 0, sizeof in);
    monitor_init(&st);
    if (!driver_read(line, row)) return 0;
    n = driver_split(line, fields, row);
    for (k = 0; k < MONITOR_SIGNAL_COUNT; k++) {
        cols[k] = -1;
        for (m = 0; m < n; m++) {
            if (strcmp(fields[m], driver_signals[k]) == 0) cols[k] = m;
        }
        if (cols[k] < 0) driver_fail(row, \"missing column\", driver_signals[k]);
    }
    (void)cols;
    while (row++, driver_read(line, row)) {
        if (driver_split(line, fields, row) != n) driver_fail(row, \"wrong number of fields\", 0);
",
    );
    for (k, (name, kind)) in unit.signals.iter().enumerate() {
        let _ = writeln!(out, "        /* {} */", comment_safe(name));
        match kind {
            SignalKind::Bool => {
                let _ = writeln!(out, "        in.{name} = ({}) driver_bool(fields[cols[{k}]], row);", c_type(*kind));
            }
            SignalKind::Num => {
                let _ = writeln!(out, "        in.{name} = driver_num(fields[cols[{k}]], row);");
            }
        }
    }
    out.push_str(
        "        {
            unsigned long long tick = st.tick;
            monitor_step(&st, &in, verdicts);
            for (k = 0; k < MONITOR_COUNT; k++) {
                printf(\"%llu,%s,%d\\n\", tick, driver_ids[k], verdicts[k] ? 1 : 0);
            }
        }
    }
    return 0;
}
",
    );
}

const DRIVER_HELPERS: &str = r#"static void driver_fail(unsigned long long row, const char *what, const char *detail)
{
    fprintf(stderr, "line %llu: %s%s%s\n", row, what, detail ? ": " : "", detail ? detail : "");
    exit(2);
}

/* Reads one line without its terminator; returns 0 at end of input. */
static int driver_read(char *line, unsigned long long row)
{
    size_t len;
    if (!fgets(line, DRIVER_MAX_LINE, stdin)) {
        if (ferror(stdin)) driver_fail(row, "read error", 0);
        return 0;
    }
    len = strlen(line);
    if (len > 0 && line[len - 1] == '\n') {
        line[--len] = '\0';
    } else if (!feof(stdin)) {
        driver_fail(row, "line too long", 0);
    }
    if (len > 0 && line[len - 1] == '\r') line[--len] = '\0';
    return 1;
}

static int driver_split(char *line, char **fields, unsigned long long row)
{
    int n = 0;
    char *p = line;
    for (;;) {
        char *end = strchr(p, ',');
        if (n == DRIVER_MAX_COLS) driver_fail(row, "too many columns", 0);
        while (*p == ' ' || *p == '\t') p++;
        fields[n++] = p;
        if (end) *end = '\0';
        {
            char *q = p + strlen(p);
            while (q > p && (q[-1] == ' ' || q[-1] == '\t')) *--q = '\0';
        }
        if (!end) break;
        p = end + 1;
    }
    return n;
}

"#;

const DRIVER_NUM: &str = r#"static double driver_num(const char *text, unsigned long long row)
{
    char *end;
    double v;
    if (*text == '\0') driver_fail(row, "empty field", 0);
    v = strtod(text, &end);
    if (*end != '\0') driver_fail(row, "not a number", text);
    if (v != v || v - v != 0.0) driver_fail(row, "non-finite number", text);
    return v;
}

"#;

const DRIVER_BOOL: &str = r#"static int driver_bool(const char *text, unsigned long long row)
{
    if (strcmp(text, "1") == 0 || strcmp(text, "true") == 0) return 1;
    if (strcmp(text, "0") == 0 || strcmp(text, "false") == 0) return 0;
    driver_fail(row, "not a boolean", text);
    return 0;
}

"#;
