//! Parametric requirement templates.
//!
//! A parameter file holds `NAME = number` lines (blank lines and `#`
//! comments are ignored). A template is requirement text with `{HOLE}`
//! placeholders, each mapped to a parameter key. Catalogs are TOML:
//!
//! ```toml
//! [altitude-ceiling]
//! doc = "Stay below the ceiling while flying."
//! skeleton = "in flight_mode the aircraft shall always satisfy altitude < {CEIL}"
//! params = { CEIL = "MAX_ALT" }
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::codegen::ParamBinding;
use crate::fretish::{format_number, parse_requirement, FretishError, Requirement};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("template `{template}` needs parameter `{key}`")]
    MissingParam { template: String, key: String },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
    #[error("template `{name}`: {reason}")]
    InvalidTemplate { name: String, reason: String },
    #[error("template `{name}` produced an invalid requirement: {source}")]
    Instantiation {
        name: String,
        #[source]
        source: FretishError,
    },
}

fn is_key(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a parameter file.
pub fn parse_params(text: &str) -> Result<Params, TemplateError> {
    let mut out = Params::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |message: String| TemplateError::SyntaxError { line, message };
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| syntax("expected `NAME = number`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if !is_key(key) {
            return Err(syntax(format!("`{key}` is not a valid parameter name")));
        }
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| syntax(format!("`{value}` is not a finite number")))?;
        if out.insert(key.to_string(), value).is_some() {
            return Err(TemplateError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Template {
    #[serde(default)]
    pub doc: String,
    pub skeleton: String,
    /// Placeholder → parameter key.
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

/// A requirement produced from a template.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub template: String,
    pub text: String,
    pub requirement: Requirement,
    pub bindings: Vec<ParamBinding>,
}

enum Piece<'a> {
    Text(&'a str),
    Hole(&'a str),
}

fn pieces(skeleton: &str) -> Result<Vec<Piece<'_>>, String> {
    let mut out = Vec::new();
    let mut rest = skeleton;
    while let Some(open) = rest.find(['{', '}']) {
        if rest[open..].starts_with('}') {
            return Err("unmatched `}`".into());
        }
        out.push(Piece::Text(&rest[..open]));
        let close = rest[open..].find('}').ok_or("unterminated placeholder")? + open;
        let name = &rest[open + 1..close];
        if !is_key(name) {
            return Err(format!("bad placeholder `{{{name}}}`"));
        }
        out.push(Piece::Hole(name));
        rest = &rest[close + 1..];
    }
    out.push(Piece::Text(rest));
    Ok(out)
}

impl Template {
    /// Placeholder names in order of first appearance.
    pub fn placeholders(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in pieces(&self.skeleton).unwrap_or_default() {
            if let Piece::Hole(h) = p {
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
        out
    }

    /// Parameter keys this template reads.
    pub fn keys(&self) -> Vec<&str> {
        let mut keys: Vec<&str> = self.params.values().map(String::as_str).collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    fn fill(&self, value_of: impl Fn(&str) -> String) -> Result<String, String> {
        let mut out = String::new();
        for p in pieces(&self.skeleton)? {
            match p {
                Piece::Text(t) => out.push_str(t),
                Piece::Hole(h) => out.push_str(&value_of(h)),
            }
        }
        Ok(out)
    }

    /// Check that placeholders and the params map agree and that the
    /// skeleton parses with every hole set to zero.
    pub fn validate(&self, name: &str) -> Result<(), TemplateError> {
        let invalid = |reason: String| TemplateError::InvalidTemplate {
            name: name.to_string(),
            reason,
        };
        let text = self.fill(|_| "0".into()).map_err(invalid)?;
        let holes = self.placeholders();
        if let Some(h) = holes.iter().find(|h| !self.params.contains_key(**h)) {
            return Err(invalid(format!("placeholder `{{{h}}}` has no parameter")));
        }
        if let Some(p) = self.params.keys().find(|p| !holes.contains(&p.as_str())) {
            return Err(invalid(format!("parameter for `{{{p}}}` is never used")));
        }
        if let Some(k) = self.params.values().find(|k| !is_key(k)) {
            return Err(invalid(format!("`{k}` is not a valid parameter name")));
        }
        parse_requirement(&text, &instance_id(name)).map_err(|source| TemplateError::Instantiation {
            name: name.to_string(),
            source,
        })?;
        Ok(())
    }

    pub fn instantiate(&self, name: &str, params: &Params) -> Result<Instance, TemplateError> {
        let mut bindings = Vec::new();
        for key in self.keys() {
            let value = *params.get(key).ok_or_else(|| TemplateError::MissingParam {
                template: name.to_string(),
                key: key.to_string(),
            })?;
            bindings.push(ParamBinding {
                key: key.to_string(),
                value,
            });
        }
        let text = self
            .fill(|hole| {
                let v = params[&self.params[hole]];
                let s = format_number(v);
                if v < 0.0 {
                    format!("({s})")
                } else {
                    s
                }
            })
            .map_err(|reason| TemplateError::InvalidTemplate {
                name: name.to_string(),
                reason,
            })?;
        let requirement = parse_requirement(&text, &instance_id(name)).map_err(|source| {
            TemplateError::Instantiation {
                name: name.to_string(),
                source,
            }
        })?;
        Ok(Instance {
            template: name.to_string(),
            text,
            requirement,
            bindings,
        })
    }
}

/// Id given to a requirement generated from template `name`.
pub fn instance_id(name: &str) -> String {
    format!("AUTO-{name}")
}

const BUILTIN: &str = r#"
[altitude-ceiling]
doc = "While flying, altitude stays below the configured ceiling."
skeleton = "in flight_mode the aircraft shall always satisfy altitude < {MAX_ALT}"
params = { MAX_ALT = "MAX_ALT" }

[daa-separation]
doc = "While flying, keep horizontal or vertical separation from the intruder."
skeleton = "in flight_mode the aircraft shall always satisfy horizontal_intruder_distance > {DAA_HDIST} | vertical_intruder_distance > {DAA_VDIST}"
params = { DAA_HDIST = "DAA_HDIST", DAA_VDIST = "DAA_VDIST" }

[geofence-containment]
doc = "While flying, stay at least the margin inside the geofence."
skeleton = "in flight_mode the aircraft shall always satisfy geofence_distance > {GEOFENCE_MARGIN}"
params = { GEOFENCE_MARGIN = "GEOFENCE_MARGIN" }
"#;

/// Named templates, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    templates: BTreeMap<String, Template>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::from_toml(BUILTIN).expect("built-in catalog is valid")
    }

    /// Parse and validate a TOML catalog.
    pub fn from_toml(text: &str) -> Result<Catalog, TemplateError> {
        let templates: BTreeMap<String, Template> =
            toml::from_str(text).map_err(|e| TemplateError::Catalog(e.to_string()))?;
        for (name, t) in &templates {
            t.validate(name)?;
        }
        Ok(Catalog { templates })
    }

    /// Add every template of `other`, replacing same-named ones.
    pub fn extend(&mut self, other: Catalog) {
        self.templates.extend(other.templates);
    }

    pub fn get(&self, name: &str) -> Option<&Template> {
        self.templates.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Template)> {
        self.templates.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn instantiate(&self, name: &str, params: &Params) -> Result<Instance, TemplateError> {
        self.get(name)
            .ok_or_else(|| TemplateError::UnknownTemplate(name.to_string()))?
            .instantiate(name, params)
    }

    /// Instantiate every template whose keys are all present. Templates
    /// that use none of the given keys are skipped; a partial match is an
    /// error.
    pub fn generate(&self, params: &Params) -> Result<Vec<Instance>, TemplateError> {
        let mut out = Vec::new();
        for (name, t) in &self.templates {
            let keys = t.keys();
            if !keys.iter().any(|k| params.contains_key(*k)) {
                continue;
            }
            out.push(t.instantiate(name, params)?);
        }
        Ok(out)
    }

    /// Keys in `params` that no template reads.
    pub fn unused_keys<'p>(&self, params: &'p Params) -> Vec<&'p str> {
        params
            .keys()
            .filter(|k| !self.templates.values().any(|t| t.params.values().any(|v| v == *k)))
            .map(String::as_str)
            .collect()
    }
}
