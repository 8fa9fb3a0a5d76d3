//! Signal values and finite, tick-indexed traces.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignalKind {
    Bool,
    Num,
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalKind::Bool => "boolean",
            SignalKind::Num => "numeric",
        })
    }
}

/// One sample of a signal. Numbers are always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Bool(bool),
    Num(f64),
}

impl Value {
    pub fn kind(self) -> SignalKind {
        match self {
            Value::Bool(_) => SignalKind::Bool,
            Value::Num(_) => SignalKind::Num,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Num(_) => None,
        }
    }

    pub fn as_num(self) -> Option<f64> {
        match self {
            Value::Num(n) => Some(n),
            Value::Bool(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => f.write_str(if *b { "1" } else { "0" }),
            Value::Num(n) => write!(f, "{n}"),
        }
    }
}

/// Values of every signal at one tick.
pub type Valuation = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Bool(Vec<bool>),
    Num(Vec<f64>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Bool(v) => v.len(),
            Column::Num(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> SignalKind {
        match self {
            Column::Bool(_) => SignalKind::Bool,
            Column::Num(_) => SignalKind::Num,
        }
    }

    pub fn get(&self, t: usize) -> Option<Value> {
        match self {
            Column::Bool(v) => v.get(t).map(|b| Value::Bool(*b)),
            Column::Num(v) => v.get(t).map(|n| Value::Num(*n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("column `{name}` has {found} samples, expected {expected}")]
    LengthMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("column `{name}` contains a non-finite number at tick {tick}")]
    NonFinite { name: String, tick: usize },
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
}

/// Named columns of equal length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    len: usize,
    columns: BTreeMap<String, Column>,
}

impl Trace {
    pub fn new(len: usize) -> Self {
        Trace {
            len,
            columns: BTreeMap::new(),
        }
    }

    pub fn with_column(mut self, name: impl Into<String>, column: Column) -> Result<Self, TraceError> {
        self.insert(name, column)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: impl Into<String>, column: Column) -> Result<(), TraceError> {
        let name = name.into();
        if column.len() != self.len {
            return Err(TraceError::LengthMismatch {
                name,
                expected: self.len,
                found: column.len(),
            });
        }
        if let Column::Num(v) = &column {
            if let Some(tick) = v.iter().position(|x| !x.is_finite()) {
                return Err(TraceError::NonFinite { name, tick });
            }
        }
        if self.columns.contains_key(&name) {
            return Err(TraceError::DuplicateColumn(name));
        }
        self.columns.insert(name, column);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.get(name)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &Column)> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn value(&self, name: &str, t: usize) -> Option<Value> {
        self.columns.get(name)?.get(t)
    }

    /// All signal values at tick `t`.
    pub fn row(&self, t: usize) -> Valuation {
        self.columns
            .iter()
            .filter_map(|(k, c)| c.get(t).map(|v| (k.clone(), v)))
            .collect()
    }
}
