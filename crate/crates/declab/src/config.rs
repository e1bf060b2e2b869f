//! Plain-text experiment configs.
//!
//! ```text
//! # comment
//! [dicke-envelope]
//! omega = 1.0
//! g = 0.1
//! n_atoms = [4, 8, 16]   # a list on a scalar key makes it the sweep axis
//! output = envelope.csv
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::experiments::{Experiment, Kind, ParamSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown experiment `{name}` (see `declab list-experiments`)")]
    UnknownExperiment { line: usize, name: String },
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("{0}")]
    Validation(String),
    #[error("more than one sweep axis: {}", .0.join(", "))]
    MultipleSweepAxes(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Number(f64),
    Bool(bool),
    Word(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Number(x) => write!(f, "{x}"),
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Word(w) => f.write_str(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    List(Vec<Scalar>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: Value,
    pub line: usize,
}

/// A parsed config whose keys and value kinds match the experiment schema.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: BTreeMap<String, Entry>,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

fn parse_scalar(text: &str, line: usize) -> Result<Scalar, ConfigError> {
    match text {
        "true" => return Ok(Scalar::Bool(true)),
        "false" => return Ok(Scalar::Bool(false)),
        _ => {}
    }
    if let Ok(x) = text.parse::<f64>() {
        if !x.is_finite() {
            return Err(ConfigError::Parse { line, message: format!("`{text}` is not a finite number") });
        }
        return Ok(Scalar::Number(x));
    }
    if !text.is_empty() && text.chars().all(|c| c.is_ascii_alphanumeric() || "_-./".contains(c)) {
        return Ok(Scalar::Word(text.to_owned()));
    }
    Err(ConfigError::Parse { line, message: format!("cannot read value `{text}`") })
}

fn parse_value(text: &str, line: usize) -> Result<Value, ConfigError> {
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| ConfigError::Parse { line, message: "list is missing its closing `]`".into() })?
            .trim();
        if inner.is_empty() {
            return Ok(Value::List(Vec::new()));
        }
        let items = inner.split(',').map(|s| parse_scalar(s.trim(), line)).collect::<Result<_, _>>()?;
        return Ok(Value::List(items));
    }
    Ok(Value::Scalar(parse_scalar(text, line)?))
}

fn valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn check_scalar(spec: &ParamSpec, s: &Scalar, line: usize) -> Result<(), ConfigError> {
    let bad = |want: &str| ConfigError::Parse { line, message: format!("`{}` expects {want}, got `{s}`", spec.key) };
    match (spec.kind, s) {
        (Kind::Float | Kind::FloatList, Scalar::Number(_)) => Ok(()),
        (Kind::Int | Kind::IntList, Scalar::Number(x)) if x.fract() == 0.0 && *x >= 0.0 && *x < 9.0e15 => Ok(()),
        (Kind::Int | Kind::IntList, _) => Err(bad("a non-negative integer")),
        (Kind::Bool, Scalar::Bool(_)) => Ok(()),
        (Kind::Choice(options), Scalar::Word(w)) if options.contains(&w.as_str()) => Ok(()),
        (Kind::Choice(options), _) => Err(bad(&format!("one of {}", options.join(", ")))),
        (Kind::Path, Scalar::Word(_)) => Ok(()),
        (Kind::Float | Kind::FloatList, _) => Err(bad("a number")),
        (Kind::Bool, _) => Err(bad("true or false")),
        (Kind::Path, _) => Err(bad("a file path")),
    }
}

/// Parses config text and checks it against the experiment's schema.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut experiment: Option<Experiment> = None;
    let mut params: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if experiment.is_some() {
                return Err(ConfigError::Parse { line, message: "only one experiment section is allowed".into() });
            }
            let name = name.trim();
            experiment = Some(Experiment::from_name(name).ok_or_else(|| ConfigError::UnknownExperiment { line, name: name.to_owned() })?);
            continue;
        }
        let Some(exp) = experiment else {
            return Err(ConfigError::Parse { line, message: "expected an `[experiment]` header before any key".into() });
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line, message: format!("expected `key = value`, got `{content}`") })?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(ConfigError::Parse { line, message: format!("invalid key `{key}`") });
        }
        let spec = exp
            .param(key)
            .ok_or_else(|| ConfigError::Parse { line, message: format!("unknown key `{key}` for experiment {}", exp.name()) })?;
        let value = parse_value(value.trim(), line)?;
        match &value {
            Value::Scalar(s) if !spec.kind.is_list() => check_scalar(spec, s, line)?,
            Value::Scalar(_) => {
                return Err(ConfigError::Parse { line, message: format!("`{key}` expects a list such as [4, 8, 16]") })
            }
            Value::List(items) => {
                if !spec.kind.is_list() && !spec.kind.is_numeric() {
                    return Err(ConfigError::Parse { line, message: format!("`{key}` cannot be swept; only numeric keys accept a list") });
                }
                for s in items {
                    check_scalar(spec, s, line)?;
                }
            }
        }
        if params.insert(key.to_owned(), Entry { value, line }).is_some() {
            return Err(ConfigError::Parse { line, message: format!("duplicate key `{key}`") });
        }
    }
    let experiment = experiment.ok_or(ConfigError::Parse { line: 0, message: "no `[experiment]` header found".into() })?;
    for spec in experiment.params() {
        if spec.required && !params.contains_key(spec.key) {
            return Err(ConfigError::MissingKey(spec.key.to_owned()));
        }
    }
    let output_path = match params.remove("output") {
        Some(Entry { value: Value::Scalar(Scalar::Word(p)), .. }) => Some(PathBuf::from(p)),
        _ => None,
    };
    let seed = match params.remove("seed") {
        Some(Entry { value: Value::Scalar(Scalar::Number(x)), .. }) => x as u64,
        _ => 0,
    };
    let cfg = ExperimentConfig { experiment, params, output_path, seed };
    cfg.sweep_axis()?;
    Ok(cfg)
}

/// Reads and parses a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config_str(&text)
}

impl ExperimentConfig {
    /// The scalar key given as a list, if any.
    pub fn sweep_axis(&self) -> Result<Option<(&str, &[Scalar])>, ConfigError> {
        let axes: Vec<(&str, &[Scalar])> = self
            .params
            .iter()
            .filter_map(|(k, e)| match &e.value {
                Value::List(items) if !self.experiment.param(k).is_some_and(|s| s.kind.is_list()) => Some((k.as_str(), items.as_slice())),
                _ => None,
            })
            .collect();
        match axes.len() {
            0 => Ok(None),
            1 => Ok(Some(axes[0])),
            _ => Err(ConfigError::MultipleSweepAxes(axes.iter().map(|a| a.0.to_owned()).collect())),
        }
    }

    /// Parameter view with the sweep axis (if any) pinned to `pinned`.
    pub fn point<'a>(&'a self, pinned: Option<(&'a str, &'a Scalar)>) -> Params<'a> {
        Params { cfg: self, pinned }
    }
}

/// Typed access to one point of a (possibly swept) config, defaults applied.
#[derive(Clone, Copy, Debug)]
pub struct Params<'a> {
    cfg: &'a ExperimentConfig,
    pinned: Option<(&'a str, &'a Scalar)>,
}

impl<'a> Params<'a> {
    fn raw(&self, key: &str) -> Option<Value> {
        if let Some((k, v)) = self.pinned {
            if k == key {
                return Some(Value::Scalar(v.clone()));
            }
        }
        if let Some(e) = self.cfg.params.get(key) {
            return Some(e.value.clone());
        }
        let spec = self.cfg.experiment.param(key)?;
        let default = spec.default?;
        Some(parse_value(default, 0).expect("schema defaults parse"))
    }

    fn scalar(&self, key: &str) -> Scalar {
        match self.raw(key) {
            Some(Value::Scalar(s)) => s,
            other => panic!("schema guarantees a scalar for `{key}`, found {other:?}"),
        }
    }

    pub fn f64(&self, key: &str) -> f64 {
        match self.scalar(key) {
            Scalar::Number(x) => x,
            other => panic!("`{key}` is not numeric: {other}"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.f64(key) as usize
    }

    pub fn bool(&self, key: &str) -> bool {
        matches!(self.scalar(key), Scalar::Bool(true))
    }

    pub fn word(&self, key: &str) -> String {
        self.scalar(key).to_string()
    }

    pub fn f64_list(&self, key: &str) -> Vec<f64> {
        match self.raw(key) {
            Some(Value::List(items)) => items.iter().map(|s| if let Scalar::Number(x) = s { *x } else { f64::NAN }).collect(),
            other => panic!("schema guarantees a list for `{key}`, found {other:?}"),
        }
    }

    pub fn usize_list(&self, key: &str) -> Vec<usize> {
        self.f64_list(key).into_iter().map(|x| x as usize).collect()
    }

    pub fn seed(&self) -> u64 {
        self.cfg.seed
    }
}
