use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::fock::TruncationPolicy;
use crate::state::{polar_alpha, Family, Param, StateSpec};

use super::quantity::{split_quantities, Quantity};

/// A configuration problem, located by line and key where possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, field: &str, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    fn missing(field: &str) -> Self {
        Self {
            line: None,
            field: Some(field.to_string()),
            message: "required key is missing".into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.field) {
            (Some(l), Some(k)) => write!(f, "line {l}, field `{k}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(k)) => write!(f, "field `{k}`: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    value: String,
}

/// Flat `key = value` pairs; `#` starts a comment.
#[derive(Debug, Clone, Default)]
struct Entries {
    map: BTreeMap<String, Entry>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError {
                    line: Some(line),
                    field: None,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(ConfigError {
                    line: Some(line),
                    field: None,
                    message: "empty key".into(),
                });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::at(line, key, "unknown key"));
            }
            if let Some(prev) = map.get(key) {
                let prev: &Entry = prev;
                return Err(ConfigError::at(line, key, format!("duplicate key, first set on line {}", prev.line)));
            }
            map.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Self { map })
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.map.get(key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ConfigError::at(e.line, key, format!("`{}` is not a finite number", e.value)))
            })
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<usize>()
                    .map_err(|_| ConfigError::at(e.line, key, format!("`{}` is not a non-negative integer", e.value)))
            })
            .transpose()
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.get(key).map(|e| e.line)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "state.family",
    "state.n",
    "state.added",
    "state.subtracted",
    "state.p",
    "state.M",
    "state.chi",
    "alpha.mag",
    "alpha.phase",
    "sweep.param",
    "sweep.start",
    "sweep.stop",
    "sweep.steps",
    "sweep2.param",
    "sweep2.start",
    "sweep2.stop",
    "sweep2.steps",
    "quantities",
    "truncation.max_dim",
    "truncation.tail_tolerance",
    "output",
];

/// One swept parameter on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + h * i as f64 })
            .collect()
    }
}

/// A state template plus truncation and output location.
#[derive(Debug, Clone, PartialEq)]
pub struct StateConfig {
    pub state: StateSpec,
    pub truncation: TruncationPolicy,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub state: StateSpec,
    /// One or two swept parameters; the first varies slowest.
    pub sweeps: Vec<Sweep>,
    /// Column label and quantity.
    pub quantities: Vec<(String, Quantity)>,
    pub truncation: TruncationPolicy,
    pub output_path: Option<PathBuf>,
}

impl StateConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let entries = Entries::parse(text)?;
        state_config(&entries, base_dir)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = read(path)?;
        Self::parse(&text, parent_dir(path))
    }
}

impl SweepConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let entries = Entries::parse(text)?;
        let base = state_config(&entries, base_dir)?;
        let mut sweeps = vec![sweep(&entries, "sweep", &base.state)?.ok_or_else(|| ConfigError::missing("sweep.param"))?];
        if let Some(second) = sweep(&entries, "sweep2", &base.state)? {
            if second.param == sweeps[0].param {
                return Err(ConfigError::at(
                    entries.line_of("sweep2.param").unwrap_or(0),
                    "sweep2.param",
                    "second sweep repeats the first parameter",
                ));
            }
            sweeps.push(second);
        }

        let q = entries.get("quantities").ok_or_else(|| ConfigError::missing("quantities"))?;
        let mut quantities = Vec::new();
        for label in split_quantities(&q.value) {
            let quantity = label.parse::<Quantity>().map_err(|m| ConfigError::at(q.line, "quantities", m))?;
            quantities.push((label.to_string(), quantity));
        }
        if quantities.is_empty() {
            return Err(ConfigError::at(q.line, "quantities", "no quantities requested"));
        }

        Ok(Self {
            state: base.state,
            sweeps,
            quantities,
            truncation: base.truncation,
            output_path: base.output_path,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = read(path)?;
        Self::parse(&text, parent_dir(path))
    }

    /// Every sweep point, first sweep slowest, as parameter values.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for s in &self.sweeps {
            let values = s.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    /// The state at one sweep point.
    pub fn state_at(&self, point: &[f64]) -> crate::Result<StateSpec> {
        let mut spec = self.state;
        let phase = self.state.alpha.arg();
        for (s, &v) in self.sweeps.iter().zip(point) {
            spec.set(s.param, v, phase)?;
        }
        Ok(spec)
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        field: None,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn parent_dir(path: &Path) -> &Path {
    path.parent().unwrap_or_else(|| Path::new("."))
}

fn state_config(entries: &Entries, base_dir: &Path) -> Result<StateConfig, ConfigError> {
    let fam = entries.get("state.family").ok_or_else(|| ConfigError::missing("state.family"))?;
    let family: Family = fam
        .value
        .parse()
        .map_err(|_| ConfigError::at(fam.line, "state.family", format!("unknown family `{}`", fam.value)))?;
    let mut spec = StateSpec::new(family);
    let mag = entries.number("alpha.mag")?.unwrap_or(0.0);
    let phase = entries.number("alpha.phase")?.unwrap_or(0.0);
    if mag < 0.0 {
        return Err(ConfigError::at(entries.line_of("alpha.mag").unwrap_or(0), "alpha.mag", "magnitude must be non-negative"));
    }
    spec.alpha = polar_alpha(mag, phase);
    if let Some(v) = entries.count("state.n")? {
        spec.n = v;
    }
    if let Some(v) = entries.count("state.added")? {
        spec.added = v;
    }
    if let Some(v) = entries.count("state.subtracted")? {
        spec.subtracted = v;
    }
    if let Some(v) = entries.count("state.M")? {
        spec.cutoff = v;
    }
    if let Some(v) = entries.number("state.p")? {
        spec.p = v;
    }
    if let Some(v) = entries.number("state.chi")? {
        spec.chi = v;
    }
    if let Err(e) = spec.validate() {
        let field = if family.parameters().contains(&Param::P) { "state.p" } else { "state" };
        return Err(ConfigError {
            line: entries.line_of(field),
            field: Some(field.into()),
            message: e.to_string(),
        });
    }

    let mut truncation = TruncationPolicy::default();
    let max_dim = entries.count("truncation.max_dim")?.unwrap_or(truncation.max_dim);
    let tail = entries.number("truncation.tail_tolerance")?.unwrap_or(truncation.tail_tolerance);
    truncation = TruncationPolicy::new(max_dim, tail).map_err(|e| ConfigError {
        line: entries.line_of("truncation.max_dim").or(entries.line_of("truncation.tail_tolerance")),
        field: Some("truncation".into()),
        message: e.to_string(),
    })?;

    let output_path = entries.get("output").map(|e| {
        let p = PathBuf::from(&e.value);
        if p.is_absolute() {
            p
        } else {
            base_dir.join(p)
        }
    });

    Ok(StateConfig {
        state: spec,
        truncation,
        output_path,
    })
}

fn sweep(entries: &Entries, prefix: &str, template: &StateSpec) -> Result<Option<Sweep>, ConfigError> {
    let key = |s: &str| format!("{prefix}.{s}");
    let Some(p) = entries.get(&key("param")) else {
        for field in ["start", "stop", "steps"] {
            if let Some(line) = entries.line_of(&key(field)) {
                return Err(ConfigError::at(line, &key(field), format!("set without {}", key("param"))));
            }
        }
        return Ok(None);
    };
    let param: Param = p
        .value
        .parse()
        .map_err(|_| ConfigError::at(p.line, &key("param"), format!("unknown parameter `{}`", p.value)))?;
    if !template.family.parameters().contains(&param) {
        return Err(ConfigError::at(
            p.line,
            &key("param"),
            format!("{} has no parameter {}", template.family.name(), param.key()),
        ));
    }
    let start = entries.number(&key("start"))?.ok_or_else(|| ConfigError::missing(&key("start")))?;
    let stop = entries.number(&key("stop"))?.ok_or_else(|| ConfigError::missing(&key("stop")))?;
    let steps = entries.count(&key("steps"))?.ok_or_else(|| ConfigError::missing(&key("steps")))?;
    if steps < 1 {
        return Err(ConfigError::at(entries.line_of(&key("steps")).unwrap_or(0), &key("steps"), "must be at least 1"));
    }
    let s = Sweep { param, start, stop, steps };
    for v in s.values() {
        let mut probe = *template;
        let bad = probe.set(param, v, template.alpha.arg()).and_then(|_| probe.validate());
        if param == Param::AlphaMag && v < 0.0 {
            return Err(ConfigError::at(p.line, &key("param"), format!("sweep reaches negative magnitude {v}")));
        }
        if let Err(e) = bad {
            return Err(ConfigError::at(p.line, &key("param"), format!("sweep value {v} is invalid: {e}")));
        }
    }
    Ok(Some(s))
}
