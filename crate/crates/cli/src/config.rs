use std::path::{Path, PathBuf};

use drsubmax::instances::Instance;
use drsubmax::solvers::{SolverConfig, SolverKind};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Where the instance comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    Inline(Instance),
    /// An instance file; relative paths are taken from the config's
    /// directory.
    Path(PathBuf),
    /// A fresh random instance per repeat, seeded with the repeat's seed.
    Generate { family: String, n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverEntry {
    pub kind: SolverKind,
    /// File-name label; defaults to the solver name.
    pub label: String,
    pub config: SolverConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub instance: InstanceSource,
    pub solvers: Vec<SolverEntry>,
    pub output: PathBuf,
    pub repeats: usize,
    pub parallelism: usize,
    pub seed: u64,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    instance: Value,
    #[serde(default)]
    solver: Option<Value>,
    #[serde(default)]
    solvers: Option<Vec<Value>>,
    #[serde(default)]
    config: Option<Value>,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default = "one")]
    repeats: usize,
    #[serde(default = "one")]
    parallelism: usize,
    #[serde(default)]
    seed: u64,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateSource {
    family: String,
    n: usize,
}

/// Deserializes `value`, reporting failures at `prefix.<field path>`.
fn parse_at<T: for<'de> Deserialize<'de>>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { prefix.to_string() } else { format!("{prefix}.{path}") };
        CliError::validation(format!("{at}: {}", e.inner()))
    })
}

fn merge(base: &Value, overlay: Map<String, Value>) -> Value {
    let mut merged = base.as_object().cloned().unwrap_or_default();
    merged.extend(overlay);
    Value::Object(merged)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::validation(format!("config is not valid JSON: {e}")))?;
        let raw: RawConfig = parse_at(value, "config")?;
        let instance = parse_instance(raw.instance)?;

        let base_config = raw.config.unwrap_or_else(|| Value::Object(Map::new()));
        let _: SolverConfig = parse_at(base_config.clone(), "config")?;
        let entries = match (raw.solver, raw.solvers) {
            (Some(_), Some(_)) => return Err(CliError::validation("config: give `solver` or `solvers`, not both")),
            (None, None) => return Err(CliError::validation("config: missing `solver` or `solvers`")),
            (Some(s), None) => vec![s],
            (None, Some(list)) if list.is_empty() => {
                return Err(CliError::validation("config.solvers: at least one solver is required"))
            }
            (None, Some(list)) => list,
        };
        let mut solvers = Vec::with_capacity(entries.len());
        for (i, entry) in entries.into_iter().enumerate() {
            let at = format!("solvers[{i}]");
            solvers.push(parse_solver(entry, &base_config, &at)?);
        }
        let mut labels: Vec<&str> = solvers.iter().map(|s| s.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::validation(format!("config.solvers: duplicate label `{}`", w[0])));
        }
        if raw.repeats == 0 {
            return Err(CliError::validation("config.repeats: must be >= 1"));
        }
        if raw.parallelism == 0 {
            return Err(CliError::validation("config.parallelism: must be >= 1"));
        }
        Ok(RunConfig {
            instance,
            solvers,
            output: raw.output.unwrap_or_else(|| PathBuf::from("out")),
            repeats: raw.repeats,
            parallelism: raw.parallelism,
            seed: raw.seed,
            base_dir,
        })
    }

    /// Seed of repeat `run`.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }
}

fn parse_instance(value: Value) -> Result<InstanceSource, CliError> {
    match &value {
        Value::String(path) => Ok(InstanceSource::Path(PathBuf::from(path))),
        Value::Object(map) if map.contains_key("path") && map.len() == 1 => {
            Ok(InstanceSource::Path(parse_at(map["path"].clone(), "config.instance.path")?))
        }
        Value::Object(map) if map.contains_key("generate") && map.len() == 1 => {
            let g: GenerateSource = parse_at(map["generate"].clone(), "config.instance.generate")?;
            if g.n == 0 {
                return Err(CliError::validation("config.instance.generate.n: must be >= 1"));
            }
            Ok(InstanceSource::Generate { family: g.family, n: g.n })
        }
        _ => Ok(InstanceSource::Inline(parse_at(value, "config.instance")?)),
    }
}

fn parse_solver(entry: Value, base_config: &Value, at: &str) -> Result<SolverEntry, CliError> {
    let (name, label, overlay) = match entry {
        Value::String(name) => (name, None, Map::new()),
        Value::Object(mut map) => {
            let name = match map.remove("name") {
                Some(Value::String(s)) => s,
                _ => return Err(CliError::validation(format!("config.{at}.name: expected a solver name"))),
            };
            let label = match map.remove("label") {
                None => None,
                Some(Value::String(s)) => Some(s),
                Some(_) => return Err(CliError::validation(format!("config.{at}.label: expected a string"))),
            };
            (name, label, map)
        }
        _ => return Err(CliError::validation(format!("config.{at}: expected a name or an object"))),
    };
    let kind: SolverKind = name.parse().map_err(|_| {
        let names: Vec<&str> = SolverKind::ALL.iter().map(|k| k.name()).collect();
        CliError::validation(format!("config.{at}.name: unknown solver `{name}`; expected one of {}", names.join(", ")))
    })?;
    let config: SolverConfig = parse_at(merge(base_config, overlay), &format!("config.{at}"))?;
    config
        .validate()
        .and_then(|_| config.step_for(kind).map(|_| ()))
        .map_err(|e| CliError::validation(format!("config.{at}: {e}")))?;
    let label = label.unwrap_or_else(|| kind.name().to_string());
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(CliError::validation(format!("config.{at}.label: use letters, digits, `_` or `-`")));
    }
    Ok(SolverEntry { kind, label, config })
}
