//! Layered configuration: defaults, then the TOML file, then `NHFLOQUET_*`
//! environment variables, then `--set` overrides.

use std::fmt;
use std::path::Path;

use nhfloquet::experiments::SweepConfig;
use toml::{Table, Value};

pub const ENV_PREFIX: &str = "NHFLOQUET_";

/// Axis keys exist even though the default config leaves the axes unset.
const AXIS_KEYS: &[&str] = &[
    "sweep.f.min",
    "sweep.f.max",
    "sweep.f.steps",
    "sweep.w.min",
    "sweep.w.max",
    "sweep.w.steps",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn flatten(prefix: &str, table: &Table, out: &mut Vec<(String, Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => out.push((key, other.clone())),
        }
    }
}

fn default_table() -> Table {
    match Value::try_from(SweepConfig::default()).expect("default config serializes") {
        Value::Table(t) => t,
        _ => unreachable!("config is a table"),
    }
}

/// Every settable key with its default (`None` for unset axis bounds).
pub fn known_keys() -> Vec<(String, Option<Value>)> {
    let mut leaves = Vec::new();
    flatten("", &default_table(), &mut leaves);
    let mut keys: Vec<(String, Option<Value>)> = leaves.into_iter().map(|(k, v)| (k, Some(v))).collect();
    keys.extend(AXIS_KEYS.iter().map(|k| (k.to_string(), None)));
    keys
}

/// Resolves a full dotted key, or a unique trailing part of one (`f` for
/// `drive.f`).
pub fn resolve_key(key: &str) -> Result<String, ConfigError> {
    let keys = known_keys();
    if keys.iter().any(|(k, _)| k == key) {
        return Ok(key.to_string());
    }
    let suffix = format!(".{key}");
    let matches: Vec<&String> = keys.iter().map(|(k, _)| k).filter(|k| k.ends_with(&suffix)).collect();
    match matches.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(ConfigError(format!("unknown config key `{key}`"))),
        many => Err(ConfigError(format!(
            "ambiguous config key `{key}`: could be {}",
            many.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Parses a value as TOML (`0.5`, `[0.0, 0.1]`, `true`), falling back to a
/// bare string.
fn parse_value(text: &str) -> Value {
    toml::from_str::<Table>(&format!("v = {text}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(text.to_string()))
}

fn set_path(table: &mut Table, key: &str, value: Value) -> Result<(), ConfigError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("non-empty key");
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(ConfigError(format!("`{key}`: `{p}` is not a section"))),
        };
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Applies one `key=value` override.
pub fn apply_override(table: &mut Table, assignment: &str, origin: &str) -> Result<(), ConfigError> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("{origin}: expected KEY=VALUE, got `{assignment}`")))?;
    let key = resolve_key(key.trim()).map_err(|e| ConfigError(format!("{origin}: {e}")))?;
    set_path(table, &key, parse_value(value.trim()))
}

/// `NHFLOQUET_DRIVE__F` → `drive.f`.
pub fn env_key(var: &str) -> Option<String> {
    var.strip_prefix(ENV_PREFIX)
        .map(|rest| rest.split("__").map(str::to_lowercase).collect::<Vec<_>>().join("."))
}

pub fn load(
    path: Option<&Path>,
    env: impl IntoIterator<Item = (String, String)>,
    sets: &[String],
) -> Result<SweepConfig, ConfigError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", p.display())))?;
            toml::from_str::<Table>(&text).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?
        }
        None => Table::new(),
    };
    let mut env: Vec<(String, String)> = env.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
    env.sort();
    for (var, value) in env {
        let key = env_key(&var).expect("prefix checked");
        apply_override(
            &mut table,
            &format!("{key}={value}"),
            &format!("environment variable {var}"),
        )?;
    }
    for s in sets {
        apply_override(&mut table, s, "--set")?;
    }
    let config: SweepConfig = serde_path_to_error::deserialize(Value::Table(table)).map_err(|e| {
        let path = e.path().to_string();
        ConfigError(format!("config key `{path}`: {}", e.into_inner()))
    })?;
    config
        .validate()
        .map_err(|e| ConfigError(format!("invalid config: {e}")))?;
    Ok(config)
}

/// The key listing shown under `--help`.
pub fn keys_help() -> String {
    let mut s = String::from(
        "Configuration keys (defaults shown). Override with --set KEY=VALUE, where a unique\n\
         trailing part of the key suffices (`--set f=0.5`), or with environment variables\n\
         NHFLOQUET_SECTION__KEY=VALUE (e.g. NHFLOQUET_DRIVE__F=0.5). Precedence: defaults <\n\
         --config file < environment < --set.\n\n",
    );
    for (k, v) in known_keys() {
        match v {
            Some(v) => s.push_str(&format!("  {k} = {v}\n")),
            None => s.push_str(&format!("  {k}  (unset: axis held at its base value)\n")),
        }
    }
    s
}
