use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Realize,
    Verify,
    Enumerate,
    Solve,
    EstimateProb,
    ProjectExp,
    Plot,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Realize => "realize",
            CommandName::Verify => "verify",
            CommandName::Enumerate => "enumerate",
            CommandName::Solve => "solve",
            CommandName::EstimateProb => "estimate-prob",
            CommandName::ProjectExp => "project-exp",
            CommandName::Plot => "plot",
        }
    }

    fn seeded(self) -> bool {
        matches!(self, CommandName::Solve | CommandName::EstimateProb | CommandName::ProjectExp)
    }
}

/// An experiment description: one subcommand with its parameters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "version_one")]
    pub version: u32,
    pub command: CommandName,
    #[serde(default)]
    pub parameters: serde_json::Map<String, Value>,
    pub seed: Option<u64>,
    pub output_path: PathBuf,
}

fn version_one() -> u32 {
    1
}

// parameters naming files, resolved against the manifest's directory
const PATH_KEYS: [&str; 3] = ["config", "targets", "certificate"];

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest, String> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| format!("manifest: {e}"))?;
        if m.version != 1 {
            return Err(format!("manifest: unsupported version {}", m.version));
        }
        Ok(m)
    }

    /// Equivalent command line. Keys become `--long-options`; `true`
    /// becomes a bare flag, arrays are comma-joined. Relative paths are
    /// taken relative to `base`.
    pub fn to_args(&self, base: &Path) -> Result<Vec<String>, String> {
        let resolve = |p: &str| -> String {
            let p = Path::new(p);
            if p.is_relative() { base.join(p) } else { p.to_path_buf() }.to_string_lossy().into_owned()
        };
        let mut args = vec!["angle-realize".to_string(), self.command.as_str().to_string()];
        for (key, value) in &self.parameters {
            let flag = format!("--{}", key.replace('_', "-"));
            match value {
                Value::Null | Value::Bool(false) => {}
                Value::Bool(true) => args.push(flag),
                Value::Number(n) => args.extend([flag, n.to_string()]),
                Value::String(s) if PATH_KEYS.contains(&key.as_str()) => args.extend([flag, resolve(s)]),
                Value::String(s) => args.extend([flag, s.clone()]),
                Value::Array(items) => {
                    let parts: Vec<String> = items
                        .iter()
                        .map(|v| match v {
                            Value::Number(n) => Ok(n.to_string()),
                            Value::String(s) => Ok(s.clone()),
                            _ => Err(format!("parameter {key}: arrays may hold numbers or strings only")),
                        })
                        .collect::<Result<_, _>>()?;
                    args.extend([flag, parts.join(",")]);
                }
                Value::Object(_) => return Err(format!("parameter {key}: nested objects are not supported")),
            }
        }
        if self.command.seeded() {
            if let Some(seed) = self.seed {
                args.extend(["--seed".into(), seed.to_string()]);
            }
        }
        args.extend(["--output".into(), resolve(&self.output_path.to_string_lossy())]);
        Ok(args)
    }
}

/// Explicit seed, else `ANGLE_SEED`, else 42.
pub fn resolve_seed(explicit: Option<u64>) -> Result<u64, String> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("ANGLE_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("ANGLE_SEED={v:?} is not an unsigned integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
