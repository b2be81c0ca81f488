use std::path::Path;
use std::str::FromStr;

use orbit_embed::{Mode, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Inclusive range of `n`, written `2` or `1..3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad n {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("n range {s:?} must satisfy 1 <= lo <= hi"));
        }
        Ok(NRange { lo, hi })
    }
}

impl std::fmt::Display for NRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub n: NRange,
    /// Trials per property and per `n`.
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub tolerances: Tolerances,
    pub format: Format,
    /// Property names to run; empty means all.
    pub properties: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: NRange { lo: 1, hi: 3 },
            trials: 10,
            seed: 0,
            mode: Mode::Exact,
            tolerances: Tolerances::default(),
            format: Format::Json,
            properties: Vec::new(),
        }
    }
}

/// Overrides collected from the command line; `None` keeps the file value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<NRange>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub properties: Vec<String>,
}

/// Config file fields, all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema: u32,
    n: Option<Value>,
    trials: Option<u64>,
    seed: Option<u64>,
    mode: Option<Mode>,
    tol: Option<Value>,
    format: Option<Format>,
    #[serde(default)]
    properties: Vec<String>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl SuiteConfig {
    pub fn from_json(value: &Value) -> Result<Self, CliError> {
        let file: ConfigFile = serde_json::from_value(value.clone()).map_err(|e| input(format!("config: {e}")))?;
        if file.schema != 1 {
            return Err(input(format!("config: unsupported schema {}", file.schema)));
        }
        let mut cfg = SuiteConfig::default();
        if let Some(n) = file.n {
            cfg.n = match &n {
                Value::String(s) => s.parse().map_err(input)?,
                Value::Number(k) => k.to_string().parse().map_err(input)?,
                Value::Array(b) if b.len() == 2 => format!("{}..{}", b[0], b[1]).parse().map_err(input)?,
                other => return Err(input(format!("config: bad n {other}"))),
            };
        }
        if let Some(t) = file.trials {
            cfg.trials = t;
        }
        if let Some(s) = file.seed {
            cfg.seed = s;
        }
        if let Some(m) = file.mode {
            cfg.mode = m;
        }
        if let Some(f) = file.format {
            cfg.format = f;
        }
        if let Some(tol) = file.tol {
            cfg.tolerances = match tol {
                Value::Number(x) => Tolerances::with_residual(x.as_f64().unwrap_or(f64::NAN)),
                other => serde_json::from_value(other).map_err(|e| input(format!("config: tol: {e}")))?,
            };
        }
        cfg.properties = file.properties;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let value = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
        Self::from_json(&value)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(n) = o.n {
            self.n = n;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(m) = o.mode {
            self.mode = m;
        }
        if let Some(t) = o.tol {
            self.tolerances = Tolerances::with_residual(t);
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if !o.properties.is_empty() {
            self.properties = o.properties.clone();
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, v) in [
            ("residual", t.residual),
            ("verification", t.verification),
            ("cluster_radius", t.cluster_radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(input(format!("tolerance {name} must be positive and finite, got {v}")));
            }
        }
        for p in &self.properties {
            if crate::properties::find(p).is_none() {
                return Err(input(format!("unknown property {p:?}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": [self.n.lo, self.n.hi],
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "properties": self.properties,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_ranges() {
        assert_eq!("1..3".parse::<NRange>().unwrap(), NRange { lo: 1, hi: 3 });
        assert_eq!("2".parse::<NRange>().unwrap(), NRange { lo: 2, hi: 2 });
        assert_eq!("1..=2".parse::<NRange>().unwrap(), NRange { lo: 1, hi: 2 });
        assert!("0..2".parse::<NRange>().is_err());
        assert!("3..1".parse::<NRange>().is_err());
    }

    #[test]
    fn config_file_and_overrides() {
        let cfg = SuiteConfig::from_json(&json!({"schema": 1, "n": "2..3", "trials": 4, "tol": 1e-6})).unwrap();
        assert_eq!(cfg.n, NRange { lo: 2, hi: 3 });
        assert!((cfg.tolerances.verification - 1e-5).abs() < 1e-18);
        let cfg = cfg
            .apply(&Overrides {
                trials: Some(0),
                ..Default::default()
            })
            .unwrap();
        assert_eq!(cfg.trials, 0);
        assert!(SuiteConfig::from_json(&json!({"schema": 2})).is_err());
        assert!(SuiteConfig::from_json(&json!({"schema": 1, "bogus": 1})).is_err());
        assert!(SuiteConfig::from_json(&json!({"schema": 1, "tol": -1.0})).is_err());
        assert!(SuiteConfig::from_json(&json!({"schema": 1, "properties": ["nope"]})).is_err());
    }
}
