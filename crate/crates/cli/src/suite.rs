use orbit_embed::{theta_rep_sign, Error, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::SuiteConfig;
use crate::properties::{self, Check, Property, Trial, RESTRICTION_SIGN};
use crate::seeds;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub property: String,
    /// `None` for properties that do not depend on `n`.
    pub n: Option<usize>,
    pub trial: u64,
    pub trial_seed: String,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub theorem_violation: bool,
}

impl TrialRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    #[serde(flatten)]
    pub record: TrialRecord,
    pub tolerances: Tolerances,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub module: String,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    /// Largest residual and largest `residual / bound` over all checks; an
    /// exact check that fails has an infinite ratio (serialized as null).
    pub worst_residual: f64,
    pub worst_ratio: f64,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub properties: Vec<PropertyReport>,
    pub theorem_violation: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn exit_code(&self) -> i32 {
        if self.theorem_violation {
            3
        } else if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self, command: &str) -> Value {
        let trials: u64 = self.properties.iter().map(|p| p.trials).sum();
        let failed: u64 = self.properties.iter().map(|p| p.failed).sum();
        json!({
            "schema": 1,
            "command": command,
            "config": self.config.to_json(),
            "tolerances": self.config.tolerances,
            "conventions": conventions(),
            "passed": self.passed(),
            "theorem_violation": self.theorem_violation,
            "totals": {"trials": trials, "passed": trials - failed, "failed": failed},
            "properties": self.properties,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "config: n {} trials {} seed {} mode {}\ntolerances: residual {:e} verification {:e} cluster_radius {:e}\n",
            self.config.n,
            self.config.trials,
            self.config.seed,
            self.config.mode.as_str(),
            self.config.tolerances.residual,
            self.config.tolerances.verification,
            self.config.tolerances.cluster_radius,
        );
        for p in &self.properties {
            let status = if p.failed == 0 { "ok  " } else { "FAIL" };
            out += &format!(
                "{status} {:<26} {:<22} {:>5}/{:<5} worst {:.2e}\n",
                p.name, p.module, p.passed, p.trials, p.worst_residual
            );
            for f in &p.failures {
                let r = &f.record;
                let n = r.n.map_or("-".into(), |n| n.to_string());
                let what = r.error.clone().unwrap_or_else(|| {
                    r.checks
                        .iter()
                        .filter(|c| !c.passed())
                        .map(|c| format!("{}: {:.3e} > {:.3e}", c.name, c.residual, c.bound))
                        .collect::<Vec<_>>()
                        .join("; ")
                });
                out += &format!("     n {n} trial {} seed {}: {what}\n", r.trial, r.trial_seed);
            }
        }
        out += if self.passed() {
            "all properties passed\n"
        } else {
            "property violations found\n"
        };
        out
    }
}

/// Sign conventions fixed by this implementation, echoed in every report.
pub fn conventions() -> Value {
    json!({"theta_rep_sign": theta_rep_sign(), "restriction_sign": RESTRICTION_SIGN})
}

/// Evaluates one instance. Errors become failed records rather than aborts.
pub fn evaluate(property: &Property, instance: &Value, tol: &Tolerances) -> (Vec<Check>, Option<String>, bool) {
    split((property.evaluate)(instance, tol))
}

fn split(result: orbit_embed::Result<Vec<Check>>) -> (Vec<Check>, Option<String>, bool) {
    match result {
        Ok(checks) => (checks, None, false),
        Err(e) => {
            let theorem = matches!(e, Error::TheoremViolation(_));
            (Vec::new(), Some(e.to_string()), theorem)
        }
    }
}

/// The instance a trial runs on.
pub fn trial_instance(property: &Property, n: usize, trial: u64, config: &SuiteConfig) -> (u64, Value) {
    let seed = seeds::trial_seed(config.seed, &seeds::stream_name(property.name, n), trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = Trial {
        n,
        index: trial,
        mode: config.mode,
    };
    (seed, (property.generate)(&mut rng, &t))
}

fn run_trial(property: &Property, n: Option<usize>, trial: u64, config: &SuiteConfig) -> (TrialRecord, Value) {
    // n-independent properties draw from the n = 0 stream
    let (seed, instance) = trial_instance(property, n.unwrap_or(0), trial, config);
    let (checks, error, theorem_violation) = evaluate(property, &instance, &config.tolerances);
    let record = TrialRecord {
        property: property.name.into(),
        n,
        trial,
        // as a string: JSON readers often hold numbers as doubles
        trial_seed: seed.to_string(),
        checks,
        error,
        theorem_violation,
    };
    (record, instance)
}

fn ratio(c: &Check) -> f64 {
    if c.bound > 0.0 {
        c.residual / c.bound
    } else if c.residual > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

pub fn run_property(
    property: &Property,
    config: &SuiteConfig,
    mut on_trial: impl FnMut(&TrialRecord),
) -> (PropertyReport, bool) {
    let ns: Vec<Option<usize>> = if property.per_n {
        config.n.iter().map(Some).collect()
    } else {
        vec![None]
    };
    let mut report = PropertyReport {
        name: property.name.into(),
        module: property.module.into(),
        trials: 0,
        passed: 0,
        failed: 0,
        worst_residual: 0.0,
        worst_ratio: 0.0,
        failures: Vec::new(),
    };
    let mut theorem = false;
    for n in ns {
        for trial in 0..config.trials {
            let (record, instance) = run_trial(property, n, trial, config);
            on_trial(&record);
            report.trials += 1;
            for c in &record.checks {
                report.worst_residual = report.worst_residual.max(c.residual);
                report.worst_ratio = report.worst_ratio.max(ratio(c));
            }
            theorem |= record.theorem_violation;
            if record.passed() {
                report.passed += 1;
            } else {
                report.failed += 1;
                report.failures.push(Failure {
                    record,
                    tolerances: config.tolerances,
                    instance,
                });
            }
        }
    }
    (report, theorem)
}

fn selected(config: &SuiteConfig) -> Vec<Property> {
    properties::all()
        .into_iter()
        .filter(|p| config.properties.is_empty() || config.properties.iter().any(|q| q == p.name))
        .collect()
}

/// Runs the selected properties in registry order. Trials run sequentially;
/// each owns its seed, so the order never affects results.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let mut properties = Vec::new();
    let mut theorem_violation = false;
    for p in selected(config) {
        let (report, theorem) = run_property(&p, config, |_| {});
        theorem_violation |= theorem;
        properties.push(report);
    }
    SuiteReport {
        config: config.clone(),
        properties,
        theorem_violation,
    }
}

/// Re-evaluates a dumped failure on its stored instance and tolerances.
pub fn replay(dump: &Value) -> Result<TrialRecord, CliError> {
    let name = dump
        .get("property")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Input("failure dump is missing \"property\"".into()))?;
    let property = properties::find(name).ok_or_else(|| CliError::Input(format!("unknown property {name:?}")))?;
    let instance = dump
        .get("instance")
        .ok_or_else(|| CliError::Input("failure dump is missing \"instance\"".into()))?;
    let tolerances: Tolerances = match dump.get("tolerances") {
        Some(t) => serde_json::from_value(t.clone()).map_err(|e| CliError::Input(format!("tolerances: {e}")))?,
        None => Tolerances::default(),
    };
    let result = (property.evaluate)(instance, &tolerances);
    if let Err(Error::Parse(msg)) = &result {
        return Err(CliError::Input(format!("instance: {msg}")));
    }
    let (checks, error, theorem_violation) = split(result);
    Ok(TrialRecord {
        property: name.into(),
        n: dump.get("n").and_then(Value::as_u64).map(|n| n as usize),
        trial: dump.get("trial").and_then(Value::as_u64).unwrap_or(0),
        trial_seed: dump
            .get("trial_seed")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .into(),
        checks,
        error,
        theorem_violation,
    })
}
