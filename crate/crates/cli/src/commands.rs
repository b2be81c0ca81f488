use orbit_embed::{
    canonical_k_rep, collapsing_pairs, continuous_representatives, discrete_representatives, find_conjugator,
    gamma_table, obstruction_check, symplectic_witness, Approx, Exact, Matrix, Mode, Scalar, Tolerances,
};
use serde_json::{json, Value};

use crate::config::{Format, SuiteConfig};
use crate::instance::{self, ConjugateInput, WitnessInput};
use crate::properties::{witness_checks, Check};
use crate::suite::{self, conventions, TrialRecord};
use crate::{core_exit_code, CliError, EXIT_FAILURE, EXIT_INPUT, EXIT_PASS, EXIT_THEOREM};

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn render(value: &Value, text: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(),
    }
}

pub fn verify(config: &SuiteConfig) -> Output {
    let report = suite::run_suite(config);
    Output {
        text: render(&report.to_json("verify"), || report.to_text(), config.format),
        code: report.exit_code(),
    }
}

/// Like `verify`, but reports only the failing trials, each as a
/// replayable dump.
pub fn fuzz(config: &SuiteConfig) -> Output {
    let report = suite::run_suite(config);
    let failures: Vec<&suite::Failure> = report.properties.iter().flat_map(|p| &p.failures).collect();
    let trials: u64 = report.properties.iter().map(|p| p.trials).sum();
    let value = json!({
        "schema": 1,
        "command": "fuzz",
        "config": config.to_json(),
        "tolerances": config.tolerances,
        "conventions": conventions(),
        "trials": trials,
        "failures": failures,
    });
    let text = || {
        let mut out = format!("{trials} trials, {} failures\n", failures.len());
        for f in &failures {
            let r = &f.record;
            out += &format!("{} n {:?} trial {} seed {}\n", r.property, r.n, r.trial, r.trial_seed);
        }
        out
    };
    Output {
        text: render(&value, text, config.format),
        code: report.exit_code(),
    }
}

/// Dumps inside a file: a single failure, a fuzz report, or a verify report.
fn collect_dumps(v: &Value) -> Result<Vec<&Value>, CliError> {
    if v.get("property").is_some() {
        return Ok(vec![v]);
    }
    if let Some(f) = v.get("failures").and_then(Value::as_array) {
        return Ok(f.iter().collect());
    }
    if let Some(props) = v.get("properties").and_then(Value::as_array) {
        return Ok(props
            .iter()
            .filter_map(|p| p.get("failures").and_then(Value::as_array))
            .flatten()
            .collect());
    }
    Err(CliError::Input(
        "expected a failure dump or a report with failures".into(),
    ))
}

fn same_checks(record: &TrialRecord, dump: &Value) -> bool {
    let dumped: Vec<Check> = dump
        .get("checks")
        .and_then(Value::as_array)
        .map(|cs| {
            cs.iter()
                .filter_map(|c| {
                    Some(Check {
                        name: c.get("name")?.as_str()?.into(),
                        residual: c.get("residual")?.as_f64()?,
                        bound: c.get("bound")?.as_f64()?,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    let error = dump.get("error").and_then(Value::as_str).map(String::from);
    dumped == record.checks && error == record.error
}

pub fn replay(v: &Value, format: Format) -> Result<Output, CliError> {
    let mut records = Vec::new();
    let mut code = EXIT_PASS;
    for dump in collect_dumps(v)? {
        let record = suite::replay(dump)?;
        let reproduced = same_checks(&record, dump);
        if record.theorem_violation {
            code = EXIT_THEOREM;
        } else if !record.passed() && code == EXIT_PASS {
            code = EXIT_FAILURE;
        }
        records.push(json!({"record": record, "passed": record.passed(), "reproduced": reproduced}));
    }
    let value = json!({"schema": 1, "command": "replay", "records": records});
    let text = || {
        records
            .iter()
            .map(|r| {
                format!(
                    "{} trial {}: passed {} reproduced {}\n",
                    r["record"]["property"], r["record"]["trial"], r["passed"], r["reproduced"]
                )
            })
            .collect()
    };
    Ok(Output {
        text: render(&value, text, format),
        code,
    })
}

fn witness_in<S: Scalar>(v: &Value, tol: &Tolerances, format: Format) -> Result<Output, CliError> {
    let inp = WitnessInput::<S>::parse(v)?;
    let report = match symplectic_witness(&inp.ctx, &inp.x, &inp.y, &inp.g, inp.constraint, inp.alpha, tol) {
        Ok(r) => r,
        Err(e) if core_exit_code(&e) == EXIT_INPUT => return Err(e.into()),
        Err(e) => {
            let value = json!({
                "schema": 1, "command": "witness", "verified": false,
                "error": e.to_string(), "tolerances": tol,
            });
            return Ok(Output {
                text: render(&value, || format!("witness failed: {e}\n"), format),
                code: core_exit_code(&e),
            });
        }
    };
    let n = inp.ctx.n();
    let checks = match &report.witness {
        orbit_embed::DynMatrix::Exact(w) => {
            let to_q = |s: &S| s.to_gauss().expect("exact witness from exact input");
            witness_checks(n, w, &inp.x.map(to_q), &inp.y.map(to_q), inp.constraint, tol)?
        }
        orbit_embed::DynMatrix::Approx(w) => {
            witness_checks(n, w, &inp.x.map(S::to_c64), &inp.y.map(S::to_c64), inp.constraint, tol)?
        }
    };
    let verified = checks.iter().all(Check::passed);
    let value = json!({
        "schema": 1,
        "command": "witness",
        "verified": verified,
        "report": report.to_json(),
        "checks": checks,
    });
    let text = || {
        let mut out = format!(
            "witness {} (mode {}{})\n",
            if verified { "verified" } else { "NOT verified" },
            report.mode.as_str(),
            if report.switched_to_approx() {
                ", switched from exact"
            } else {
                ""
            }
        );
        out += &format!("w = {}\n", report.witness.to_json());
        for c in &checks {
            out += &format!("  {:<22} {:.3e} <= {:.3e}\n", c.name, c.residual, c.bound);
        }
        out
    };
    Ok(Output {
        text: render(&value, text, format),
        code: if verified { EXIT_PASS } else { EXIT_FAILURE },
    })
}

pub fn witness(v: &Value, tol: &Tolerances, format: Format) -> Result<Output, CliError> {
    instance::check_schema(v)?;
    match instance::mode(v)? {
        Mode::Exact => witness_in::<Exact>(v, tol, format),
        Mode::Approx => witness_in::<Approx>(v, tol, format),
    }
}

fn conjugate_in<S: Scalar>(v: &Value, tol: &Tolerances, format: Format) -> Result<Output, CliError> {
    let inp = ConjugateInput::<S>::parse(v)?;
    let search = find_conjugator(&inp.ctx, &inp.x, &inp.y, inp.constraint, tol, inp.seed)?;
    let value = json!({
        "schema": 1,
        "command": "conjugate",
        "constraint": inp.constraint,
        "search": search.to_json(),
        "tolerances": tol,
    });
    let text = || match search.found() {
        Some(g) => format!("conjugator found: {}\n", g.matrix().to_json()),
        None => format!("no conjugator ({})\n", search.to_json()["verdict"]),
    };
    Ok(Output {
        text: render(&value, text, format),
        code: EXIT_PASS,
    })
}

pub fn conjugate(v: &Value, tol: &Tolerances, format: Format) -> Result<Output, CliError> {
    instance::check_schema(v)?;
    match instance::mode(v)? {
        Mode::Exact => conjugate_in::<Exact>(v, tol, format),
        Mode::Approx => conjugate_in::<Approx>(v, tol, format),
    }
}

fn invariants_in<S: Scalar>(v: &Value, k_max: usize, format: Format) -> Result<Output, CliError> {
    let x = instance::element::<S>(v, "X")?;
    let table = gamma_table(&x, k_max)?;
    let values: Vec<Value> = table.iter().map(|t| t.to_json()).collect();
    let value = json!({"schema": 1, "command": "invariants", "mode": S::MODE, "dim": x.dim(), "gamma": values});
    let text = || {
        table
            .iter()
            .map(|t| format!("Gamma_{} = {}\n", t.k, t.value.to_json()))
            .collect()
    };
    Ok(Output {
        text: render(&value, text, format),
        code: EXIT_PASS,
    })
}

pub fn invariants(v: &Value, k_max: usize, format: Format) -> Result<Output, CliError> {
    instance::check_schema(v)?;
    match instance::mode(v)? {
        Mode::Exact => invariants_in::<Exact>(v, k_max, format),
        Mode::Approx => invariants_in::<Approx>(v, k_max, format),
    }
}

fn m2(rows: &[&[i64]]) -> Matrix<Exact> {
    Matrix::from_i64(rows)
}

/// Expected pair count of the representative list.
pub const COLLAPSING_PAIRS: usize = 3;

/// `(x, h, has_root)` cases certified by the case study.
fn obstruction_cases() -> Vec<(Matrix<Exact>, Matrix<Exact>, bool)> {
    let mut cases = Vec::new();
    for a in [1, -1] {
        let x = m2(&[&[a, 1], &[0, a]]);
        for beta in [0, 1, -3] {
            cases.push((x.clone(), m2(&[&[-1, beta], &[0, -1]]), false));
            cases.push((x.clone(), m2(&[&[1, beta], &[0, 1]]), true));
        }
    }
    for x in [m2(&[&[1, 0], &[0, -1]]), m2(&[&[-1, 0], &[0, 1]])] {
        for h in [
            m2(&[&[-1, 0], &[0, -1]]),
            m2(&[&[1, 0], &[0, -1]]),
            m2(&[&[-1, 0], &[0, 1]]),
        ] {
            cases.push((x.clone(), h, false));
        }
        cases.push((x, Matrix::identity(2), true));
    }
    cases
}

pub fn case_gl2(format: Format) -> Result<Output, CliError> {
    let mut reps = discrete_representatives();
    reps.extend(continuous_representatives(&[2, 3, 5, 7]));
    let rep_rows = reps
        .iter()
        .map(|x| Ok(json!({"x": x.to_json(), "k_rep": canonical_k_rep(x, 0.0)?.to_json()})))
        .collect::<Result<Vec<Value>, CliError>>()?;
    let pairs = collapsing_pairs()?;
    let mut obstructions = Vec::new();
    let mut verdicts_ok = true;
    for (x, h, expected) in obstruction_cases() {
        let cert = obstruction_check(&x, &h, 0.0)?;
        verdicts_ok &= cert.has_root() == expected;
        obstructions.push(cert.to_json());
    }
    let reproduced = pairs.len() == COLLAPSING_PAIRS && pairs.iter().all(|p| p.k_reps_distinct) && verdicts_ok;
    let value = json!({
        "schema": 1,
        "command": "case-gl2",
        "representatives": rep_rows,
        "collapsing_pairs": pairs.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "obstructions": obstructions,
        "reproduced": reproduced,
    });
    let text = || {
        let mut out = format!("{} collapsing pairs (expected {COLLAPSING_PAIRS})\n", pairs.len());
        for p in &pairs {
            out += &format!(
                "  {} ~ {} via g = {}, K-inequivalent: {}\n",
                p.first.to_json(),
                p.second.to_json(),
                p.conjugator.to_json(),
                p.k_reps_distinct
            );
        }
        out += &format!("obstruction verdicts as expected: {verdicts_ok}\n");
        out
    };
    Ok(Output {
        text: render(&value, text, format),
        code: if reproduced { EXIT_PASS } else { EXIT_FAILURE },
    })
}
