//! Instance files for the `witness`, `conjugate` and `invariants` commands.
//!
//! ```json
//! {"schema": 1, "mode": "exact", "n": 1, "alpha": -1, "constraint": "symplectic",
//!  "X": {"u": [..], "v": [..], "A": [[..]]}, "Y": {..}, "g": [[..]]}
//! ```
//!
//! Exact scalars are integers or strings like `"3/2"`, `"1-2i"`; approx
//! scalars are `[re, im]` pairs or plain numbers.

use orbit_embed::{AlphaSign, EnhancedElement, GroupConstraint, GroupElement, Matrix, Mode, Scalar, SymplecticContext};
use serde_json::Value;

use crate::CliError;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn read_json(path: &std::path::Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| input(format!("missing field {key:?}")))
}

pub fn check_schema(v: &Value) -> Result<(), CliError> {
    if !v.is_object() {
        return Err(input("instance must be a JSON object"));
    }
    match get(v, "schema")?.as_u64() {
        Some(1) => Ok(()),
        _ => Err(input(format!("unsupported schema {}", v["schema"]))),
    }
}

pub fn mode(v: &Value) -> Result<Mode, CliError> {
    get(v, "mode")?
        .as_str()
        .ok_or_else(|| input("mode must be a string"))?
        .parse()
        .map_err(|e: orbit_embed::Error| input(e.to_string()))
}

pub fn element<S: Scalar>(v: &Value, key: &str) -> Result<EnhancedElement<S>, CliError> {
    EnhancedElement::from_json(get(v, key)?).map_err(|e| input(format!("{key}: {e}")))
}

fn positive_n(v: &Value) -> Result<usize, CliError> {
    match get(v, "n")?.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(input("n must be a positive integer")),
    }
}

fn check_dim<S: Scalar>(x: &EnhancedElement<S>, n: usize, key: &str) -> Result<(), CliError> {
    if x.dim() != 2 * n {
        return Err(input(format!(
            "{key} has dimension {}, expected 2n = {}",
            x.dim(),
            2 * n
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct WitnessInput<S> {
    pub ctx: SymplecticContext<S>,
    pub alpha: AlphaSign,
    pub constraint: GroupConstraint,
    pub x: EnhancedElement<S>,
    pub y: EnhancedElement<S>,
    pub g: GroupElement<S>,
}

impl<S: Scalar> WitnessInput<S> {
    /// Structural validation only; membership in `L` and `g · X = Y` are
    /// checked by the witness extraction itself.
    pub fn parse(v: &Value) -> Result<Self, CliError> {
        check_schema(v)?;
        let n = positive_n(v)?;
        let alpha = AlphaSign::from_i64(
            get(v, "alpha")?
                .as_i64()
                .ok_or_else(|| input("alpha must be +1 or -1"))?,
        )
        .map_err(|e| input(e.to_string()))?;
        let constraint: GroupConstraint = get(v, "constraint")?
            .as_str()
            .ok_or_else(|| input("constraint must be a string"))?
            .parse()
            .map_err(|e: orbit_embed::Error| input(e.to_string()))?;
        let x = element(v, "X")?;
        let y = element(v, "Y")?;
        check_dim(&x, n, "X")?;
        check_dim(&y, n, "Y")?;
        let g: Matrix<S> = Matrix::from_json(get(v, "g")?).map_err(|e| input(format!("g: {e}")))?;
        if g.rows() != 2 * n || g.cols() != 2 * n {
            return Err(input(format!(
                "g is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                2 * n,
                2 * n
            )));
        }
        let g = GroupElement::new(g).map_err(|e| input(format!("g: {e}")))?;
        Ok(WitnessInput {
            ctx: SymplecticContext::new(n),
            alpha,
            constraint,
            x,
            y,
            g,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConjugateInput<S> {
    pub ctx: SymplecticContext<S>,
    pub constraint: GroupConstraint,
    pub x: EnhancedElement<S>,
    pub y: EnhancedElement<S>,
    pub seed: u64,
}

impl<S: Scalar> ConjugateInput<S> {
    pub fn parse(v: &Value) -> Result<Self, CliError> {
        check_schema(v)?;
        let n = positive_n(v)?;
        let constraint = match v.get("constraint") {
            None => GroupConstraint::Full,
            Some(c) => c
                .as_str()
                .ok_or_else(|| input("constraint must be a string"))?
                .parse()
                .map_err(|e: orbit_embed::Error| input(e.to_string()))?,
        };
        let x = element(v, "X")?;
        let y = element(v, "Y")?;
        check_dim(&x, n, "X")?;
        check_dim(&y, n, "Y")?;
        let seed = match v.get("seed") {
            None => 0,
            Some(s) => s.as_u64().ok_or_else(|| input("seed must be a non-negative integer"))?,
        };
        Ok(ConjugateInput {
            ctx: SymplecticContext::new(n),
            constraint,
            x,
            y,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbit_embed::Exact;
    use serde_json::json;

    fn trivial() -> Value {
        json!({
            "schema": 1, "mode": "exact", "n": 1, "alpha": -1, "constraint": "symplectic",
            "X": {"u": [0, 0], "v": [0, 0], "A": [[1, 0], [0, -1]]},
            "Y": {"u": [0, 0], "v": [0, 0], "A": [[1, 0], [0, -1]]},
            "g": [[1, 0], [0, 1]],
        })
    }

    #[test]
    fn parses_and_rejects() {
        assert!(WitnessInput::<Exact>::parse(&trivial()).is_ok());
        for (key, bad) in [
            ("schema", json!(2)),
            ("n", json!(0)),
            ("alpha", json!(3)),
            ("constraint", json!("orthogonal")),
            ("g", json!([[1, 0]])),
            ("g", json!([[1, 1], [1, 1]])),
            ("X", json!({"u": [0], "v": [0], "A": [[0]]})),
        ] {
            let mut v = trivial();
            v[key] = bad;
            let err = WitnessInput::<Exact>::parse(&v).unwrap_err();
            assert_eq!(err.exit_code(), crate::EXIT_INPUT, "{key}");
        }
    }
}
