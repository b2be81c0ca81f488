//! Ground-field scalars.
//!
//! Two arithmetic modes share one trait: exact Gaussian rationals
//! (`Complex<BigRational>`) for identity checks, and `Complex64` for
//! spectral work. Code in this crate is generic over [`Scalar`]; the mode is
//! fixed by the type parameter, so a single computation can never mix them.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{DynMatrix, Matrix};

/// Exact scalar: a + b i with a, b arbitrary-precision rationals.
pub type GaussRational = Complex<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::Approx),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

pub trait Scalar: Num + Clone + Debug + Neg<Output = Self> + Send + Sync + 'static {
    const MODE: Mode;

    fn from_gauss(z: &GaussRational) -> Self;

    /// The exact value, when this scalar is exact.
    fn to_gauss(&self) -> Option<GaussRational>;

    fn to_c64(&self) -> Complex64;

    /// The same value in this mode, when this mode is approximate.
    fn from_c64(z: Complex64) -> Option<Self>;

    /// Zero test. Exact scalars ignore `bound`; approximate scalars compare
    /// their modulus against it.
    fn is_negligible(&self, bound: f64) -> bool;

    /// Principal square root if it lies in the field of this mode.
    fn sqrt_in_field(&self) -> Option<Self>;

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self>;

    fn wrap_matrix(m: Matrix<Self>) -> DynMatrix;

    fn from_i64(v: i64) -> Self {
        Self::from_gauss(&gauss(v, 1, 0, 1))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_gauss(&gauss(num, den, 0, 1))
    }

    fn imag_unit() -> Self {
        Self::from_gauss(&gauss(0, 1, 1, 1))
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// `(re_num/re_den) + (im_num/im_den) i`.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRational {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

/// Principal square root: argument in (-pi, pi] halved, negative reals go
/// to `i * sqrt(|x|)` regardless of the sign of a zero imaginary part.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        Complex64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact principal square root of a Gaussian rational, if it is one.
pub fn gauss_sqrt(z: &GaussRational) -> Option<GaussRational> {
    let two = BigRational::from_integer(BigInt::from(2));
    let modulus = rational_sqrt(&(&z.re * &z.re + &z.im * &z.im))?;
    let x = rational_sqrt(&((&modulus + &z.re) / &two))?;
    let mut y = rational_sqrt(&((&modulus - &z.re) / &two))?;
    if z.im.is_negative() {
        y = -y;
    }
    let root = Complex::new(x, y);
    (&root * &root == *z).then_some(root)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats as `"p/q+r/s i"`; integral parts drop the denominator.
pub fn format_gauss(z: &GaussRational) -> String {
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{} i", fmt_rational(&z.re), sign, fmt_rational(&z.im.abs()))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    BigRational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Parses `"p/q+r/s i"`, `"p/q"`, `"r/s i"`, `"i"`, with optional spaces.
pub fn parse_gauss(text: &str) -> Result<GaussRational> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_rational(&s)?, BigRational::zero()));
    };
    // split at the last sign that is not leading
    let split = body
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .next_back();
    let (re, im) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other)?,
    };
    Ok(Complex::new(re, im))
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for GaussRational {
    const MODE: Mode = Mode::Exact;

    fn from_gauss(z: &GaussRational) -> Self {
        z.clone()
    }

    fn to_gauss(&self) -> Option<GaussRational> {
        Some(self.clone())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn from_c64(_z: Complex64) -> Option<Self> {
        None
    }

    fn is_negligible(&self, _bound: f64) -> bool {
        self.is_zero()
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        gauss_sqrt(self)
    }

    fn to_json(&self) -> Value {
        Value::String(format_gauss(self))
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => parse_gauss(s),
            Value::Number(n) => match n.as_i64() {
                Some(v) => Ok(Self::from_i64(v)),
                None => Err(Error::Parse(format!(
                    "exact scalars must be strings or integers, got {n}"
                ))),
            },
            other => Err(Error::Parse(format!("expected exact scalar, got {other}"))),
        }
    }

    fn wrap_matrix(m: Matrix<Self>) -> DynMatrix {
        DynMatrix::Exact(m)
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Approx;

    fn from_gauss(z: &GaussRational) -> Self {
        z.to_c64()
    }

    fn to_gauss(&self) -> Option<GaussRational> {
        None
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn is_negligible(&self, bound: f64) -> bool {
        self.norm() <= bound
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        Some(principal_sqrt(*self))
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(value: &Value) -> Result<Self> {
        let num = |v: &Value| {
            v.as_f64()
                .ok_or_else(|| Error::Parse(format!("expected number, got {v}")))
        };
        match value {
            Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(num(&parts[0])?, num(&parts[1])?)),
            Value::Number(_) => Ok(Complex64::new(num(value)?, 0.0)),
            Value::String(s) => parse_gauss(s).map(|z| z.to_c64()),
            other => Err(Error::Parse(format!(
                "expected [re, im] pair for approx scalar, got {other}"
            ))),
        }
    }

    fn wrap_matrix(m: Matrix<Self>) -> DynMatrix {
        DynMatrix::Approx(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let z = gauss(1, 2, -3, 4);
        assert_eq!(format_gauss(&z), "1/2-3/4 i");
        assert_eq!(parse_gauss("1/2-3/4 i").unwrap(), z);
        assert_eq!(parse_gauss("-1/2+3/4i").unwrap(), gauss(-1, 2, 3, 4));
        assert_eq!(parse_gauss("7").unwrap(), gauss(7, 1, 0, 1));
        assert_eq!(parse_gauss("-i").unwrap(), gauss(0, 1, -1, 1));
        assert_eq!(parse_gauss("2/3 i").unwrap(), gauss(0, 1, 2, 3));
        assert_eq!(format_gauss(&gauss(3, 1, 0, 1)), "3+0 i");
        assert!(parse_gauss("1/0").is_err() || parse_gauss("x").is_err());
        assert!(parse_gauss("abc").is_err());
    }

    #[test]
    fn exact_square_roots_follow_principal_branch() {
        assert_eq!(gauss_sqrt(&gauss(4, 9, 0, 1)), Some(gauss(2, 3, 0, 1)));
        assert_eq!(gauss_sqrt(&gauss(-1, 1, 0, 1)), Some(gauss(0, 1, 1, 1)));
        // (1 + 2i)^2 = -3 + 4i, (1 - 2i)^2 = -3 - 4i
        assert_eq!(gauss_sqrt(&gauss(-3, 1, 4, 1)), Some(gauss(1, 1, 2, 1)));
        assert_eq!(gauss_sqrt(&gauss(-3, 1, -4, 1)), Some(gauss(1, 1, -2, 1)));
        assert_eq!(gauss_sqrt(&gauss(2, 1, 0, 1)), None);
        assert_eq!(gauss_sqrt(&gauss(0, 1, 2, 1)), Some(gauss(1, 1, 1, 1)));
    }

    #[test]
    fn approx_branch_cut() {
        let r = principal_sqrt(Complex64::new(-4.0, -0.0));
        assert_eq!(r, Complex64::new(0.0, 2.0));
        let r = principal_sqrt(Complex64::new(0.0, 2.0));
        assert!((r - Complex64::new(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn json_scalars() {
        let z = gauss(1, 3, 2, 1);
        let v = z.to_json();
        assert_eq!(v, Value::String("1/3+2 i".into()));
        assert_eq!(GaussRational::from_json(&v).unwrap(), z);
        let w = Complex64::new(0.5, -1.0);
        assert_eq!(Complex64::from_json(&w.to_json()).unwrap(), w);
        assert!(Complex64::from_json(&serde_json::json!([1.0])).is_err());
        assert!(GaussRational::from_json(&serde_json::json!(0.5)).is_err());
    }
}
