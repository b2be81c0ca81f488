//! Elements of `V ⊕ V* ⊕ End(V)`, the twisted group action and the
//! involution `sigma_L` whose (anti-)fixed loci are the spaces `L`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::negligible;
use crate::matrix::{Matrix, Variance, Vector};
use crate::scalar::Scalar;
use crate::symplectic::{GroupElement, SymplecticContext};

/// `X = (u, v^T) + A`. The covector is stored through its representing
/// vector `v`; no hidden `J` is applied on storage.
#[derive(Clone, Debug, PartialEq)]
pub struct EnhancedElement<S> {
    pub u: Vector<S>,
    pub v: Vector<S>,
    pub a: Matrix<S>,
}

/// The global sign `alpha` in `L = { X : sigma_L(X) = alpha X }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AlphaSign {
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "1")]
    Plus,
}

impl AlphaSign {
    pub fn value(self) -> i64 {
        match self {
            AlphaSign::Minus => -1,
            AlphaSign::Plus => 1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(AlphaSign::Minus),
            1 => Ok(AlphaSign::Plus),
            other => Err(Error::Parse(format!("alpha must be +1 or -1, got {other}"))),
        }
    }

    pub fn scalar<S: Scalar>(self) -> S {
        S::from_i64(self.value())
    }
}

impl<S: Scalar> EnhancedElement<S> {
    pub fn new(u: Vector<S>, v: Vector<S>, a: Matrix<S>) -> Result<Self> {
        let d = u.dim();
        if v.dim() != d || a.rows() != d || a.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "u has dim {d}, v has dim {}, A is {}x{}",
                v.dim(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(EnhancedElement {
            u: Vector {
                variance: Variance::Vector,
                ..u
            },
            v: Vector {
                variance: Variance::Covector,
                ..v
            },
            a,
        })
    }

    pub fn zero(dim: usize) -> Self {
        EnhancedElement {
            u: Vector::zeros(dim),
            v: Vector::covector(vec![S::zero(); dim]),
            a: Matrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn scale(&self, c: &S) -> Self {
        EnhancedElement {
            u: self.u.scale(c),
            v: self.v.scale(c),
            a: self.a.scale(c),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(EnhancedElement {
            u: self.u.try_sub(&other.u)?,
            v: self.v.try_sub(&other.v)?,
            a: self.a.try_sub(&other.a)?,
        })
    }

    /// Euclidean norm over all three components.
    pub fn norm(&self) -> f64 {
        (self.u.norm().powi(2) + self.v.norm().powi(2) + self.a.norm().powi(2)).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero() && self.a.is_zero()
    }

    pub fn dist(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.norm())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> EnhancedElement<T> {
        EnhancedElement {
            u: self.u.map(f),
            v: self.v.map(f),
            a: self.a.map(f),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "u": self.u.to_json(), "v": self.v.to_json(), "A": self.a.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |k: &str| {
            value
                .get(k)
                .ok_or_else(|| Error::Parse(format!("enhanced element is missing {k:?}")))
        };
        let u = Vector::from_json(field("u")?, Variance::Vector)?;
        let v = Vector::from_json(field("v")?, Variance::Covector)?;
        let a = Matrix::from_json(field("A")?)?;
        Self::new(u, v, a).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl<S: Scalar> SymplecticContext<S> {
    fn check_element(&self, x: &EnhancedElement<S>) -> Result<()> {
        self.check_vec(&x.u, "u")?;
        self.check_vec(&x.v, "v")?;
        self.check_mat(&x.a, "A")
    }

    /// `g · X = (g u, (theta(g) v)^T) + g A g^{-1}`.
    pub fn act(&self, g: &GroupElement<S>, x: &EnhancedElement<S>) -> Result<EnhancedElement<S>> {
        self.check_element(x)?;
        self.check_mat(g.matrix(), "g")?;
        let theta = self.theta_group(g)?;
        Ok(EnhancedElement {
            u: x.u.apply(g.matrix())?,
            v: x.v.apply(theta.matrix())?,
            a: g.matrix().try_mul(&x.a)?.try_mul(g.inverse())?,
        })
    }

    /// `(u, v^T) + A -> (v, u^T) + sigma(A)`.
    pub fn sigma_l(&self, x: &EnhancedElement<S>) -> Result<EnhancedElement<S>> {
        self.check_element(x)?;
        Ok(EnhancedElement {
            u: Vector::new(x.v.entries.clone()),
            v: Vector::covector(x.u.entries.clone()),
            a: self.sigma_end(&x.a)?,
        })
    }

    /// `|sigma_L(X) - alpha X|`.
    pub fn l_defect(&self, x: &EnhancedElement<S>, alpha: AlphaSign) -> Result<f64> {
        self.sigma_l(x)?.dist(&x.scale(&alpha.scalar()))
    }

    /// `sigma_L(X) = alpha X`, exactly or within `tol * (1 + |X|)`.
    pub fn in_l(&self, x: &EnhancedElement<S>, alpha: AlphaSign, tol: f64) -> Result<bool> {
        let diff = self.sigma_l(x)?.try_sub(&x.scale(&alpha.scalar()))?;
        let bound = tol * (1.0 + x.norm());
        Ok(negligible(&Matrix::from_rows(vec![diff.u.entries.clone()])?, bound)
            && negligible(&Matrix::from_rows(vec![diff.v.entries.clone()])?, bound)
            && negligible(&diff.a, bound))
    }

    /// `(u, alpha u^T) + A`, requiring `sigma(A) = alpha A`.
    pub fn embed_l(&self, u: &Vector<S>, a: &Matrix<S>, alpha: AlphaSign, tol: f64) -> Result<EnhancedElement<S>> {
        self.check_vec(u, "u")?;
        let defect = self.sigma_end(a)?.try_sub(&a.scale(&alpha.scalar()))?;
        if !negligible(&defect, tol * (1.0 + a.norm())) {
            return Err(Error::Precondition(format!(
                "A must satisfy sigma(A) = {} A",
                alpha.value()
            )));
        }
        EnhancedElement::new(u.clone(), u.scale(&alpha.scalar()), a.clone())
    }
}
