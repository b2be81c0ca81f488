//! Polynomial invariants `Gamma_k` on the enhanced algebra and `gamma_k` on
//! `V ⊕ sp(V)`.
//!
//! The covector `v^T` is paired with vectors through the form,
//! `xi(x) = v^T J x`. This is the pairing under which the twisted action on
//! the covector part is contragredient, so `Gamma_k` is invariant. With the
//! plain pairing `v^T x` it is not.

use serde::Serialize;
use serde_json::Value;

use crate::enhanced::{AlphaSign, EnhancedElement};
use crate::error::{Error, Result};
use crate::linalg::negligible;
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::symplectic::SymplecticContext;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantValue<S> {
    pub k: usize,
    pub value: S,
}

impl<S: Scalar> InvariantValue<S> {
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "k": self.k, "value": self.value.to_json() })
    }
}

/// `A^k x` by repeated multiplication.
fn power_apply<S: Scalar>(a: &Matrix<S>, x: &[S], k: usize) -> Result<Vec<S>> {
    let mut out = x.to_vec();
    for _ in 0..k {
        out = a.mul_vec(&out)?;
    }
    Ok(out)
}

/// `v^T J x` for the standard `J`.
fn form_pairing<S: Scalar>(v: &[S], x: &[S]) -> S {
    let n = v.len() / 2;
    // J x = (x_2, -x_1)
    (0..n).fold(S::zero(), |acc, i| {
        acc + v[i].clone() * x[n + i].clone() - v[n + i].clone() * x[i].clone()
    })
}

/// `Gamma_k(X) = xi(A^k u)`.
pub fn gamma_big<S: Scalar>(x: &EnhancedElement<S>, k: usize) -> Result<S> {
    if !x.dim().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!("odd dimension {}", x.dim())));
    }
    Ok(form_pairing(&x.v.entries, &power_apply(&x.a, &x.u.entries, k)?))
}

/// `gamma_k(v, A) = <v, A^k v>` for `A` in `sp`.
pub fn gamma_small<S: Scalar>(
    ctx: &SymplecticContext<S>,
    v: &Vector<S>,
    a: &Matrix<S>,
    k: usize,
    tol: f64,
) -> Result<S> {
    ctx.check_vec(v, "v")?;
    let defect = ctx.sigma_end(a)?.try_add(a)?;
    if !negligible(&defect, tol * (1.0 + a.norm())) {
        return Err(Error::Precondition("A is not in sp".into()));
    }
    Ok(form_pairing(&v.entries, &power_apply(a, &v.entries, k)?))
}

pub fn gamma_table<S: Scalar>(x: &EnhancedElement<S>, k_max: usize) -> Result<Vec<InvariantValue<S>>> {
    (0..=k_max)
        .map(|k| {
            Ok(InvariantValue {
                k,
                value: gamma_big(x, k)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionCheck {
    pub k: usize,
    /// `+1` or `-1`; `None` when both sides vanish and either sign works.
    pub sign: Option<i64>,
    pub holds: bool,
}

/// Compares `Gamma_k(u, -u^T, A)` with `gamma_k(u, A)` and reports the sign
/// relating them.
pub fn restriction_identity_check<S: Scalar>(
    ctx: &SymplecticContext<S>,
    u: &Vector<S>,
    a: &Matrix<S>,
    k: usize,
    tol: f64,
) -> Result<RestrictionCheck> {
    let x = ctx.embed_l(u, a, AlphaSign::Minus, tol)?;
    let big = gamma_big(&x, k)?;
    let small = gamma_small(ctx, u, a, k, tol)?;
    let bound = tol * (1.0 + big.magnitude().max(small.magnitude()));
    let plus = (big.clone() - small.clone()).is_negligible(bound);
    let minus = (big + small.clone()).is_negligible(bound);
    let sign = match (plus, minus) {
        (true, true) => None,
        (true, false) => Some(1),
        (false, true) => Some(-1),
        (false, false) => None,
    };
    Ok(RestrictionCheck {
        k,
        sign,
        holds: plus || minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use crate::symplectic::GroupElement;

    type Q = GaussRational;

    fn elt(u: &[i64], v: &[i64], a: &[&[i64]]) -> EnhancedElement<Q> {
        EnhancedElement::new(Vector::from_i64(u), Vector::from_i64(v), Matrix::from_i64(a)).unwrap()
    }

    #[test]
    fn gamma_big_values() {
        let x = elt(&[1, 0], &[0, 1], &[&[0, 0], &[0, 0]]);
        assert_eq!(gamma_big(&x, 0).unwrap(), Q::from_i64(-1));
        let x = elt(&[0, 1], &[1, 0], &[&[0, 1], &[0, 0]]);
        assert_eq!(gamma_big(&x, 1).unwrap(), Q::from_i64(0));
        let x = elt(&[0, 1], &[0, 1], &[&[0, 1], &[0, 0]]);
        assert_eq!(gamma_big(&x, 1).unwrap(), Q::from_i64(-1));
    }

    #[test]
    fn gamma_big_is_invariant_but_plain_pairing_is_not() {
        let ctx = SymplecticContext::<Q>::new(1);
        let x = elt(&[1, 2], &[3, -1], &[&[1, 2], &[0, 3]]);
        let g = GroupElement::new(Matrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let y = ctx.act(&g, &x).unwrap();
        for k in 0..5 {
            assert_eq!(gamma_big(&x, k).unwrap(), gamma_big(&y, k).unwrap());
        }
        let plain = |e: &EnhancedElement<Q>| e.v.dot(&e.u);
        assert_ne!(plain(&x), plain(&y));
    }

    #[test]
    fn gamma_small_values() {
        let ctx = SymplecticContext::<Q>::new(1);
        let v = Vector::from_i64(&[1, 1]);
        let a = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(gamma_small(&ctx, &v, &a, 0, 0.0).unwrap(), Q::from_i64(0));
        assert_eq!(gamma_small(&ctx, &v, &a, 1, 0.0).unwrap(), Q::from_i64(-2));
        assert_eq!(gamma_small(&ctx, &v, &a, 2, 0.0).unwrap(), Q::from_i64(0));
        assert!(gamma_small(&ctx, &v, &Matrix::identity(2), 1, 0.0).is_err());
    }

    #[test]
    fn restriction_sign() {
        let ctx = SymplecticContext::<Q>::new(1);
        let a = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        let zero = restriction_identity_check(&ctx, &Vector::zeros(2), &a, 1, 0.0).unwrap();
        assert!(zero.holds && zero.sign.is_none());
        let r = restriction_identity_check(&ctx, &Vector::from_i64(&[1, 1]), &a, 1, 0.0).unwrap();
        assert_eq!(r.sign, Some(-1));
        let r = restriction_identity_check(&ctx, &Vector::from_i64(&[1, 1]), &a, 2, 0.0).unwrap();
        assert!(r.holds && r.sign.is_none());
    }
}
