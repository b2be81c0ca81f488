//! `GL_2` acting on itself by conjugation, with the involution
//! `sigma5(g) = I11 g^{-1} I11`, its fixed variety `X5`, the diagonal
//! torus `K` and the square-root obstructions that break injectivity.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::enhanced::EnhancedElement;
use crate::error::{Error, Result};
use crate::linalg::negligible;
use crate::matrix::{DynMatrix, Matrix, Vector};
use crate::orbit::{find_conjugator, GroupConstraint};
use crate::scalar::{GaussRational, Scalar};
use crate::symplectic::{GroupElement, SymplecticContext};
use crate::tolerance::Tolerances;

fn i11<S: Scalar>() -> Matrix<S> {
    Matrix::diag(&[S::one(), -S::one()])
}

fn require_2x2<S: Scalar>(m: &Matrix<S>) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `I11^{-1} g^{-1} I11`.
pub fn sigma5<S: Scalar>(g: &GroupElement<S>) -> Result<GroupElement<S>> {
    require_2x2(g.matrix())?;
    let i = i11::<S>();
    let m = i.try_mul(g.inverse())?.try_mul(&i)?;
    let m_inv = i.try_mul(g.matrix())?.try_mul(&i)?;
    Ok(GroupElement::from_parts(m, m_inv))
}

/// `x` invertible with `sigma5(x) = x`.
pub fn in_x5<S: Scalar>(x: &Matrix<S>, tol: f64) -> Result<bool> {
    require_2x2(x)?;
    if !x.is_invertible(tol) {
        return Ok(false);
    }
    let g = GroupElement::new(x.clone())?;
    let diff = sigma5(&g)?.matrix().try_sub(x)?;
    Ok(negligible(&diff, tol * (1.0 + x.norm())))
}

fn require_x5<S: Scalar>(x: &Matrix<S>, tol: f64) -> Result<()> {
    if !in_x5(x, tol)? {
        return Err(Error::Precondition("x is not in X = G^sigma".into()));
    }
    Ok(())
}

fn unipotent_rep<S: Scalar>(a: &S, upper: bool) -> Matrix<S> {
    let (b, c) = if upper {
        (S::one(), S::zero())
    } else {
        (S::zero(), S::one())
    };
    Matrix::from_rows(vec![vec![a.clone(), b], vec![c, a.clone()]]).expect("2x2")
}

fn sign_of<S: Scalar>(a: &S) -> S {
    if a.to_c64().re >= 0.0 {
        S::one()
    } else {
        -S::one()
    }
}

/// Representative of the `K`-orbit of `x` in `X5`, `K` the diagonal torus.
///
/// `[[a, s], [s, a]]` with `s^2 = bc` and `Re s > 0` or `s` in `i R>=0`;
/// `[[a, 1], [0, a]]` or `[[a, 0], [1, a]]` when one of `b`, `c` vanishes;
/// diagonal elements are fixed. Exact inputs move to approx mode when `bc`
/// is not a square of a Gaussian rational.
pub fn canonical_k_rep<S: Scalar>(x: &Matrix<S>, tol: f64) -> Result<DynMatrix> {
    require_x5(x, tol)?;
    let bound = tol * (1.0 + x.norm());
    let (a, b, c) = (x[(0, 0)].clone(), x[(0, 1)].clone(), x[(1, 0)].clone());
    let (b_zero, c_zero) = (b.is_negligible(bound), c.is_negligible(bound));
    Ok(match (b_zero, c_zero) {
        (true, true) => S::wrap_matrix(x.clone()),
        (false, true) => S::wrap_matrix(unipotent_rep(&sign_of(&a), true)),
        (true, false) => S::wrap_matrix(unipotent_rep(&sign_of(&a), false)),
        (false, false) => {
            let bc = b * c;
            match bc.sqrt_in_field() {
                Some(s) => S::wrap_matrix(Matrix::from_rows(vec![vec![a.clone(), s.clone()], vec![s, a]])?),
                None => {
                    let s = crate::scalar::principal_sqrt(bc.to_c64());
                    let a = a.to_c64();
                    DynMatrix::Approx(Matrix::from_rows(vec![vec![a, s], vec![s, a]])?)
                }
            }
        }
    })
}

/// Conjugator `g` with `g x1 g^{-1} = x2`, if one is found.
pub fn gl2_conjugator<S: Scalar>(
    x1: &Matrix<S>,
    x2: &Matrix<S>,
    tol: &Tolerances,
    seed: u64,
) -> Result<Option<GroupElement<S>>> {
    require_2x2(x1)?;
    require_2x2(x2)?;
    let ctx = SymplecticContext::<S>::new(1);
    let lift = |a: &Matrix<S>| EnhancedElement::new(Vector::zeros(2), Vector::zeros(2), a.clone());
    let search = find_conjugator(&ctx, &lift(x1)?, &lift(x2)?, GroupConstraint::Full, tol, seed)?;
    Ok(search.found().cloned())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollapsingPair {
    pub first: Matrix<GaussRational>,
    pub second: Matrix<GaussRational>,
    /// `g` with `g first g^{-1} = second`.
    pub conjugator: Matrix<GaussRational>,
    pub k_reps_distinct: bool,
}

impl CollapsingPair {
    pub fn to_json(&self) -> Value {
        json!({
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "conjugator": self.conjugator.to_json(),
            "k_inequivalent": self.k_reps_distinct,
        })
    }
}

/// The listed `K`-orbit representatives with repeated eigenvalues or
/// diagonal shape.
pub fn discrete_representatives() -> Vec<Matrix<GaussRational>> {
    let mut reps = Vec::new();
    for a in [1, -1] {
        let a = GaussRational::from_i64(a);
        reps.push(unipotent_rep(&a, true));
        reps.push(unipotent_rep(&a, false));
    }
    for (p, q) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        reps.push(Matrix::from_i64(&[&[p, 0], &[0, q]]));
    }
    reps
}

/// Rational points `a = (t^2 + 1) / 2t`, `s = (t^2 - 1) / 2t` of the
/// continuous family, plus `a = 0, s = i`.
pub fn continuous_representatives(params: &[i64]) -> Vec<Matrix<GaussRational>> {
    let mut reps: Vec<_> = params
        .iter()
        .filter(|&&t| t > 1)
        .map(|&t| {
            let a = GaussRational::from_ratio(t * t + 1, 2 * t);
            let s = GaussRational::from_ratio(t * t - 1, 2 * t);
            Matrix::from_rows(vec![vec![a.clone(), s.clone()], vec![s, a]]).expect("2x2")
        })
        .collect();
    let i = GaussRational::imag_unit();
    let z = GaussRational::from_i64(0);
    reps.push(Matrix::from_rows(vec![vec![z.clone(), i.clone()], vec![i, z]]).expect("2x2"));
    reps
}

/// Searches the representative list for distinct representatives that are
/// `G`-conjugate.
pub fn collapsing_pairs() -> Result<Vec<CollapsingPair>> {
    let tol = Tolerances::default();
    let mut reps = discrete_representatives();
    reps.extend(continuous_representatives(&[2, 3, 5, 7]));
    let mut pairs = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let Some(g) = gl2_conjugator(&reps[i], &reps[j], &tol, (i * reps.len() + j) as u64)? else {
                continue;
            };
            let k_reps_distinct = canonical_k_rep(&reps[i], 0.0)? != canonical_k_rep(&reps[j], 0.0)?;
            pairs.push(CollapsingPair {
                first: reps[i].clone(),
                second: reps[j].clone(),
                conjugator: g.matrix().clone(),
                k_reps_distinct,
            });
        }
    }
    Ok(pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerFamily {
    /// `x = [[a, 1], [0, a]]`, `a = ±1`: `G_x^sigma = {[[α, β], [0, α]] : α = ±1}`.
    Unipotent,
    /// `x = diag(±1, ∓1)`: `G_x^sigma = {diag(α, δ) : α^2 = δ^2 = 1}`.
    SplitDiagonal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObstructionVerdict<S> {
    SquareRoot(Matrix<S>),
    NoSquareRoot(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate<S> {
    pub x: Matrix<S>,
    pub h: Matrix<S>,
    pub family: StabilizerFamily,
    pub verdict: ObstructionVerdict<S>,
}

impl<S: Scalar> ObstructionCertificate<S> {
    pub fn has_root(&self) -> bool {
        matches!(self.verdict, ObstructionVerdict::SquareRoot(_))
    }

    pub fn to_json(&self) -> Value {
        let (verdict, f, reason) = match &self.verdict {
            ObstructionVerdict::SquareRoot(f) => ("square-root", f.to_json(), Value::Null),
            ObstructionVerdict::NoSquareRoot(r) => ("no-square-root", Value::Null, Value::String(r.clone())),
        };
        json!({
            "x": self.x.to_json(),
            "h": self.h.to_json(),
            "family": match self.family {
                StabilizerFamily::Unipotent => "unipotent",
                StabilizerFamily::SplitDiagonal => "split-diagonal",
            },
            "verdict": verdict,
            "f": f,
            "reason": reason,
        })
    }
}

fn classify<S: Scalar>(x: &Matrix<S>, bound: f64) -> Option<StabilizerFamily> {
    let one = S::one();
    let is = |v: &S, w: &S| (v.clone() - w.clone()).is_negligible(bound);
    let (a, b, c, d) = (&x[(0, 0)], &x[(0, 1)], &x[(1, 0)], &x[(1, 1)]);
    let unit = |v: &S| is(v, &one) || is(v, &-one.clone());
    if is(a, d) && unit(a) && is(b, &one) && c.is_negligible(bound) {
        return Some(StabilizerFamily::Unipotent);
    }
    if b.is_negligible(bound) && c.is_negligible(bound) && unit(a) && is(d, &-a.clone()) {
        return Some(StabilizerFamily::SplitDiagonal);
    }
    None
}

/// Decides whether `h`, a `sigma5`-fixed element of the centralizer of `x`,
/// is the square of a `sigma5`-fixed element of that centralizer.
pub fn obstruction_check<S: Scalar>(x: &Matrix<S>, h: &Matrix<S>, tol: f64) -> Result<ObstructionCertificate<S>> {
    require_2x2(x)?;
    require_2x2(h)?;
    let bound = tol * (1.0 + x.norm() + h.norm());
    let family =
        classify(x, bound).ok_or_else(|| Error::Precondition("x must be [[±1, 1], [0, ±1]] or diag(±1, ∓1)".into()))?;
    let commutator = x.try_mul(h)?.try_sub(&h.try_mul(x)?)?;
    if !negligible(&commutator, bound) {
        return Err(Error::Precondition("h does not commute with x".into()));
    }
    if !h.is_invertible(tol) || !negligible(&sigma5(&GroupElement::new(h.clone())?)?.matrix().try_sub(h)?, bound) {
        return Err(Error::Precondition("h is not sigma-fixed".into()));
    }
    let one = S::one();
    let is_one = |v: &S| (v.clone() - one.clone()).is_negligible(bound);
    let verdict = match family {
        StabilizerFamily::Unipotent => {
            if is_one(&h[(0, 0)]) && is_one(&h[(1, 1)]) {
                let beta = h[(0, 1)].clone() * S::from_ratio(1, 2);
                ObstructionVerdict::SquareRoot(Matrix::from_rows(vec![
                    vec![one.clone(), beta],
                    vec![S::zero(), one.clone()],
                ])?)
            } else {
                ObstructionVerdict::NoSquareRoot("squares of [[α, β], [0, α]] with α = ±1 have unit diagonal".into())
            }
        }
        StabilizerFamily::SplitDiagonal => {
            if negligible(&h.try_sub(&Matrix::identity(2))?, bound) {
                ObstructionVerdict::SquareRoot(Matrix::identity(2))
            } else {
                ObstructionVerdict::NoSquareRoot("squares of diag(±1, ±1) are all the identity".into())
            }
        }
    };
    if let ObstructionVerdict::SquareRoot(f) = &verdict {
        let fg = GroupElement::new(f.clone())?;
        let checks = [
            f.try_mul(f)?.try_sub(h)?,
            sigma5(&fg)?.matrix().try_sub(f)?,
            f.try_mul(x)?.try_sub(&x.try_mul(f)?)?,
        ];
        if checks.iter().any(|m| !negligible(m, bound)) {
            return Err(Error::TheoremViolation("square-root certificate fails".into()));
        }
    }
    Ok(ObstructionCertificate {
        x: x.clone(),
        h: h.clone(),
        family,
        verdict,
    })
}

/// `[[α, β], [0, α]]`, an element of `G_x^sigma` for unipotent `x` when
/// `α = ±1`.
pub fn unipotent_stabilizer<S: Scalar>(alpha: &S, beta: &S) -> Matrix<S> {
    Matrix::from_rows(vec![vec![alpha.clone(), beta.clone()], vec![S::zero(), alpha.clone()]]).expect("2x2")
}

/// Compares two representatives, converting to approx mode when modes
/// differ.
pub fn reps_equal(a: &DynMatrix, b: &DynMatrix, tol: f64) -> bool {
    match (a, b) {
        (DynMatrix::Exact(x), DynMatrix::Exact(y)) => x == y,
        _ => {
            let (x, y): (Matrix<Complex64>, Matrix<Complex64>) = (a.to_approx(), b.to_approx());
            x.rows() == y.rows() && x.cols() == y.cols() && x.dist(&y) <= tol * (1.0 + x.norm())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    type Q = GaussRational;

    #[test]
    fn sigma5_examples() {
        let e = GroupElement::<Q>::identity(2);
        assert_eq!(sigma5(&e).unwrap().matrix(), &Matrix::identity(2));
        let d = GroupElement::new(Matrix::<Q>::from_i64(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(
            sigma5(&d).unwrap().matrix(),
            &Matrix::diag(&[Q::from_ratio(1, 2), Q::from_ratio(1, 3)])
        );
        let u = GroupElement::new(Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(sigma5(&u).unwrap().matrix(), u.matrix());
    }

    #[test]
    fn membership_examples() {
        assert!(in_x5(&Matrix::<Q>::from_i64(&[&[2, 3], &[1, 2]]), 0.0).unwrap());
        assert!(in_x5(&Matrix::<Q>::from_i64(&[&[1, 0], &[0, -1]]), 0.0).unwrap());
        assert!(!in_x5(&Matrix::diag(&[Q::from_i64(2), Q::from_ratio(1, 2)]), 0.0).unwrap());
    }

    #[test]
    fn canonical_examples() {
        let u = Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(canonical_k_rep(&u, 0.0).unwrap(), DynMatrix::Exact(u.clone()));
        let u5 = Matrix::<Q>::from_i64(&[&[1, 5], &[0, 1]]);
        assert_eq!(canonical_k_rep(&u5, 0.0).unwrap(), DynMatrix::Exact(u));
        let x = Matrix::<Q>::from_i64(&[&[2, 3], &[1, 2]]);
        let r = canonical_k_rep(&x, 0.0).unwrap().to_approx();
        assert!((r[(0, 1)] - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((r[(1, 0)] - r[(0, 1)]).norm() == 0.0);
        // bc = -1 lands on s = i
        let x = Matrix::<Q>::from_i64(&[&[0, 1], &[-1, 0]]);
        let r = canonical_k_rep(&x, 0.0).unwrap();
        assert_eq!(
            r,
            DynMatrix::Exact(
                Matrix::from_rows(vec![
                    vec![gauss(0, 1, 0, 1), gauss(0, 1, 1, 1)],
                    vec![gauss(0, 1, 1, 1), gauss(0, 1, 0, 1)]
                ])
                .unwrap()
            )
        );
        assert!(canonical_k_rep(&Matrix::<Q>::from_i64(&[&[2, 0], &[0, 1]]), 0.0).is_err());
    }

    #[test]
    fn three_collapsing_pairs() {
        let pairs = collapsing_pairs().unwrap();
        assert_eq!(pairs.len(), 3);
        let swap = GroupElement::new(Matrix::<Q>::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        for p in &pairs {
            assert!(p.k_reps_distinct);
            let conj = swap
                .matrix()
                .try_mul(&p.first)
                .unwrap()
                .try_mul(swap.inverse())
                .unwrap();
            assert_eq!(conj, p.second);
            let g = GroupElement::new(p.conjugator.clone()).unwrap();
            assert_eq!(
                g.matrix().try_mul(&p.first).unwrap().try_mul(g.inverse()).unwrap(),
                p.second
            );
        }
        assert!(pairs
            .iter()
            .any(|p| p.first == Matrix::from_i64(&[&[1, 0], &[0, -1]])
                && p.second == Matrix::from_i64(&[&[-1, 0], &[0, 1]])));
    }

    #[test]
    fn obstruction_examples() {
        let x = Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        let c = obstruction_check(&x, &Matrix::from_i64(&[&[-1, 5], &[0, -1]]), 0.0).unwrap();
        assert!(!c.has_root());
        let c = obstruction_check(&x, &Matrix::from_i64(&[&[1, 4], &[0, 1]]), 0.0).unwrap();
        assert_eq!(
            c.verdict,
            ObstructionVerdict::SquareRoot(Matrix::from_i64(&[&[1, 2], &[0, 1]]))
        );
        let d = Matrix::<Q>::from_i64(&[&[1, 0], &[0, -1]]);
        let c = obstruction_check(&d, &Matrix::scalar(2, Q::from_i64(-1)), 0.0).unwrap();
        assert!(!c.has_root());
        assert!(obstruction_check(&d, &Matrix::identity(2), 0.0).unwrap().has_root());
        // outside the handled families
        assert!(obstruction_check(&Matrix::<Q>::from_i64(&[&[2, 3], &[1, 2]]), &Matrix::identity(2), 0.0).is_err());
        // h not in the centralizer
        assert!(obstruction_check(&d, &Matrix::from_i64(&[&[0, 1], &[1, 0]]), 0.0).is_err());
    }
}
