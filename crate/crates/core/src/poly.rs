//! Univariate polynomials, coefficients stored lowest degree first.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `T - root`
    pub fn linear(root: &S) -> Self {
        Self::new(vec![-root.clone(), S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<S>) -> Result<Matrix<S>> {
        let n = m.require_square()?;
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(m)?.try_add(&Matrix::scalar(n, c.clone()))?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(S::zero);
        Self::new((0..len).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Synthetic division by `T - root`: returns (quotient, remainder).
    pub fn div_linear(&self, root: &S) -> (Self, S) {
        let Some(deg) = self.degree() else {
            return (self.clone(), S::zero());
        };
        if deg == 0 {
            return (Self::new(Vec::new()), self.coeffs[0].clone());
        }
        let mut quotient = vec![S::zero(); deg];
        let mut carry = S::zero();
        for k in (0..=deg).rev() {
            let value = self.coeffs[k].clone() + carry.clone() * root.clone();
            if k == 0 {
                return (Self::new(quotient), value);
            }
            quotient[k - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    /// `prod (T - r)` over the listed roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a S>) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(S::one()), |acc, r| acc.mul(&Self::linear(r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type Q = GaussRational;

    #[test]
    fn division_by_linear_factor() {
        // (T - 2)(T + 3) = T^2 + T - 6
        let p = Poly::new(vec![Q::from_i64(-6), Q::from_i64(1), Q::from_i64(1)]);
        let (q, r) = p.div_linear(&Q::from_i64(2));
        assert_eq!(r, Q::from_i64(0));
        assert_eq!(q, Poly::new(vec![Q::from_i64(3), Q::from_i64(1)]));
        let (_, r) = p.div_linear(&Q::from_i64(1));
        assert_eq!(r, Q::from_i64(-4));
        assert_eq!(Poly::from_roots(&[Q::from_i64(2), Q::from_i64(-3)]), p);
    }

    #[test]
    fn matrix_evaluation() {
        let m = Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        // (T - 1)^2 annihilates a 2x2 Jordan block
        let p = Poly::from_roots(&[Q::from_i64(1), Q::from_i64(1)]);
        assert!(p.eval_matrix(&m).unwrap().is_zero());
        assert_eq!(p.eval(&Q::from_i64(3)), Q::from_i64(4));
    }
}
