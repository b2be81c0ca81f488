//! The symplectic form on `C^{2n}`, the adjoint anti-automorphism on
//! `End(V)`, the induced involution on the group, and the polar split.

use serde_json::{json, Value};

use crate::error::{dim_err, Error, Result};
use crate::linalg::negligible;
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;

/// Invertible matrix with its inverse cached.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S> {
    matrix: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(GroupElement { matrix, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        GroupElement {
            matrix: Matrix::identity(dim),
            inverse: Matrix::identity(dim),
        }
    }

    /// Caller guarantees `inverse` is the inverse of `matrix`.
    pub(crate) fn from_parts(matrix: Matrix<S>, inverse: Matrix<S>) -> Self {
        GroupElement { matrix, inverse }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.inverse
    }

    pub fn inv(&self) -> Self {
        GroupElement {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement {
            matrix: self.matrix.try_mul(&other.matrix)?,
            inverse: other.inverse.try_mul(&self.inverse)?,
        })
    }
}

/// Fixed structure for `V = C^{2n}` with `J = [[0, 1_n], [-1_n, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticContext<S> {
    n: usize,
    j: Matrix<S>,
}

impl<S: Scalar> SymplecticContext<S> {
    pub fn new(n: usize) -> Self {
        let j = Matrix::from_fn(2 * n, 2 * n, |r, c| {
            if r < n && c == r + n {
                S::one()
            } else if r >= n && c + n == r {
                -S::one()
            } else {
                S::zero()
            }
        });
        SymplecticContext { n, j }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn j(&self) -> &Matrix<S> {
        &self.j
    }

    /// `J^{-1} = -J`.
    pub fn j_inv(&self) -> Matrix<S> {
        -&self.j
    }

    pub(crate) fn check_vec(&self, v: &Vector<S>, what: &str) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(dim_err(format!(
                "{what} has dimension {}, expected {}",
                v.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_mat(&self, a: &Matrix<S>, what: &str) -> Result<()> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(dim_err(format!(
                "{what} is {}x{}, expected {d}x{d}",
                a.rows(),
                a.cols(),
                d = self.dim()
            )));
        }
        Ok(())
    }

    /// `<u, v> = u^T J v`.
    pub fn symplectic_form(&self, u: &Vector<S>, v: &Vector<S>) -> Result<S> {
        self.check_vec(u, "u")?;
        self.check_vec(v, "v")?;
        Ok(Vector::new(self.j.mul_vec(&v.entries)?).dot(u))
    }

    /// Adjoint with respect to the form: `J^{-1} A^T J`.
    pub fn sigma_end(&self, a: &Matrix<S>) -> Result<Matrix<S>> {
        self.check_mat(a, "A")?;
        // J^{-1} A^T J has entries permuted and sign-flipped; the block
        // formula avoids two dense products:
        // sigma([[a, b], [c, d]]) = [[d^T, -b^T], [-c^T, a^T]]
        let n = self.n;
        Ok(Matrix::from_fn(2 * n, 2 * n, |r, c| {
            let (rb, cb) = (r < n, c < n);
            let (ri, ci) = (r % n, c % n);
            match (rb, cb) {
                (true, true) => a[(n + ci, n + ri)].clone(),
                (true, false) => -a[(ci, n + ri)].clone(),
                (false, true) => -a[(n + ci, ri)].clone(),
                (false, false) => a[(ci, ri)].clone(),
            }
        }))
    }

    /// `theta(g) = sigma(g)^{-1} = sigma(g^{-1})`.
    pub fn theta_group(&self, g: &GroupElement<S>) -> Result<GroupElement<S>> {
        Ok(GroupElement::from_parts(
            self.sigma_end(g.inverse())?,
            self.sigma_end(g.matrix())?,
        ))
    }

    /// `|g^T J g - J|`.
    pub fn symplectic_defect(&self, g: &Matrix<S>) -> Result<f64> {
        self.check_mat(g, "g")?;
        let lhs = g.transpose().try_mul(&self.j)?.try_mul(g)?;
        Ok(lhs.dist(&self.j))
    }

    /// `g^T J g = J`, exactly or within `tol * |J|`.
    pub fn is_symplectic(&self, g: &Matrix<S>, tol: f64) -> Result<bool> {
        self.check_mat(g, "g")?;
        let lhs = g.transpose().try_mul(&self.j)?.try_mul(g)?;
        Ok(negligible(&lhs.try_sub(&self.j)?, tol * self.j.norm()))
    }

    /// `(k, p)` with `k = (A - sigma(A))/2` in sp and `p = (A + sigma(A))/2`.
    pub fn cartan_split(&self, a: &Matrix<S>) -> Result<(Matrix<S>, Matrix<S>)> {
        let s = self.sigma_end(a)?;
        let half = S::from_ratio(1, 2);
        Ok((a.try_sub(&s)?.scale(&half), a.try_add(&s)?.scale(&half)))
    }

    /// `x -> x + c <x, w> w`, i.e. `1 - c w w^T J`.
    pub fn transvection(&self, w: &Vector<S>, c: &S) -> Result<GroupElement<S>> {
        self.check_vec(w, "w")?;
        let d = self.dim();
        let outer = Matrix::from_fn(d, d, |i, j| w.entries[i].clone() * w.entries[j].clone());
        let shear = outer.try_mul(&self.j)?;
        let forward = Matrix::identity(d).try_sub(&shear.scale(c))?;
        let backward = Matrix::identity(d).try_add(&shear.scale(c))?;
        Ok(GroupElement::from_parts(forward, backward))
    }

    /// Block-diagonal `diag(a, a^{-T})`, an element of `Sp ∩ (GL_n x GL_n)`.
    pub fn levi_element(&self, a: &Matrix<S>) -> Result<GroupElement<S>> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(dim_err("Levi block must be n x n"));
        }
        let a_inv = a.inverse()?;
        let z = Matrix::zeros(self.n, self.n);
        let m = Matrix::from_blocks(a, &z, &z, &a_inv.transpose())?;
        let m_inv = Matrix::from_blocks(&a_inv, &z, &z, &a.transpose())?;
        Ok(GroupElement::from_parts(m, m_inv))
    }

    /// Norm of the off-diagonal `n x n` blocks.
    pub fn off_block_norm(&self, g: &Matrix<S>) -> Result<f64> {
        self.check_mat(g, "g")?;
        let n = self.n;
        Ok((g.block(0, n, n, n).norm().powi(2) + g.block(n, 0, n, n).norm().powi(2)).sqrt())
    }

    pub fn is_block_diagonal(&self, g: &Matrix<S>, tol: f64) -> Result<bool> {
        self.check_mat(g, "g")?;
        let n = self.n;
        let bound = tol * (1.0 + g.norm());
        Ok(negligible(&g.block(0, n, n, n), bound) && negligible(&g.block(n, 0, n, n), bound))
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "mode": S::MODE })
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Precondition("half-dimension n must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_complex::Complex64;

    type Q = GaussRational;

    fn ctx1() -> SymplecticContext<Q> {
        SymplecticContext::new(1)
    }

    #[test]
    fn j_structure() {
        let ctx = SymplecticContext::<Q>::new(2);
        let j = ctx.j();
        assert_eq!(j.transpose(), -j);
        assert_eq!(j * j, -&Matrix::identity(4));
    }

    #[test]
    fn form_examples() {
        let ctx = ctx1();
        let e1 = Vector::from_i64(&[1, 0]);
        let e2 = Vector::from_i64(&[0, 1]);
        assert_eq!(ctx.symplectic_form(&e1, &e2).unwrap(), Q::from_i64(1));
        let u = Vector::from_i64(&[1, 1]);
        assert_eq!(ctx.symplectic_form(&u, &u).unwrap(), Q::from_i64(0));
        let v = Vector::from_i64(&[1, -1]);
        assert_eq!(ctx.symplectic_form(&u, &v).unwrap(), Q::from_i64(-2));
        assert!(ctx.symplectic_form(&u, &Vector::zeros(3)).is_err());
    }

    #[test]
    fn sigma_end_matches_dense_formula() {
        let ctx = SymplecticContext::<Q>::new(2);
        let a = Matrix::<Q>::from_fn(4, 4, |i, j| Q::from_i64((3 * i + 5 * j) as i64 % 7 - 3));
        let dense = ctx.j_inv().try_mul(&a.transpose()).unwrap().try_mul(ctx.j()).unwrap();
        assert_eq!(ctx.sigma_end(&a).unwrap(), dense);
    }

    #[test]
    fn sigma_end_examples() {
        let ctx = ctx1();
        assert_eq!(ctx.sigma_end(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
        let a = Matrix::<Q>::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(ctx.sigma_end(&a).unwrap(), Matrix::from_i64(&[&[4, -2], &[-3, 1]]));
        let nil = Matrix::<Q>::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(ctx.sigma_end(&nil).unwrap(), Matrix::from_i64(&[&[0, -1], &[0, 0]]));
        assert!(ctx.sigma_end(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn theta_examples() {
        let ctx = ctx1();
        let id = GroupElement::<Q>::identity(2);
        assert_eq!(ctx.theta_group(&id).unwrap(), id);
        let shear = GroupElement::new(Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(ctx.theta_group(&shear).unwrap().matrix(), shear.matrix());
        let two = GroupElement::new(Matrix::scalar(2, Q::from_i64(2))).unwrap();
        assert_eq!(
            ctx.theta_group(&two).unwrap().matrix(),
            &Matrix::scalar(2, Q::from_ratio(1, 2))
        );
        assert!(GroupElement::new(Matrix::<Q>::zeros(2, 2)).is_err());
    }

    #[test]
    fn membership_examples() {
        let ctx = ctx1();
        assert!(ctx.is_symplectic(&Matrix::identity(2), 1e-9).unwrap());
        assert!(ctx.is_symplectic(&Matrix::from_i64(&[&[1, 1], &[0, 1]]), 1e-9).unwrap());
        assert!(!ctx.is_symplectic(&Matrix::from_i64(&[&[2, 0], &[0, 1]]), 1e-9).unwrap());
        let actx = SymplecticContext::<Complex64>::new(1);
        let near =
            Matrix::<Complex64>::from_fn(2, 2, |i, j| Complex64::new(if i == j { 1.0 + 1e-12 } else { 0.0 }, 0.0));
        assert!(actx.is_symplectic(&near, 1e-9).unwrap());
        assert!(!actx.is_symplectic(&near, 1e-15).unwrap());
    }

    #[test]
    fn cartan_split_examples() {
        let ctx = ctx1();
        let sp = Matrix::<Q>::from_i64(&[&[1, 0], &[0, -1]]);
        let (k, p) = ctx.cartan_split(&sp).unwrap();
        assert_eq!((k, p.is_zero()), (sp, true));
        let (k, p) = ctx.cartan_split(&Matrix::identity(2)).unwrap();
        assert!(k.is_zero());
        assert_eq!(p, Matrix::identity(2));
        let e11 = Matrix::<Q>::from_i64(&[&[1, 0], &[0, 0]]);
        let (k, p) = ctx.cartan_split(&e11).unwrap();
        assert_eq!(k, Matrix::diag(&[Q::from_ratio(1, 2), Q::from_ratio(-1, 2)]));
        assert_eq!(p, Matrix::diag(&[Q::from_ratio(1, 2), Q::from_ratio(1, 2)]));
    }

    #[test]
    fn transvections_and_levi_are_symplectic() {
        let ctx = SymplecticContext::<Q>::new(2);
        let t = ctx
            .transvection(&Vector::from_i64(&[1, -1, 2, 0]), &Q::from_ratio(3, 2))
            .unwrap();
        assert!(ctx.is_symplectic(t.matrix(), 0.0).unwrap());
        assert_eq!(t.matrix() * t.inverse(), Matrix::identity(4));
        let a = Matrix::<Q>::from_i64(&[&[2, 1], &[1, 1]]);
        let l = ctx.levi_element(&a).unwrap();
        assert!(ctx.is_symplectic(l.matrix(), 0.0).unwrap());
        assert!(ctx.is_block_diagonal(l.matrix(), 0.0).unwrap());
        assert_eq!(l.matrix() * l.inverse(), Matrix::identity(4));
    }
}
