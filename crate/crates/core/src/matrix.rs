//! Dense row-major matrices and vectors over a [`Scalar`].

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{dim_err, Error, Result};
use crate::scalar::{GaussRational, Mode, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn scalar(n: usize, c: S) -> Self {
        Self::identity(n).scale(&c)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(dim_err("ragged rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer entries; convenient for literals in tests and examples.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<S>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| S::from_i64(x)).collect())
            .collect();
        Self::from_rows(data).expect("rectangular literal")
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    /// `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        let n = a.rows;
        for m in [a, b, c, d] {
            if m.rows != n || m.cols != n {
                return Err(dim_err("blocks must all be n x n"));
            }
        }
        Ok(Self::from_fn(2 * n, 2 * n, |i, j| {
            let src = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            src[(i % n, j % n)].clone()
        }))
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_approx(&self) -> Matrix<Complex64> {
        self.map(S::to_c64)
    }

    pub fn to_exact(&self) -> Option<Matrix<GaussRational>> {
        let data = self.data.iter().map(S::to_gauss).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance, computed in this mode and then converted.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(dim_err(format!(
                "matrix with {} columns times vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(dim_err(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                let (a, b) = (&self[(i, k)], &rhs[(k, j)]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            acc
        }))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(dim_err(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let n = self.require_square()?;
        let mut acc = Self::identity(n);
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Pivot bound for elimination: exact mode uses exact zero tests,
    /// approx mode treats entries below `tol * max|entry|` as zero.
    fn pivot_bound(&self, tol: f64) -> f64 {
        match S::MODE {
            Mode::Exact => 0.0,
            Mode::Approx => tol * self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max),
        }
    }

    /// LU with partial pivoting. Returns `(det, inverse)` or `Singular`.
    fn lu_inverse(&self, tol: f64) -> Result<(S, Self)> {
        let n = self.require_square()?;
        let bound = self.pivot_bound(tol);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = S::one();
        for col in 0..n {
            let pivot = pick_pivot(&a, col, col, bound).ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            let p_inv = S::one() / p;
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                a.axpy_row(r, col, &factor);
                inv.axpy_row(r, col, &factor);
            }
        }
        Ok((det, inv))
    }

    /// Inverse; approx mode rejects pivots below `1e-14` relative.
    pub fn inverse(&self) -> Result<Self> {
        self.lu_inverse(1e-14).map(|(_, inv)| inv)
    }

    pub fn det(&self) -> Result<S> {
        match self.lu_inverse(0.0) {
            Ok((d, _)) => Ok(d),
            Err(Error::Singular) => Ok(S::zero()),
            Err(e) => Err(e),
        }
    }

    /// Invertibility with relative pivot threshold `tol` (ignored in exact mode).
    pub fn is_invertible(&self, tol: f64) -> bool {
        self.lu_inverse(tol).is_ok()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, c: &S) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = x.clone() * c.clone();
        }
    }

    /// row[target] -= factor * row[source]
    pub(crate) fn axpy_row(&mut self, target: usize, source: usize, factor: &S) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if s.is_zero() {
                continue;
            }
            let x = &mut self.data[target * self.cols + j];
            *x = x.clone() - factor.clone() * s;
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(S::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(S::from_json)
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn height(z: &GaussRational) -> u64 {
    [&z.re, &z.im].iter().map(|q| q.numer().bits() + q.denom().bits()).sum()
}

/// Row index of the pivot for column `col` among rows `start..`.
/// Exact: nonzero entry of least height. Approx: largest modulus above `bound`.
pub(crate) fn pick_pivot<S: Scalar>(a: &Matrix<S>, start: usize, col: usize, bound: f64) -> Option<usize> {
    match S::MODE {
        // smallest entry height keeps intermediate fractions short
        Mode::Exact => (start..a.rows)
            .filter(|&r| !a[(r, col)].is_zero())
            .min_by_key(|&r| a[(r, col)].to_gauss().map_or(0, |z| height(&z))),
        Mode::Approx => {
            let (best, mag) = (start..a.rows)
                .map(|r| (r, a[(r, col)].magnitude()))
                .fold((start, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            (mag > bound && mag > 0.0).then_some(best)
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// The operator impls panic on shape mismatch; fallible callers use try_*.
impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Serialize for Matrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_json().serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Vector,
    /// Represents the functional `x -> sum_i v_i x_i`.
    Covector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    pub entries: Vec<S>,
    pub variance: Variance,
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector {
            entries,
            variance: Variance::Vector,
        }
    }

    pub fn covector(entries: Vec<S>) -> Self {
        Vector {
            entries,
            variance: Variance::Covector,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        Self::new((0..dim).map(|i| if i == k { S::one() } else { S::zero() }).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn dot(&self, other: &Self) -> S {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector {
            entries: self.entries.iter().map(|x| x.clone() * c.clone()).collect(),
            variance: self.variance,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(dim_err("vector sum"));
        }
        Ok(Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            variance: self.variance,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        other.scale(&-S::one()).try_add(self)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn apply(&self, m: &Matrix<S>) -> Result<Self> {
        Ok(Vector {
            entries: m.mul_vec(&self.entries)?,
            variance: self.variance,
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector {
            entries: self.entries.iter().map(f).collect(),
            variance: self.variance,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(S::to_json).collect())
    }

    pub fn from_json(value: &Value, variance: Variance) -> Result<Self> {
        let entries = value
            .as_array()
            .ok_or_else(|| Error::Parse("vector must be an array".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<S>>>()?;
        Ok(Vector { entries, variance })
    }
}

impl<S: Scalar> Serialize for Vector<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for x in &self.entries {
            seq.serialize_element(&x.to_json())?;
        }
        seq.end()
    }
}

/// A matrix whose arithmetic mode is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum DynMatrix {
    Exact(Matrix<GaussRational>),
    Approx(Matrix<Complex64>),
}

impl DynMatrix {
    pub fn mode(&self) -> Mode {
        match self {
            DynMatrix::Exact(_) => Mode::Exact,
            DynMatrix::Approx(_) => Mode::Approx,
        }
    }

    pub fn to_approx(&self) -> Matrix<Complex64> {
        match self {
            DynMatrix::Exact(m) => m.to_approx(),
            DynMatrix::Approx(m) => m.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Matrix<GaussRational>> {
        match self {
            DynMatrix::Exact(m) => Some(m),
            DynMatrix::Approx(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DynMatrix::Exact(m) => m.to_json(),
            DynMatrix::Approx(m) => m.to_json(),
        }
    }

    pub fn from_json(value: &Value, mode: Mode) -> Result<Self> {
        Ok(match mode {
            Mode::Exact => DynMatrix::Exact(Matrix::from_json(value)?),
            Mode::Approx => DynMatrix::Approx(Matrix::from_json(value)?),
        })
    }
}

impl Serialize for DynMatrix {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serde_json::json!({ "mode": self.mode(), "entries": self.to_json() }).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    type Q = GaussRational;

    #[test]
    fn inverse_and_det_exact() {
        let m = Matrix::<Q>::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det().unwrap(), Q::from_i64(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        let s = Matrix::<Q>::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), Q::from_i64(0));
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn inverse_approx() {
        let m = Matrix::<Complex64>::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).dist(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn blocks_round_trip() {
        let a = Matrix::<Q>::from_i64(&[&[1]]);
        let b = Matrix::<Q>::from_i64(&[&[2]]);
        let c = Matrix::<Q>::from_i64(&[&[3]]);
        let d = Matrix::<Q>::from_i64(&[&[4]]);
        let m = Matrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[1, 2], &[3, 4]]));
        assert_eq!(m.block(0, 1, 1, 1), b);
    }

    #[test]
    fn json_matrix() {
        let m = Matrix::<Q>::from_rows(vec![vec![gauss(1, 2, 0, 1), gauss(0, 1, -1, 1)]]).unwrap();
        let v = m.to_json();
        assert_eq!(v, serde_json::json!([["1/2+0 i", "0-1 i"]]));
        assert_eq!(Matrix::<Q>::from_json(&v).unwrap(), m);
        assert!(Matrix::<Q>::from_json(&serde_json::json!([["1"], ["1", "2"]])).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::<Q>::zeros(2, 3);
        assert!(a.try_mul(&a).is_err());
        assert!(a.inverse().is_err());
        assert!(a.mul_vec(&[Q::from_i64(1)]).is_err());
    }
}
