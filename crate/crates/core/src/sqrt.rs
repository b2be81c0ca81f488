//! Square roots that are polynomials in their argument.
//!
//! For invertible `h` the primary square root `S = f(h)` is computed together
//! with a coefficient list `c` such that `S = sum_k c_k h^k`. Because `S` is
//! a polynomial in `h` it commutes with everything commuting with `h`, fixes
//! every vector `h` fixes, and is `sigma`-fixed whenever `h` is.
//!
//! * Exact mode: when the minimal polynomial of `h` splits over `Q(i)` and
//!   every eigenvalue is a square there, Hermite interpolation of the
//!   principal branch at the roots of the minimal polynomial gives `f`
//!   exactly. Otherwise the computation moves to approx mode.
//! * Approx mode: the branch is fixed per eigenvalue cluster; `S` is
//!   evaluated on the triangular Schur factor (which matches the branch's
//!   derivatives inside each cluster), and the certificate is the
//!   lowest-degree least-squares fit of `S` in the Krylov basis of `h`.
//!   Both residuals are verified before returning.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    approx_eigenvalues, cluster_center, cluster_indices, exact_roots, least_squares, minimal_polynomial, negligible,
    plausibly_gaussian, schur,
};
use crate::matrix::{DynMatrix, Matrix};
use crate::poly::Poly;
use crate::scalar::{gauss_sqrt, principal_sqrt, GaussRational, Mode, Scalar};
use crate::symplectic::SymplecticContext;
use crate::tolerance::Tolerances;

/// `S = sum_k coeffs[k] w_k(h)` up to `residual`, in the Newton basis
/// `w_0 = 1`, `w_{k+1}(T) = w_k(T) (T - nodes[k]) / scale`.
///
/// Exact certificates are plain monomial lists (all nodes zero, unit
/// scale). Approx certificates use Leja-ordered eigenvalues of `h` as nodes,
/// which keeps the basis well-conditioned when the spectrum is spread out.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCert<S> {
    pub coeffs: Vec<S>,
    pub nodes: Vec<S>,
    pub scale: S,
    pub residual: f64,
}

impl<S: Scalar> PolyCert<S> {
    pub fn monomial(coeffs: Vec<S>, residual: f64) -> Self {
        PolyCert {
            nodes: vec![S::zero(); coeffs.len().saturating_sub(1)],
            coeffs,
            scale: S::one(),
            residual,
        }
    }

    /// The certificate expanded in powers of `T`.
    pub fn poly(&self) -> Poly<S> {
        let Some((last, rest)) = self.coeffs.split_last() else {
            return Poly::new(Vec::new());
        };
        let inv = S::one() / self.scale.clone();
        rest.iter()
            .enumerate()
            .rev()
            .fold(Poly::constant(last.clone()), |acc, (k, c)| {
                acc.mul(&Poly::linear(&self.nodes[k]).scale(&inv))
                    .add(&Poly::constant(c.clone()))
            })
    }

    /// Nested evaluation of the Newton form at `h`.
    pub fn eval(&self, h: &Matrix<S>) -> Result<Matrix<S>> {
        let n = h.require_square()?;
        let Some((last, rest)) = self.coeffs.split_last() else {
            return Ok(Matrix::zeros(n, n));
        };
        let inv = S::one() / self.scale.clone();
        let mut acc = Matrix::scalar(n, last.clone());
        for (k, c) in rest.iter().enumerate().rev() {
            let factor = h.try_sub(&Matrix::scalar(n, self.nodes[k].clone()))?.scale(&inv);
            acc = factor.try_mul(&acc)?.try_add(&Matrix::scalar(n, c.clone()))?;
        }
        Ok(acc)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PolyCert<T> {
        PolyCert {
            coeffs: self.coeffs.iter().map(&f).collect(),
            nodes: self.nodes.iter().map(&f).collect(),
            scale: f(&self.scale),
            residual: self.residual,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": "newton",
            "coeffs": self.coeffs.iter().map(S::to_json).collect::<Vec<_>>(),
            "nodes": self.nodes.iter().map(S::to_json).collect::<Vec<_>>(),
            "scale": self.scale.to_json(),
            "monomial": self.poly().coeffs().iter().map(S::to_json).collect::<Vec<_>>(),
            "residual": self.residual,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimarySqrt<S> {
    pub root: Matrix<S>,
    pub cert: PolyCert<S>,
    /// `|S^2 - h|`
    pub sqrt_residual: f64,
    /// `|sigma(S) - S|`, filled in by [`sigma_fixed_sqrt`].
    pub sigma_residual: Option<f64>,
    /// Clustering radius that produced the verified result (approx mode).
    pub cluster_radius: Option<f64>,
    /// Angle of the branch cut; `pi` is the principal branch.
    pub branch_cut: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SqrtOutcome<S> {
    /// Computed in the input's own mode.
    InMode(PrimarySqrt<S>),
    /// Exact input whose spectrum needs radicals; computed in approx mode.
    SwitchedToApprox(PrimarySqrt<Complex64>),
}

impl<S: Scalar> SqrtOutcome<S> {
    pub fn mode(&self) -> Mode {
        match self {
            SqrtOutcome::InMode(_) => S::MODE,
            SqrtOutcome::SwitchedToApprox(_) => Mode::Approx,
        }
    }

    pub fn switched(&self) -> bool {
        matches!(self, SqrtOutcome::SwitchedToApprox(_))
    }

    pub fn root(&self) -> DynMatrix {
        match self {
            SqrtOutcome::InMode(s) => S::wrap_matrix(s.root.clone()),
            SqrtOutcome::SwitchedToApprox(s) => DynMatrix::Approx(s.root.clone()),
        }
    }

    pub fn cert_json(&self) -> Value {
        match self {
            SqrtOutcome::InMode(s) => s.cert.to_json(),
            SqrtOutcome::SwitchedToApprox(s) => s.cert.to_json(),
        }
    }

    pub fn sqrt_residual(&self) -> f64 {
        match self {
            SqrtOutcome::InMode(s) => s.sqrt_residual,
            SqrtOutcome::SwitchedToApprox(s) => s.sqrt_residual,
        }
    }

    pub fn cert_residual(&self) -> f64 {
        match self {
            SqrtOutcome::InMode(s) => s.cert.residual,
            SqrtOutcome::SwitchedToApprox(s) => s.cert.residual,
        }
    }

    pub fn sigma_residual(&self) -> Option<f64> {
        match self {
            SqrtOutcome::InMode(s) => s.sigma_residual,
            SqrtOutcome::SwitchedToApprox(s) => s.sigma_residual,
        }
    }

    pub fn into_approx(self) -> PrimarySqrt<Complex64> {
        match self {
            SqrtOutcome::InMode(s) => PrimarySqrt {
                root: s.root.to_approx(),
                cert: s.cert.map(S::to_c64),
                sqrt_residual: s.sqrt_residual,
                sigma_residual: s.sigma_residual,
                cluster_radius: s.cluster_radius,
                branch_cut: s.branch_cut,
            },
            SqrtOutcome::SwitchedToApprox(s) => s,
        }
    }
}

/// Newton form of the Hermite interpolant. Each node carries its Taylor
/// data `t_k = f^(k)(x) / k!` for `k < multiplicity`.
pub fn hermite_interpolant<S: Scalar>(nodes: &[(S, Vec<S>)]) -> Poly<S> {
    let expanded: Vec<(usize, &S)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(id, (x, taylor))| std::iter::repeat_n((id, x), taylor.len()))
        .collect();
    let len = expanded.len();
    // column j of the divided-difference table, updated in place
    let mut col: Vec<S> = expanded.iter().map(|&(id, _)| nodes[id].1[0].clone()).collect();
    let mut newton = Vec::with_capacity(len);
    if len > 0 {
        newton.push(col[0].clone());
    }
    for j in 1..len {
        for i in (j..len).rev() {
            let (id_i, x_i) = expanded[i];
            let (id_lo, x_lo) = expanded[i - j];
            col[i] = if id_i == id_lo {
                nodes[id_i].1[j].clone()
            } else {
                (col[i].clone() - col[i - 1].clone()) / (x_i.clone() - x_lo.clone())
            };
        }
        newton.push(col[j].clone());
    }
    let mut poly = Poly::new(Vec::new());
    let mut basis = Poly::constant(S::one());
    for (j, a) in newton.iter().enumerate() {
        poly = poly.add(&basis.scale(a));
        basis = basis.mul(&Poly::linear(expanded[j].1));
    }
    poly
}

/// Taylor coefficients of `sqrt` at `x` with `sqrt(x) = root`:
/// `binom(1/2, k) * root / x^k`.
pub fn sqrt_taylor<S: Scalar>(x: &S, root: &S, order: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(order);
    let mut term = root.clone();
    for k in 0..order {
        out.push(term.clone());
        // binom(1/2, k+1) = binom(1/2, k) * (1/2 - k) / (k + 1)
        let ratio = S::from_ratio(1 - 2 * k as i64, 2 * (k as i64 + 1));
        term = term * ratio / x.clone();
    }
    out
}

fn exact_sqrt(h: &Matrix<GaussRational>) -> Result<Option<PrimarySqrt<GaussRational>>> {
    let hints = approx_eigenvalues(h)?;
    if !plausibly_gaussian(&hints, true) {
        if !h.is_invertible(0.0) {
            return Err(Error::Singular);
        }
        return Ok(None);
    }
    let mu = minimal_polynomial(h, 0.0)?;
    if num_traits::Zero::is_zero(&mu.coeffs()[0]) {
        return Err(Error::Singular);
    }
    let Some(roots) = exact_roots(&mu, &hints) else {
        return Ok(None);
    };
    let mut nodes = Vec::with_capacity(roots.len());
    for (lambda, multiplicity) in roots {
        let Some(root) = gauss_sqrt(&lambda) else {
            return Ok(None);
        };
        let taylor = sqrt_taylor(&lambda, &root, multiplicity);
        nodes.push((lambda, taylor));
    }
    let poly = hermite_interpolant(&nodes);
    let s = poly.eval_matrix(h)?;
    if s.try_mul(&s)? != *h {
        return Err(Error::Residual {
            what: "exact square root".into(),
            residual: s.try_mul(&s)?.dist(h),
            bound: 0.0,
        });
    }
    Ok(Some(PrimarySqrt {
        root: s,
        cert: PolyCert::monomial(poly.coeffs().to_vec(), 0.0),
        sqrt_residual: 0.0,
        sigma_residual: None,
        cluster_radius: None,
        branch_cut: PI,
    }))
}

/// Square root of an upper-triangular matrix with prescribed diagonal roots.
fn triangular_sqrt(t: &Matrix<Complex64>, diag: &[Complex64]) -> Result<Matrix<Complex64>> {
    let n = t.rows();
    let mut r = Matrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        r[(i, i)] = diag[i];
    }
    for gap in 1..n {
        for i in 0..n - gap {
            let j = i + gap;
            let mut acc = t[(i, j)];
            for k in i + 1..j {
                acc -= r[(i, k)] * r[(k, j)];
            }
            let denom = r[(i, i)] + r[(j, j)];
            if denom.norm() == 0.0 {
                return Err(Error::Singular);
            }
            r[(i, j)] = acc / denom;
        }
    }
    Ok(r)
}

fn adjoint(m: &Matrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.cols(), m.rows(), |i, j| m[(j, i)].conj())
}

/// Lowest-degree `f` with `|f(h) - S| <= bound`, fitted in the Krylov basis
/// of a rescaled `h`.
/// Leja ordering: start at the largest modulus, then repeatedly take the
/// point maximizing the product of distances to those already chosen.
fn leja_order(points: &[Complex64]) -> Vec<Complex64> {
    let mut rest = points.to_vec();
    let mut out = Vec::with_capacity(points.len());
    let mut score: Vec<f64> = rest.iter().map(|z| z.norm()).collect();
    while !rest.is_empty() {
        let best = (0..rest.len())
            .max_by(|&i, &j| score[i].total_cmp(&score[j]))
            .expect("nonempty");
        let z = rest.swap_remove(best);
        score.swap_remove(best);
        // log-distances avoid underflow for long products
        if out.is_empty() {
            score.iter_mut().for_each(|s| *s = 0.0);
        }
        for (s, w) in score.iter_mut().zip(&rest) {
            *s += (w - z).norm().max(1e-300).ln();
        }
        out.push(z);
    }
    out
}

/// Lowest-degree Newton-basis fit of `s` in the Krylov space of `h`.
fn krylov_certificate(
    h: &Matrix<Complex64>,
    eigenvalues: &[Complex64],
    s: &Matrix<Complex64>,
    bound: f64,
) -> Result<PolyCert<Complex64>> {
    let n = h.rows();
    let zero = Complex64::new(0.0, 0.0);
    let nodes = leja_order(eigenvalues);
    let center = eigenvalues.iter().sum::<Complex64>() / n as f64;
    let spread = eigenvalues.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let scale = if spread > 1e-12 * (1.0 + center.norm()) {
        spread
    } else {
        1.0
    };
    let target: Vec<Complex64> = s.entries().to_vec();
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut basis = Matrix::<Complex64>::identity(n);
    let mut best = f64::INFINITY;
    for degree in 0..n {
        columns.push(basis.entries().to_vec());
        let factor = h
            .try_sub(&Matrix::scalar(n, nodes[degree]))?
            .scale(&Complex64::new(1.0 / scale, 0.0));
        basis = factor.try_mul(&basis)?;
        let (mut coeffs, _) = least_squares(&columns, &target)?;
        // keep the coefficient count explicit, even with trailing zeros
        coeffs.resize(degree + 1, zero);
        let mut cert = PolyCert {
            coeffs,
            nodes: nodes[..degree].to_vec(),
            scale: Complex64::new(scale, 0.0),
            residual: 0.0,
        };
        cert.residual = cert.eval(h)?.dist(s);
        if cert.residual <= bound {
            return Ok(cert);
        }
        best = best.min(cert.residual);
    }
    Err(Error::Residual {
        what: "square-root certificate".into(),
        residual: best,
        bound,
    })
}

/// Square root with its cut along the ray at angle `cut`.
fn branch_sqrt(z: Complex64, cut: f64) -> Complex64 {
    if cut == PI {
        return principal_sqrt(z);
    }
    let turn = cut - PI;
    Complex64::from_polar(1.0, turn / 2.0) * principal_sqrt(z * Complex64::from_polar(1.0, -turn))
}

/// Direction bisecting the widest angular gap between the given points.
fn widest_gap_cut(points: &[Complex64]) -> f64 {
    let mut args: Vec<f64> = points.iter().map(|z| z.arg()).collect();
    args.sort_by(f64::total_cmp);
    let mut best = (args[0] + 2.0 * PI - args[args.len() - 1], args[args.len() - 1]);
    for w in args.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    let cut = best.1 + best.0 / 2.0;
    if cut > PI {
        cut - 2.0 * PI
    } else {
        cut
    }
}

fn approx_sqrt(h: &Matrix<Complex64>, tol: &Tolerances) -> Result<PrimarySqrt<Complex64>> {
    let n = h.require_square()?;
    let h_norm = h.norm();
    if n == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let (q, t) = schur(h)?;
    let diag: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    if diag.iter().any(|z| z.norm() <= 1e-14 * h_norm) || h_norm == 0.0 {
        return Err(Error::Singular);
    }
    let sqrt_bound = tol.residual * h_norm;
    let cert_bound = tol.residual * (1.0 + h_norm);
    let mut last_err = Error::NoConvergence;
    let mut tried: Vec<Vec<Complex64>> = Vec::new();
    // The principal branch first. A spectrum wrapped around the negative
    // axis makes its interpolant too ill-conditioned to certify, and then
    // the cut moves into the widest gap of the spectrum.
    for cut in [PI, widest_gap_cut(&diag)] {
        let mut radius = tol.cluster_radius;
        // widen the clustering radius on residual failure
        while radius <= 1e-1 * (1.0 + 1e-9) {
            let mut roots = diag.clone();
            for members in cluster_indices(&diag, radius) {
                let center_root = branch_sqrt(cluster_center(&diag, &members, radius), cut);
                for &i in &members {
                    let r = branch_sqrt(diag[i], cut);
                    roots[i] = if (r - center_root).norm() <= (r + center_root).norm() {
                        r
                    } else {
                        -r
                    };
                }
            }
            let current = radius;
            radius *= 10.0;
            if tried.contains(&roots) {
                continue;
            }
            tried.push(roots.clone());
            let attempt = (|| {
                let r = triangular_sqrt(&t, &roots)?;
                let s = q.try_mul(&r)?.try_mul(&adjoint(&q))?;
                let sqrt_residual = s.try_mul(&s)?.dist(h);
                if sqrt_residual > sqrt_bound {
                    return Err(Error::Residual {
                        what: "square root".into(),
                        residual: sqrt_residual,
                        bound: sqrt_bound,
                    });
                }
                let cert = krylov_certificate(h, &diag, &s, cert_bound)?;
                Ok(PrimarySqrt {
                    root: s,
                    cert,
                    sqrt_residual,
                    sigma_residual: None,
                    cluster_radius: Some(current),
                    branch_cut: cut,
                })
            })();
            match attempt {
                Ok(result) => return Ok(result),
                Err(e @ Error::Residual { .. }) => last_err = e,
                Err(e) => return Err(e),
            }
        }
    }
    Err(last_err)
}

/// Primary square root with polynomial certificate.
pub fn primary_sqrt<S: Scalar>(h: &Matrix<S>, tol: &Tolerances) -> Result<SqrtOutcome<S>> {
    h.require_square()?;
    if let Some(exact) = h.to_exact() {
        if let Some(result) = exact_sqrt(&exact)? {
            return Ok(SqrtOutcome::InMode(PrimarySqrt {
                root: result.root.map(S::from_gauss),
                cert: result.cert.map(S::from_gauss),
                sqrt_residual: 0.0,
                sigma_residual: None,
                cluster_radius: None,
                branch_cut: PI,
            }));
        }
        return approx_sqrt(&exact.to_approx(), tol).map(SqrtOutcome::SwitchedToApprox);
    }
    let approx = approx_sqrt(&h.to_approx(), tol)?;
    let back = |z: &Complex64| S::from_c64(*z).expect("non-exact scalar converts from Complex64");
    Ok(SqrtOutcome::InMode(PrimarySqrt {
        root: approx.root.map(back),
        cert: approx.cert.map(back),
        sqrt_residual: approx.sqrt_residual,
        sigma_residual: None,
        cluster_radius: approx.cluster_radius,
        branch_cut: approx.branch_cut,
    }))
}

/// Primary square root of a `sigma`-fixed `h`, with `sigma(S) = S` verified.
pub fn sigma_fixed_sqrt<S: Scalar>(
    ctx: &SymplecticContext<S>,
    h: &Matrix<S>,
    tol: &Tolerances,
) -> Result<SqrtOutcome<S>> {
    let sigma_h = ctx.sigma_end(h)?;
    if !negligible(&sigma_h.try_sub(h)?, tol.residual * h.norm()) {
        return Err(Error::Precondition("h is not sigma-fixed".into()));
    }
    let mut outcome = primary_sqrt(h, tol)?;
    match &mut outcome {
        SqrtOutcome::InMode(s) => s.sigma_residual = Some(sigma_check(ctx, &s.root, tol)?),
        SqrtOutcome::SwitchedToApprox(s) => {
            let actx = SymplecticContext::<Complex64>::new(ctx.n());
            s.sigma_residual = Some(sigma_check(&actx, &s.root, tol)?);
        }
    }
    Ok(outcome)
}

fn sigma_check<T: Scalar>(ctx: &SymplecticContext<T>, s: &Matrix<T>, tol: &Tolerances) -> Result<f64> {
    let diff = ctx.sigma_end(s)?.try_sub(s)?;
    let bound = tol.verification * s.norm();
    let residual = diff.norm();
    if !negligible(&diff, bound) {
        return Err(Error::Residual {
            what: "sigma-fixedness of the square root".into(),
            residual,
            bound,
        });
    }
    Ok(residual)
}
