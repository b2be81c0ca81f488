//! Linear systems, echelon forms, spectra and Krylov-type polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{dim_err, Error, Result};
use crate::matrix::{pick_pivot, Matrix, Vector};
use crate::poly::Poly;
use crate::scalar::{GaussRational, Mode, Scalar};

/// Reduced row echelon form restricted to the first `pivot_cols` columns.
/// Returns the reduced matrix and the pivot column of each nonzero row.
pub fn rref_limited<S: Scalar>(m: &Matrix<S>, pivot_cols: usize, tol: f64) -> (Matrix<S>, Vec<usize>) {
    let bound = match S::MODE {
        Mode::Exact => 0.0,
        Mode::Approx => tol * m.entries().iter().map(|x| x.magnitude()).fold(0.0, f64::max),
    };
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..pivot_cols.min(a.cols()) {
        if row == a.rows() {
            break;
        }
        let Some(p) = pick_pivot(&a, row, col, bound) else {
            if S::MODE == Mode::Approx {
                // flush the negligible column so later residual checks see it
                for r in row..a.rows() {
                    a[(r, col)] = S::zero();
                }
            }
            continue;
        };
        a.swap_rows(p, row);
        let inv = S::one() / a[(row, col)].clone();
        a.scale_row(row, &inv);
        for r in 0..a.rows() {
            if r != row && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                a.axpy_row(r, row, &f);
            }
        }
        a[(row, col)] = S::one();
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rref<S: Scalar>(m: &Matrix<S>, tol: f64) -> (Matrix<S>, Vec<usize>) {
    rref_limited(m, m.cols(), tol)
}

pub fn rank<S: Scalar>(m: &Matrix<S>, tol: f64) -> usize {
    rref(m, tol).1.len()
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSpace<S> {
    /// No solution; `residual` is the best residual found (approx) or the
    /// inconsistency witness norm (exact).
    Infeasible { residual: f64 },
    /// `particular + span(kernel)`, kernel in reduced echelon form.
    Affine {
        particular: Vector<S>,
        kernel: Vec<Vector<S>>,
    },
}

impl<S: Scalar> SolutionSpace<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolutionSpace::Affine { .. })
    }
}

/// Solves `coefficients * x = rhs`.
///
/// Approx mode declares the system infeasible when
/// `|A x - b| > tol * (1 + |b|)` for the computed particular solution.
pub fn solve_linear<S: Scalar>(coefficients: &Matrix<S>, rhs: &Vector<S>, tol: f64) -> Result<SolutionSpace<S>> {
    let (rows, cols) = (coefficients.rows(), coefficients.cols());
    if rhs.dim() != rows {
        return Err(dim_err(format!(
            "{rows} equations but right-hand side of length {}",
            rhs.dim()
        )));
    }
    let augmented = Matrix::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            coefficients[(i, j)].clone()
        } else {
            rhs.entries[i].clone()
        }
    });
    let (reduced, pivots) = rref_limited(&augmented, cols, tol);

    let mut particular = vec![S::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = reduced[(r, cols)].clone();
    }
    let residual_vec = Vector::new(coefficients.mul_vec(&particular)?).try_sub(rhs)?;
    let infeasible = match S::MODE {
        Mode::Exact => !residual_vec.is_zero(),
        Mode::Approx => residual_vec.norm() > tol * (1.0 + rhs.norm()),
    };
    if infeasible {
        return Ok(SolutionSpace::Infeasible {
            residual: residual_vec.norm(),
        });
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let raw: Vec<Vec<S>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -reduced[(r, f)].clone();
            }
            v
        })
        .collect();
    let kernel = if raw.is_empty() {
        Vec::new()
    } else {
        let basis = Matrix::from_rows(raw)?;
        let (echelon, piv) = rref(&basis, tol);
        (0..piv.len()).map(|r| Vector::new(echelon.row(r).to_vec())).collect()
    };
    Ok(SolutionSpace::Affine {
        particular: Vector::new(particular),
        kernel,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster<S> {
    pub value: S,
    pub multiplicity: usize,
}

pub(crate) fn to_nalgebra(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Complex Schur form `m = Q T Q*` with `T` upper triangular.
pub fn schur(m: &Matrix<Complex64>) -> Result<(Matrix<Complex64>, Matrix<Complex64>)> {
    m.require_square()?;
    let decomposition = nalgebra::linalg::Schur::try_new(to_nalgebra(m), 1e-15, 100_000).ok_or(Error::NoConvergence)?;
    let (q, t) = decomposition.unpack();
    let (q, t) = (from_nalgebra(&q), from_nalgebra(&t));
    // guard against a silently wrong factorization
    let qh = Matrix::from_fn(q.cols(), q.rows(), |i, j| q[(j, i)].conj());
    let defect = q.try_mul(&t)?.try_mul(&qh)?.dist(m);
    // a NaN defect fails too
    if defect
        .partial_cmp(&(1e-12 * (1.0 + m.norm())))
        .is_none_or(|o| o.is_gt())
    {
        return Err(Error::NoConvergence);
    }
    Ok((q, t))
}

/// Groups values whose distance is within `radius * max(|a|, |b|)`
/// (single linkage). Returns member index lists.
pub fn cluster_indices(values: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = values[i].norm().max(values[j].norm());
            if (values[i] - values[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// Mean of the members, with components inside the cluster radius snapped to zero.
pub(crate) fn cluster_center(values: &[Complex64], members: &[usize], radius: f64) -> Complex64 {
    let mut c = members.iter().map(|&i| values[i]).sum::<Complex64>() / members.len() as f64;
    let scale = c.norm();
    if c.im.abs() <= radius * scale {
        c.im = 0.0;
    }
    if c.re.abs() <= radius * scale {
        c.re = 0.0;
    }
    c
}

fn sort_clusters<S>(clusters: &mut [EigenCluster<S>], key: impl Fn(&S) -> Complex64) {
    clusters.sort_by(|a, b| {
        let (x, y) = (key(&a.value), key(&b.value));
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
}

/// Clustered eigenvalues of an approx matrix. Accuracy is not guaranteed;
/// consumers verify results through residuals.
pub fn eigen_spectrum(m: &Matrix<Complex64>, radius: f64) -> Result<Vec<EigenCluster<Complex64>>> {
    let (_, t) = schur(m)?;
    let values: Vec<Complex64> = (0..t.rows()).map(|i| t[(i, i)]).collect();
    let mut clusters: Vec<_> = cluster_indices(&values, radius)
        .into_iter()
        .map(|members| EigenCluster {
            value: cluster_center(&values, &members, radius),
            multiplicity: members.len(),
        })
        .collect();
    sort_clusters(&mut clusters, |z| *z);
    Ok(clusters)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    Exact(Vec<EigenCluster<GaussRational>>),
    Approx(Vec<EigenCluster<Complex64>>),
}

/// Spectrum in the input's own mode when possible. Exact inputs whose
/// characteristic polynomial does not split over the Gaussian rationals fall
/// back to approx.
pub fn spectrum<S: Scalar>(m: &Matrix<S>, radius: f64) -> Result<Spectrum> {
    m.require_square()?;
    if let Some(exact) = m.to_exact() {
        if let Some(clusters) = exact_eigen_spectrum(&exact)? {
            return Ok(Spectrum::Exact(clusters));
        }
    }
    eigen_spectrum(&m.to_approx(), radius).map(Spectrum::Approx)
}

/// Exact spectrum when the characteristic polynomial splits over Q(i).
pub fn exact_eigen_spectrum(m: &Matrix<GaussRational>) -> Result<Option<Vec<EigenCluster<GaussRational>>>> {
    let chi = characteristic_polynomial(m)?;
    let hints = approx_eigenvalues(m)?;
    Ok(exact_roots(&chi, &hints).map(|roots| {
        let mut clusters: Vec<_> = roots
            .into_iter()
            .map(|(value, multiplicity)| EigenCluster { value, multiplicity })
            .collect();
        sort_clusters(&mut clusters, |z| z.to_c64());
        clusters
    }))
}

pub(crate) fn approx_eigenvalues<S: Scalar>(m: &Matrix<S>) -> Result<Vec<Complex64>> {
    let (_, t) = schur(&m.to_approx())?;
    Ok((0..t.rows()).map(|i| t[(i, i)]).collect())
}

/// Faddeev-LeVerrier; monic, lowest degree first.
pub fn characteristic_polynomial<S: Scalar>(m: &Matrix<S>) -> Result<Poly<S>> {
    let n = m.require_square()?;
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut aux = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        aux = m
            .try_mul(&aux)?
            .try_add(&Matrix::scalar(n, coeffs[n - k + 1].clone()))?;
        let t = m.try_mul(&aux)?.trace();
        coeffs[n - k] = -t / S::from_i64(k as i64);
    }
    Ok(Poly::new(coeffs))
}

/// Monic minimal polynomial from the first linear dependency among
/// `1, m, m^2, ...`.
pub fn minimal_polynomial<S: Scalar>(m: &Matrix<S>, tol: f64) -> Result<Poly<S>> {
    let n = m.require_square()?;
    let mut powers = vec![Matrix::identity(n)];
    for d in 1..=n {
        let next = powers[d - 1].try_mul(m)?;
        let basis = Matrix::from_fn(n * n, d, |r, k| powers[k].entries()[r].clone());
        let target = Vector::new(next.entries().to_vec());
        if let SolutionSpace::Affine { particular, .. } = solve_linear(&basis, &target, tol)? {
            let mut coeffs: Vec<S> = particular.entries.iter().map(|c| -c.clone()).collect();
            coeffs.push(S::one());
            return Ok(Poly::new(coeffs));
        }
        powers.push(next);
    }
    // Cayley-Hamilton guarantees termination at d = n in exact arithmetic.
    characteristic_polynomial(m)
}

/// Continued-fraction convergents `p/q` of `x` with `q <= max_den`.
fn convergents(x: f64, max_den: i128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e12 {
        return out;
    }
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        let ai = a as i128;
        let (h_next, k_next) = (ai * h + h_prev, ai * k + k_prev);
        if k_next > max_den {
            break;
        }
        out.push((h_next, k_next));
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

fn rational_candidates(x: f64) -> Vec<num_rational::BigRational> {
    let tol = 1e-6 * x.abs().max(1.0);
    convergents(x, 10_000_000)
        .into_iter()
        .filter(|&(p, q)| ((p as f64) / (q as f64) - x).abs() <= tol)
        .take(3)
        .map(|(p, q)| num_rational::BigRational::new(p.into(), q.into()))
        .collect()
}

/// Cheap screen: every eigenvalue cluster center of `hints` (and, with
/// `with_sqrt`, its principal square root) is close to a Gaussian rational
/// of small height.
pub(crate) fn plausibly_gaussian(hints: &[Complex64], with_sqrt: bool) -> bool {
    cluster_indices(hints, 1e-4).iter().all(|members| {
        let center = members.iter().map(|&i| hints[i]).sum::<Complex64>() / members.len() as f64;
        let near = |z: Complex64| !rational_candidates(z.re).is_empty() && !rational_candidates(z.im).is_empty();
        near(center) && (!with_sqrt || near(crate::scalar::principal_sqrt(center)))
    })
}

/// Roots of `p` in Q(i) with multiplicities, using approximate root
/// locations as hints. `None` when `p` does not split this way.
pub fn exact_roots(p: &Poly<GaussRational>, hints: &[Complex64]) -> Option<Vec<(GaussRational, usize)>> {
    let mut rest = p.clone();
    let mut roots = Vec::new();
    for members in cluster_indices(hints, 1e-4) {
        let center = members.iter().map(|&i| hints[i]).sum::<Complex64>() / members.len() as f64;
        let re = rational_candidates(center.re);
        let im = rational_candidates(center.im);
        let found = re.iter().find_map(|a| {
            im.iter().find_map(|b| {
                let z = GaussRational::new(a.clone(), b.clone());
                rest.eval(&z).is_zero().then_some(z)
            })
        });
        let Some(root) = found else { continue };
        if roots.iter().any(|(r, _)| *r == root) {
            continue;
        }
        let mut multiplicity = 0;
        loop {
            let (q, r) = rest.div_linear(&root);
            if !r.is_zero() {
                break;
            }
            rest = q;
            multiplicity += 1;
        }
        roots.push((root, multiplicity));
    }
    (rest.degree() == Some(0)).then_some(roots)
}

/// Least-squares solution of `sum_k x_k columns[k] = rhs` by Householder QR.
/// Columns whose pivot falls below a relative cutoff get coefficient zero.
/// Returns the coefficients and the residual norm.
pub fn least_squares(columns: &[Vec<Complex64>], rhs: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let rows = rhs.len();
    if columns.iter().any(|c| c.len() != rows) {
        return Err(dim_err("least-squares columns must match the right-hand side"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let cols = columns.len();
    let mut r: Vec<Vec<Complex64>> = columns.to_vec();
    let mut qb = rhs.to_vec();
    let steps = cols.min(rows);
    for k in 0..steps {
        let norm = r[k][k..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if r[k][k].norm() > 0.0 {
            r[k][k] / r[k][k].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = r[k][k..].to_vec();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        let reflect = |x: &mut [Complex64]| {
            let dot: Complex64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            x.iter_mut().zip(&v).for_each(|(xi, vi)| *xi -= vi * dot * 2.0);
        };
        for col in r.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        reflect(&mut qb[k..]);
    }
    let pivot_max = (0..steps).map(|k| r[k][k].norm()).fold(0.0, f64::max);
    let mut x = vec![zero; cols];
    for k in (0..steps).rev() {
        if r[k][k].norm() <= 1e-14 * pivot_max {
            continue;
        }
        let acc: Complex64 = ((k + 1)..steps).map(|j| r[j][k] * x[j]).sum();
        x[k] = (qb[k] - acc) / r[k][k];
    }
    let residual = (0..rows)
        .map(|i| (columns.iter().zip(&x).map(|(c, xk)| c[i] * xk).sum::<Complex64>() - rhs[i]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((x, residual))
}

/// Frobenius condition number `|m| |m^{-1}|`, an upper bound on the
/// 2-norm condition number.
pub fn condition_number(m: &Matrix<Complex64>) -> Result<f64> {
    m.require_square()?;
    match m.inverse() {
        Ok(inv) => Ok(m.norm() * inv.norm()),
        Err(Error::Singular) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// `true` when every entry is zero (exact) or the norm is within `bound`.
pub fn negligible<S: Scalar>(m: &Matrix<S>, bound: f64) -> bool {
    match S::MODE {
        Mode::Exact => m.entries().iter().all(Zero::is_zero),
        Mode::Approx => m.norm() <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    type Q = GaussRational;
    type C = Complex64;

    #[test]
    fn identity_system() {
        let b = Vector::<Q>::from_i64(&[3, -1, 2]);
        let sol = solve_linear(&Matrix::identity(3), &b, 1e-9).unwrap();
        assert_eq!(
            sol,
            SolutionSpace::Affine {
                particular: b,
                kernel: vec![]
            }
        );
    }

    #[test]
    fn zero_system_has_full_kernel() {
        let sol = solve_linear(&Matrix::<Q>::zeros(2, 2), &Vector::zeros(2), 1e-9).unwrap();
        let SolutionSpace::Affine { particular, kernel } = sol else {
            panic!("zero system is feasible")
        };
        assert!(particular.is_zero());
        assert_eq!(kernel, vec![Vector::unit(2, 0), Vector::unit(2, 1)]);
    }

    #[test]
    fn rank_one_system() {
        let a = Matrix::<Q>::from_i64(&[&[1, 1], &[2, 2]]);
        let sol = solve_linear(&a, &Vector::from_i64(&[1, 2]), 1e-9).unwrap();
        assert_eq!(
            sol,
            SolutionSpace::Affine {
                particular: Vector::from_i64(&[1, 0]),
                kernel: vec![Vector::from_i64(&[1, -1])]
            }
        );
        let bad = solve_linear(&a, &Vector::from_i64(&[1, 3]), 1e-9).unwrap();
        assert!(!bad.is_feasible());
    }

    #[test]
    fn approx_infeasibility_uses_residual_threshold() {
        let a = Matrix::<C>::from_i64(&[&[1, 1], &[2, 2]]);
        let b = Vector::new(vec![C::new(1.0, 0.0), C::new(2.0 + 1e-3, 0.0)]);
        assert!(!solve_linear(&a, &b, 1e-9).unwrap().is_feasible());
        let b = Vector::new(vec![C::new(1.0, 0.0), C::new(2.0, 0.0)]);
        assert!(solve_linear(&a, &b, 1e-9).unwrap().is_feasible());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = Matrix::<Q>::identity(2);
        assert!(matches!(
            solve_linear(&a, &Vector::zeros(3), 1e-9),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn spectrum_examples() {
        let d = Matrix::<C>::diag(&[C::new(4.0, 0.0), C::new(9.0, 0.0)]);
        let s = eigen_spectrum(&d, 1e-7).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0].value - C::new(4.0, 0.0)).norm() < 1e-12 && s[0].multiplicity == 1);
        assert!((s[1].value - C::new(9.0, 0.0)).norm() < 1e-12 && s[1].multiplicity == 1);

        let j = Matrix::<C>::from_i64(&[&[-1, 1], &[0, -1]]);
        let s = eigen_spectrum(&j, 1e-7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].multiplicity, 2);
        assert!((s[0].value + 1.0).norm() < 1e-12);

        let r = Matrix::<C>::from_i64(&[&[0, 1], &[-1, 0]]);
        let s = eigen_spectrum(&r, 1e-7).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0].value - C::new(0.0, -1.0)).norm() < 1e-12);
        assert!((s[1].value - C::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_spectrum_splits_or_falls_back() {
        let r = Matrix::<Q>::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(
            spectrum(&r, 1e-7).unwrap(),
            Spectrum::Exact(vec![
                EigenCluster {
                    value: gauss(0, 1, -1, 1),
                    multiplicity: 1
                },
                EigenCluster {
                    value: gauss(0, 1, 1, 1),
                    multiplicity: 1
                },
            ])
        );
        // T^2 - 2 does not split over Q(i)
        let irr = Matrix::<Q>::from_i64(&[&[0, 2], &[1, 0]]);
        assert!(matches!(spectrum(&irr, 1e-7).unwrap(), Spectrum::Approx(_)));
    }

    #[test]
    fn minimal_polynomial_of_scalar_and_jordan() {
        let four = Matrix::<Q>::scalar(3, Q::from_i64(4));
        assert_eq!(minimal_polynomial(&four, 1e-9).unwrap(), Poly::linear(&Q::from_i64(4)));
        let j = Matrix::<Q>::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]);
        let mu = minimal_polynomial(&j, 1e-9).unwrap();
        assert_eq!(mu, Poly::from_roots(&[Q::from_i64(2), Q::from_i64(2)]));
        let chi = characteristic_polynomial(&j).unwrap();
        assert_eq!(chi, Poly::from_roots(&[Q::from_i64(2), Q::from_i64(2), Q::from_i64(2)]));
    }

    #[test]
    fn least_squares_recovers_consistent_fit() {
        let cols = vec![
            vec![C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0)],
            vec![C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(2.0, 0.0)],
        ];
        let rhs = vec![C::new(1.0, 0.0), C::new(3.0, 0.0), C::new(5.0, 0.0)];
        let (x, r) = least_squares(&cols, &rhs).unwrap();
        assert!((x[0] - 1.0).norm() < 1e-12 && (x[1] - 2.0).norm() < 1e-12);
        assert!(r < 1e-12);
    }
}
