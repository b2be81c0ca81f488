//! Seeded generators for test instances. Everything is built exactly over
//! the Gaussian rationals so instances can be replayed in either mode.

use num_complex::Complex64;
use rand::Rng;

use crate::enhanced::{AlphaSign, EnhancedElement};
use crate::error::Result;
use crate::linalg::condition_number;
use crate::matrix::{Matrix, Vector};
use crate::orbit::{embed_theta_rep, GroupConstraint, ThetaLocus};
use crate::poly::Poly;
use crate::scalar::{gauss, GaussRational, Scalar};
use crate::symplectic::{GroupElement, SymplecticContext};

type Q = GaussRational;

/// Integer in `[-range, range]`.
pub fn int<R: Rng + ?Sized>(rng: &mut R, range: i64) -> i64 {
    rng.gen_range(-range..=range)
}

fn nonzero_int<R: Rng + ?Sized>(rng: &mut R, range: i64) -> i64 {
    loop {
        let v = int(rng, range);
        if v != 0 {
            return v;
        }
    }
}

/// Small Gaussian rational: integer real part, occasionally a denominator
/// and an imaginary part.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Q {
    let den = if rng.gen_bool(0.25) { rng.gen_range(2..=3) } else { 1 };
    let im = if rng.gen_bool(0.25) { int(rng, range) } else { 0 };
    gauss(int(rng, range), den, im, 1)
}

/// Gaussian integer; the imaginary part is nonzero a quarter of the time.
pub fn gauss_int<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Q {
    let im = if rng.gen_bool(0.25) { int(rng, range) } else { 0 };
    gauss(int(rng, range), 1, im, 1)
}

pub fn gauss_int_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, range: i64) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| gauss_int(rng, range))
}

pub fn real_int_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> Vector<Q> {
    Vector::new((0..dim).map(|_| Q::from_i64(int(rng, range))).collect())
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> Vector<Q> {
    Vector::new((0..dim).map(|_| scalar(rng, range)).collect())
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, range: i64) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| scalar(rng, range))
}

pub fn invertible<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> GroupElement<Q> {
    loop {
        if let Ok(g) = GroupElement::new(matrix(rng, dim, dim, range)) {
            return g;
        }
    }
}

/// Invertible matrix that is not symplectic.
pub fn non_symplectic<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R) -> GroupElement<Q> {
    loop {
        let g = invertible(rng, ctx.dim(), 3);
        if !ctx.is_symplectic(g.matrix(), 0.0).expect("matching dimension") {
            return g;
        }
    }
}

pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> Matrix<Q> {
    let m = gauss_int_matrix(rng, dim, dim, range);
    m.try_add(&m.transpose()).expect("square")
}

pub fn skew<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> Matrix<Q> {
    let m = gauss_int_matrix(rng, dim, dim, range);
    m.try_sub(&m.transpose()).expect("square")
}

pub fn enhanced<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> EnhancedElement<Q> {
    EnhancedElement::new(
        vector(rng, dim, range),
        vector(rng, dim, range),
        matrix(rng, dim, dim, range),
    )
    .expect("consistent dimensions")
}

/// Product of `2k` transvections with small integer data.
pub fn symplectic<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R, k: usize) -> GroupElement<Q> {
    let mut g = GroupElement::identity(ctx.dim());
    for _ in 0..2 * k {
        let w = real_int_vector(rng, ctx.dim(), 1);
        let c = Q::from_i64(nonzero_int(rng, 2));
        let t = ctx.transvection(&w, &c).expect("matching dimension");
        g = g.compose(&t).expect("matching dimension");
    }
    g
}

/// Product of `2k` transvections along sparse `±1` directions with
/// `c = ±1`; keeps norms moderate for floating-point checks.
pub fn mild_symplectic<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R, k: usize) -> GroupElement<Q> {
    let mut g = GroupElement::identity(ctx.dim());
    for _ in 0..2 * k {
        let w = sparse_sign_vector(rng, ctx.dim());
        let c = Q::from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
        let t = ctx.transvection(&w, &c).expect("matching dimension");
        g = g.compose(&t).expect("matching dimension");
    }
    g
}

/// Element of `Sp ∩ (GL_n x GL_n)`.
pub fn levi<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R) -> GroupElement<Q> {
    loop {
        let a = Matrix::from_fn(ctx.n(), ctx.n(), |_, _| Q::from_i64(int(rng, 2)));
        if let Ok(g) = ctx.levi_element(&a) {
            return g;
        }
    }
}

/// `A` with `sigma(A) = alpha A`.
pub fn l_matrix<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R, alpha: AlphaSign, range: i64) -> Matrix<Q> {
    let (k, p) = ctx
        .cartan_split(&matrix(rng, ctx.dim(), ctx.dim(), range))
        .expect("matching dimension");
    match alpha {
        AlphaSign::Minus => k,
        AlphaSign::Plus => p,
    }
}

/// Gaussian-integer `A` with `sigma(A) = alpha A`: `M + alpha sigma(M)`.
pub fn l_matrix_int<R: Rng + ?Sized>(
    ctx: &SymplecticContext<Q>,
    rng: &mut R,
    alpha: AlphaSign,
    range: i64,
) -> Matrix<Q> {
    let m = gauss_int_matrix(rng, ctx.dim(), ctx.dim(), range);
    let s = ctx.sigma_end(&m).expect("matching dimension").scale(&alpha.scalar());
    m.try_add(&s).expect("square")
}

/// Element of `L` for the given sign.
pub fn l_element<R: Rng + ?Sized>(
    ctx: &SymplecticContext<Q>,
    rng: &mut R,
    alpha: AlphaSign,
    range: i64,
) -> EnhancedElement<Q> {
    let u = vector(rng, ctx.dim(), range);
    let a = l_matrix(ctx, rng, alpha, range);
    ctx.embed_l(&u, &a, alpha, 0.0).expect("A satisfies the sign condition")
}

/// `1 - u u^T / (u^T u)`, or the identity for `u = 0`.
fn projector(u: &Vector<Q>) -> Matrix<Q> {
    let d = u.dim();
    let norm = u.dot(u);
    if num_traits::Zero::is_zero(&norm) {
        return Matrix::identity(d);
    }
    Matrix::from_fn(d, d, |i, j| {
        let delta = if i == j { Q::from_i64(1) } else { Q::from_i64(0) };
        delta - u.entries[i].clone() * u.entries[j].clone() / norm.clone()
    })
}

/// Nonzero vector with one or two entries `±1`, so that `u^T u <= 2`.
pub fn sparse_sign_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<Q> {
    let mut e = vec![Q::from_i64(0); dim];
    let count = if dim > 1 && rng.gen_bool(0.5) { 2 } else { 1 };
    for _ in 0..count {
        let i = rng.gen_range(0..dim);
        e[i] = Q::from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    Vector::new(e)
}

/// Invertible `p(M)` from a random integer polynomial `p`.
fn invertible_poly<R: Rng + ?Sized>(
    rng: &mut R,
    m: &Matrix<Q>,
    constant: Option<i64>,
    step: usize,
    terms: usize,
) -> Matrix<Q> {
    loop {
        let mut coeffs = vec![Q::from_i64(0); step * terms + 1];
        coeffs[0] = Q::from_i64(constant.unwrap_or_else(|| nonzero_int(rng, 3)));
        for t in 1..=terms {
            coeffs[step * t] = Q::from_i64(int(rng, 2));
        }
        let z = Poly::new(coeffs).eval_matrix(m).expect("square");
        if z.is_invertible(0.0) {
            return z;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessInstance {
    pub n: usize,
    pub alpha: AlphaSign,
    pub constraint: GroupConstraint,
    pub x: EnhancedElement<Q>,
    pub y: EnhancedElement<Q>,
    pub g: GroupElement<Q>,
}

/// `X ∈ L`, `g = s z` with `s` symplectic and `z` a stabilizer of `X` that
/// is a polynomial in `A`, and `Y = g · X`.
///
/// Either `u = 0` and `z` is any invertible polynomial in `A` (a scalar a
/// quarter of the time), or `A u = 0` and `z = 1 + A r(A)`.
pub fn witness_instance<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R, alpha: AlphaSign) -> WitnessInstance {
    let d = ctx.dim();
    let (x, z) = if rng.gen_bool(0.5) {
        let a = l_matrix_int(ctx, rng, alpha, 2);
        let z = if rng.gen_bool(0.25) {
            Matrix::scalar(d, Q::from_i64(nonzero_int(rng, 3)))
        } else {
            invertible_poly(rng, &a, None, 1, 2)
        };
        (
            ctx.embed_l(&Vector::zeros(d), &a, alpha, 0.0).expect("sign condition"),
            z,
        )
    } else {
        let u = sparse_sign_vector(rng, d);
        let p = projector(&u);
        // J M lies in sp for symmetric M and in p for skew M
        let r = match alpha {
            AlphaSign::Minus => symmetric(rng, d, 1),
            AlphaSign::Plus => skew(rng, d, 1),
        };
        let a = ctx
            .j()
            .try_mul(&p.try_mul(&r).and_then(|m| m.try_mul(&p)).expect("square"))
            .expect("square");
        let z = invertible_poly(rng, &a, Some(1), 1, 2);
        (ctx.embed_l(&u, &a, alpha, 0.0).expect("sign condition"), z)
    };
    let k = rng.gen_range(1..=3);
    let s = mild_symplectic(ctx, rng, k);
    let g = s
        .compose(&GroupElement::new(z).expect("invertible"))
        .expect("matching dimension");
    let y = ctx.act(&g, &x).expect("matching dimension");
    WitnessInstance {
        n: ctx.n(),
        alpha,
        constraint: GroupConstraint::Symplectic,
        x,
        y,
        g,
    }
}

/// Instance on a block-diagonal locus: `X` in `L1` or `L2`, `g = s z` with
/// `s` in `K` and `z` a block-diagonal stabilizer (a polynomial in `A^2`).
pub fn theta_instance<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R, locus: ThetaLocus) -> WitnessInstance {
    let n = ctx.n();
    let d = ctx.dim();
    let with_vector = rng.gen_bool(0.5);
    let u1 = if with_vector {
        sparse_sign_vector(rng, n)
    } else {
        Vector::zeros(n)
    };
    let u2 = match (locus, with_vector) {
        (ThetaLocus::L1, true) => sparse_sign_vector(rng, n),
        _ => Vector::zeros(n),
    };
    // A u = (B u2, C u1) = 0
    let squeeze = |m: Matrix<Q>, w: &Vector<Q>| {
        let p = projector(w);
        p.try_mul(&m).and_then(|x| x.try_mul(&p)).expect("square")
    };
    let b = squeeze(symmetric(rng, n, 1), &u2);
    let c = squeeze(symmetric(rng, n, 1), &u1);
    let u = match locus {
        ThetaLocus::L1 => Vector::new(u1.entries.iter().chain(&u2.entries).cloned().collect()),
        ThetaLocus::L2 => u1.clone(),
    };
    let x = embed_theta_rep(ctx, locus, &u, &b, &c, 0.0).expect("symmetric blocks");
    let a2 = x.a.try_mul(&x.a).expect("square");
    let z = if x.u.is_zero() {
        if rng.gen_bool(0.25) {
            Matrix::scalar(d, Q::from_i64(nonzero_int(rng, 3)))
        } else {
            invertible_poly(rng, &a2, None, 1, 2)
        }
    } else {
        invertible_poly(rng, &a2, Some(1), 1, 2)
    };
    let s = levi(ctx, rng);
    let g = s
        .compose(&GroupElement::new(z).expect("invertible"))
        .expect("matching dimension");
    let y = ctx.act(&g, &x).expect("matching dimension");
    WitnessInstance {
        n,
        alpha: AlphaSign::Minus,
        constraint: GroupConstraint::Constrained,
        x,
        y,
        g,
    }
}

fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Eigenvalue with modulus in `[0.1, 10]`; a fifth are negative reals.
fn planted_eigenvalue<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let modulus = 10f64.powf(rng.gen_range(-1.0..1.0));
    if rng.gen_bool(0.2) {
        Complex64::new(-modulus, 0.0)
    } else {
        unit_phase(rng) * modulus
    }
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `1 + 0.5 * noise` with condition number at most `max_cond`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_cond: f64) -> Matrix<Complex64> {
    loop {
        let p = Matrix::from_fn(dim, dim, |i, j| {
            let base = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            base + random_complex(rng) * 0.5
        });
        if condition_number(&p).is_ok_and(|c| c <= max_cond) {
            return p;
        }
    }
}

/// Invertible approx matrix `P T P^{-1}` with planted eigenvalues and
/// condition number at most `1e6`. With `repeated`, eigenvalues are reused
/// and `T` gets nonzero superdiagonal entries, producing nontrivial Jordan
/// blocks.
pub fn sqrt_input<R: Rng + ?Sized>(rng: &mut R, dim: usize, repeated: bool) -> Matrix<Complex64> {
    loop {
        let mut diag: Vec<Complex64> = Vec::with_capacity(dim);
        for i in 0..dim {
            if repeated && i > 0 && rng.gen_bool(0.5) {
                diag.push(diag[i - 1]);
            } else {
                diag.push(planted_eigenvalue(rng));
            }
        }
        let t = Matrix::from_fn(dim, dim, |i, j| {
            if i == j {
                diag[i]
            } else if j == i + 1 && repeated {
                random_complex(rng)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let p = well_conditioned(rng, dim, 1e2);
        let p_inv = p.inverse().expect("well conditioned");
        let h = p.try_mul(&t).and_then(|m| m.try_mul(&p_inv)).expect("square");
        if condition_number(&h).is_ok_and(|c| c <= 1e6) {
            return h;
        }
    }
}

/// Approx matrix with the given eigenvalues, conjugated by a
/// well-conditioned matrix.
pub fn planted_spectrum<R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[Complex64]) -> Matrix<Complex64> {
    let d = eigenvalues.len();
    let p = well_conditioned(rng, d, 1e2);
    let p_inv = p.inverse().expect("well conditioned");
    p.try_mul(&Matrix::diag(eigenvalues))
        .and_then(|m| m.try_mul(&p_inv))
        .expect("square")
}

/// Planted eigenvalues pairwise separated by at least `gap` (relative).
pub fn separated_eigenvalues<R: Rng + ?Sized>(rng: &mut R, count: usize, gap: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let z = planted_eigenvalue(rng);
        if out.iter().all(|w| (w - z).norm() > gap * w.norm().max(z.norm())) {
            out.push(z);
        }
    }
    out
}

/// Exact scalar matrix with `sigma`-fixed `h` of the form `sigma(g) g`.
pub fn sigma_fixed_input<R: Rng + ?Sized>(ctx: &SymplecticContext<Q>, rng: &mut R) -> Result<Matrix<Q>> {
    let g = invertible(rng, ctx.dim(), 2);
    ctx.sigma_end(g.matrix())?.try_mul(g.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let ctx = SymplecticContext::<Q>::new(n);
            for alpha in [AlphaSign::Minus, AlphaSign::Plus] {
                for _ in 0..5 {
                    let inst = witness_instance(&ctx, &mut rng, alpha);
                    assert!(ctx.in_l(&inst.x, alpha, 0.0).unwrap());
                    assert!(ctx.in_l(&inst.y, alpha, 0.0).unwrap());
                }
            }
            for locus in [ThetaLocus::L1, ThetaLocus::L2] {
                for _ in 0..5 {
                    let inst = theta_instance(&ctx, &mut rng, locus);
                    assert!(ctx.in_l(&inst.y, AlphaSign::Minus, 0.0).unwrap());
                    assert!(ctx.is_block_diagonal(inst.g.matrix(), 0.0).unwrap());
                }
            }
            let s = symplectic(&ctx, &mut rng, 10);
            assert!(ctx.is_symplectic(s.matrix(), 0.0).unwrap());
            assert!(ctx.is_symplectic(levi(&ctx, &mut rng).matrix(), 0.0).unwrap());
        }
    }
}
