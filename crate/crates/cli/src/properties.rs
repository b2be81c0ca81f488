//! Every checked property as a pair of functions: `generate` draws a JSON
//! instance from a trial rng, `evaluate` measures it. Replaying a dumped
//! instance runs `evaluate` alone, so residuals reproduce exactly.
//!
//! Instances carry their own `"mode"`. Properties that are approximate by
//! nature (square roots of random complex matrices, spectra) always emit
//! approx instances; the GL2 conjugacy search is exact-only.

use num_complex::Complex64;
use orbit_embed::linalg::{eigen_spectrum, rank, solve_linear, SolutionSpace};
use orbit_embed::random as rnd;
use orbit_embed::{
    canonical_k_rep, find_conjugator, gamma_big, gamma_small, gl2_conjugator, obstruction_check, primary_sqrt, sigma5,
    sigma_fixed_sqrt, symplectic_witness, unipotent_stabilizer, AlphaSign, Approx, DynMatrix, EnhancedElement, Error,
    Exact, GroupConstraint, GroupElement, Matrix, Mode, Result, Scalar, SymplecticContext, ThetaLocus, Tolerances,
    Variance, Vector,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

type Q = Exact;

/// Sign relating `Gamma_k` on the embedded element to `gamma_k`.
pub const RESTRICTION_SIGN: i64 = -1;

#[derive(Clone, Copy, Debug)]
pub struct Trial {
    pub n: usize,
    pub index: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.bound
    }
}

pub struct Property {
    pub name: &'static str,
    pub module: &'static str,
    /// Runs once per `n` in the configured range; otherwise once in total.
    pub per_n: bool,
    pub generate: fn(&mut ChaCha8Rng, &Trial) -> Value,
    pub evaluate: fn(&Value, &Tolerances) -> Result<Vec<Check>>,
}

macro_rules! by_mode {
    ($f:ident) => {
        |inst: &Value, tol: &Tolerances| match mode_of(inst)? {
            Mode::Exact => $f::<Exact>(inst, tol),
            Mode::Approx => $f::<Approx>(inst, tol),
        }
    };
}

pub fn all() -> Vec<Property> {
    vec![
        Property {
            name: "linear-solve",
            module: "field-linalg",
            per_n: true,
            generate: gen_linear_solve,
            evaluate: by_mode!(eval_linear_solve),
        },
        Property {
            name: "planted-spectrum",
            module: "field-linalg",
            per_n: false,
            generate: gen_planted_spectrum,
            evaluate: eval_planted_spectrum,
        },
        Property {
            name: "sigma-involution",
            module: "symplectic-structures",
            per_n: true,
            generate: gen_one_matrix,
            evaluate: by_mode!(eval_sigma_involution),
        },
        Property {
            name: "sigma-anti-multiplicative",
            module: "symplectic-structures",
            per_n: true,
            generate: gen_two_matrices,
            evaluate: by_mode!(eval_sigma_anti),
        },
        Property {
            name: "symplectic-membership",
            module: "symplectic-structures",
            per_n: true,
            generate: gen_membership,
            evaluate: by_mode!(eval_membership),
        },
        Property {
            name: "cartan-split",
            module: "symplectic-structures",
            per_n: true,
            generate: gen_one_matrix,
            evaluate: by_mode!(eval_cartan),
        },
        Property {
            name: "equivariance",
            module: "enhanced-action",
            per_n: true,
            generate: gen_group_element,
            evaluate: by_mode!(eval_equivariance),
        },
        Property {
            name: "l-stability",
            module: "enhanced-action",
            per_n: true,
            generate: gen_l_stability,
            evaluate: by_mode!(eval_l_stability),
        },
        Property {
            name: "group-action",
            module: "enhanced-action",
            per_n: true,
            generate: gen_group_action,
            evaluate: by_mode!(eval_group_action),
        },
        Property {
            name: "sqrt-residual",
            module: "sqrt-calculus",
            per_n: true,
            generate: gen_sqrt_residual,
            evaluate: eval_sqrt_residual,
        },
        Property {
            name: "sqrt-commutant",
            module: "sqrt-calculus",
            per_n: true,
            generate: gen_sqrt_commutant,
            evaluate: eval_sqrt_commutant,
        },
        Property {
            name: "sqrt-fixed-vector",
            module: "sqrt-calculus",
            per_n: true,
            generate: gen_sqrt_fixed_vector,
            evaluate: eval_sqrt_fixed_vector,
        },
        Property {
            name: "sqrt-sigma-fixed",
            module: "sqrt-calculus",
            per_n: true,
            generate: gen_sqrt_sigma_fixed,
            evaluate: by_mode!(eval_sqrt_sigma_fixed),
        },
        Property {
            name: "witness",
            module: "orbit-engine",
            per_n: true,
            generate: gen_witness,
            evaluate: by_mode!(eval_witness),
        },
        Property {
            name: "witness-theta",
            module: "orbit-engine",
            per_n: true,
            generate: gen_witness_theta,
            evaluate: by_mode!(eval_witness),
        },
        Property {
            name: "injectivity",
            module: "orbit-engine",
            per_n: true,
            generate: gen_injectivity,
            evaluate: by_mode!(eval_injectivity),
        },
        Property {
            name: "injectivity-theta",
            module: "orbit-engine",
            per_n: true,
            generate: gen_injectivity_theta,
            evaluate: by_mode!(eval_injectivity),
        },
        Property {
            name: "rank-mismatch",
            module: "orbit-engine",
            per_n: true,
            generate: gen_rank_mismatch,
            evaluate: by_mode!(eval_rank_mismatch),
        },
        Property {
            name: "gamma-invariance",
            module: "invariants",
            per_n: true,
            generate: gen_gamma_invariance,
            evaluate: by_mode!(eval_gamma_invariance),
        },
        Property {
            name: "gamma-even-vanishing",
            module: "invariants",
            per_n: true,
            generate: gen_sp_pair,
            evaluate: by_mode!(eval_gamma_even),
        },
        Property {
            name: "gamma-small-invariance",
            module: "invariants",
            per_n: true,
            generate: gen_gamma_small_invariance,
            evaluate: by_mode!(eval_gamma_small_invariance),
        },
        Property {
            name: "restriction-identity",
            module: "invariants",
            per_n: true,
            generate: gen_sp_pair,
            evaluate: by_mode!(eval_restriction),
        },
        Property {
            name: "k-rep-invariance",
            module: "gl2-case-study",
            per_n: false,
            generate: gen_k_rep,
            evaluate: by_mode!(eval_k_rep),
        },
        Property {
            name: "gl2-trace-conjugacy",
            module: "gl2-case-study",
            per_n: false,
            generate: gen_gl2_conjugacy,
            evaluate: eval_gl2_conjugacy,
        },
        Property {
            name: "unipotent-squares",
            module: "gl2-case-study",
            per_n: false,
            generate: gen_unipotent,
            evaluate: by_mode!(eval_unipotent),
        },
        Property {
            name: "sigma5-anti-involution",
            module: "gl2-case-study",
            per_n: false,
            generate: gen_sigma5,
            evaluate: by_mode!(eval_sigma5),
        },
    ]
}

pub fn find(name: &str) -> Option<Property> {
    all().into_iter().find(|p| p.name == name)
}

// ---- instance encoding ----

fn enc_m(m: &Matrix<Q>, mode: Mode) -> Value {
    match mode {
        Mode::Exact => m.to_json(),
        Mode::Approx => m.to_approx().to_json(),
    }
}

fn enc_v(v: &Vector<Q>, mode: Mode) -> Value {
    match mode {
        Mode::Exact => v.to_json(),
        Mode::Approx => v.map(Scalar::to_c64).to_json(),
    }
}

fn enc_x(x: &EnhancedElement<Q>, mode: Mode) -> Value {
    match mode {
        Mode::Exact => x.to_json(),
        Mode::Approx => x.map(Scalar::to_c64).to_json(),
    }
}

fn enc_s(z: &Q, mode: Mode) -> Value {
    match mode {
        Mode::Exact => z.to_json(),
        Mode::Approx => z.to_c64().to_json(),
    }
}

fn field<'a>(inst: &'a Value, key: &str) -> Result<&'a Value> {
    inst.get(key)
        .ok_or_else(|| Error::Parse(format!("instance is missing {key:?}")))
}

pub fn mode_of(inst: &Value) -> Result<Mode> {
    let m = field(inst, "mode")?
        .as_str()
        .ok_or_else(|| Error::Parse("mode must be a string".into()))?;
    m.parse()
}

fn uint(inst: &Value, key: &str) -> Result<u64> {
    field(inst, key)?
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("{key} must be a non-negative integer")))
}

fn dim_n(inst: &Value) -> Result<usize> {
    let n = uint(inst, "n")? as usize;
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    Ok(n)
}

fn mat<S: Scalar>(inst: &Value, key: &str) -> Result<Matrix<S>> {
    Matrix::from_json(field(inst, key)?)
}

fn vect<S: Scalar>(inst: &Value, key: &str) -> Result<Vector<S>> {
    Vector::from_json(field(inst, key)?, Variance::Vector)
}

fn elt<S: Scalar>(inst: &Value, key: &str) -> Result<EnhancedElement<S>> {
    EnhancedElement::from_json(field(inst, key)?)
}

fn group<S: Scalar>(inst: &Value, key: &str) -> Result<GroupElement<S>> {
    GroupElement::new(mat(inst, key)?)
}

fn scal<S: Scalar>(inst: &Value, key: &str) -> Result<S> {
    S::from_json(field(inst, key)?)
}

fn alpha_of(inst: &Value) -> Result<AlphaSign> {
    let a = field(inst, "alpha")?
        .as_i64()
        .ok_or_else(|| Error::Parse("alpha must be an integer".into()))?;
    AlphaSign::from_i64(a)
}

fn constraint_of(inst: &Value) -> Result<GroupConstraint> {
    field(inst, "constraint")?
        .as_str()
        .ok_or_else(|| Error::Parse("constraint must be a string".into()))?
        .parse()
}

/// Context for `n`, checked against the size of the instance matrices.
fn ctx_for<S: Scalar>(inst: &Value) -> Result<SymplecticContext<S>> {
    Ok(SymplecticContext::new(dim_n(inst)?))
}

// ---- measurements ----

/// Exact checks compare against zero.
fn bound<S: Scalar>(b: f64) -> f64 {
    match S::MODE {
        Mode::Exact => 0.0,
        Mode::Approx => b,
    }
}

fn residual<S: Scalar>(m: &Matrix<S>) -> f64 {
    if m.is_zero() {
        0.0
    } else {
        // a nonzero exact difference must never read as zero
        m.norm().max(f64::MIN_POSITIVE)
    }
}

fn check(name: &str, residual: f64, bound: f64) -> Check {
    Check {
        name: name.into(),
        residual,
        bound,
    }
}

fn flag(name: &str, ok: bool) -> Check {
    check(name, if ok { 0.0 } else { 1.0 }, 0.0)
}

fn mat_check<S: Scalar>(name: &str, a: &Matrix<S>, b: &Matrix<S>, tol: f64) -> Result<Check> {
    Ok(check(name, residual(&a.try_sub(b)?), bound::<S>(tol)))
}

fn elt_check<S: Scalar>(name: &str, a: &EnhancedElement<S>, b: &EnhancedElement<S>, tol: f64) -> Result<Check> {
    let d = a.try_sub(b)?;
    let r = if d.is_zero() {
        0.0
    } else {
        d.norm().max(f64::MIN_POSITIVE)
    };
    Ok(check(name, r, bound::<S>(tol)))
}

fn scalar_check<S: Scalar>(name: &str, a: S, b: S, tol: f64) -> Check {
    let d = a - b;
    let r = if d.is_zero() {
        0.0
    } else {
        d.magnitude().max(f64::MIN_POSITIVE)
    };
    check(name, r, bound::<S>(tol))
}

// ---- field-linalg ----

fn gen_linear_solve(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let rows = rng.gen_range(1..=4 * t.n);
    let cols = rng.gen_range(1..=4 * t.n);
    // low-rank coefficient matrices exercise nontrivial kernels
    let r = rng.gen_range(1..=rows.min(cols));
    let a = rnd::matrix(rng, rows, r, 4)
        .try_mul(&rnd::matrix(rng, r, cols, 4))
        .expect("inner sizes agree");
    let consistent = rng.gen_bool(0.5);
    let b = if consistent {
        Vector::new(a.mul_vec(&rnd::vector(rng, cols, 5).entries).expect("sizes agree"))
    } else {
        rnd::vector(rng, rows, 5)
    };
    json!({"mode": t.mode, "A": enc_m(&a, t.mode), "b": enc_v(&b, t.mode), "consistent": consistent})
}

fn eval_linear_solve<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let a: Matrix<S> = mat(inst, "A")?;
    let b: Vector<S> = vect(inst, "b")?;
    let consistent = field(inst, "consistent")?.as_bool().unwrap_or(false);
    let scale = 1.0 + a.norm();
    Ok(match solve_linear(&a, &b, tol.residual)? {
        SolutionSpace::Affine { particular, kernel } => {
            let ap = Matrix::from_rows(vec![a.mul_vec(&particular.entries)?])?;
            let bm = Matrix::from_rows(vec![b.entries.clone()])?;
            let mut out = vec![mat_check(
                "substitution",
                &ap,
                &bm,
                tol.residual * (scale * (1.0 + particular.norm()) + b.norm()),
            )?];
            let worst = kernel
                .iter()
                .map(|k| Ok(residual(&Matrix::from_rows(vec![a.mul_vec(&k.entries)?])?) / (1.0 + k.norm())))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.push(check("kernel", worst, bound::<S>(tol.residual * scale)));
            out.push(flag(
                "kernel-dimension",
                kernel.len() + rank(&a, tol.residual) == a.cols(),
            ));
            out
        }
        SolutionSpace::Infeasible { .. } => {
            let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
                if j < a.cols() {
                    a[(i, j)].clone()
                } else {
                    b.entries[i].clone()
                }
            });
            vec![
                flag("consistent-systems-solve", !consistent),
                flag("rank-certificate", rank(&a, tol.residual) < rank(&aug, tol.residual)),
            ]
        }
    })
}

fn gen_planted_spectrum(rng: &mut ChaCha8Rng, _: &Trial) -> Value {
    let eig = rnd::separated_eigenvalues(rng, 6, 1e-2);
    let h = rnd::planted_spectrum(rng, &eig);
    json!({"mode": Mode::Approx, "eigenvalues": eig.iter().map(Scalar::to_json).collect::<Vec<_>>(), "h": h.to_json()})
}

fn eval_planted_spectrum(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let h: Matrix<Approx> = mat(inst, "h")?;
    let planted = field(inst, "eigenvalues")?
        .as_array()
        .ok_or_else(|| Error::Parse("eigenvalues must be an array".into()))?
        .iter()
        .map(Approx::from_json)
        .collect::<Result<Vec<_>>>()?;
    let clusters = eigen_spectrum(&h, tol.cluster_radius)?;
    let worst = planted
        .iter()
        .map(|l| {
            clusters
                .iter()
                .map(|c| (c.value - l).norm() / l.norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let total: usize = clusters.iter().map(|c| c.multiplicity).sum();
    Ok(vec![
        check("relative-error", worst, tol.cluster_radius),
        flag("multiplicity", total == h.rows()),
    ])
}

// ---- symplectic-structures ----

fn gen_one_matrix(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    json!({"mode": t.mode, "n": t.n, "A": enc_m(&rnd::matrix(rng, 2 * t.n, 2 * t.n, 5), t.mode)})
}

fn gen_two_matrices(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let d = 2 * t.n;
    json!({
        "mode": t.mode, "n": t.n,
        "A": enc_m(&rnd::matrix(rng, d, d, 5), t.mode),
        "B": enc_m(&rnd::matrix(rng, d, d, 5), t.mode),
    })
}

fn eval_sigma_involution<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let a: Matrix<S> = mat(inst, "A")?;
    let s = ctx.sigma_end(&a)?;
    let dense = ctx.j_inv().try_mul(&a.transpose())?.try_mul(ctx.j())?;
    let b = tol.verification * (1.0 + a.norm());
    Ok(vec![
        mat_check("involution", &ctx.sigma_end(&s)?, &a, b)?,
        mat_check("adjoint-formula", &s, &dense, b)?,
    ])
}

fn eval_sigma_anti<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let (a, b): (Matrix<S>, Matrix<S>) = (mat(inst, "A")?, mat(inst, "B")?);
    let lhs = ctx.sigma_end(&a.try_mul(&b)?)?;
    let rhs = ctx.sigma_end(&b)?.try_mul(&ctx.sigma_end(&a)?)?;
    Ok(vec![mat_check(
        "anti-multiplicative",
        &lhs,
        &rhs,
        tol.verification * (1.0 + a.norm() * b.norm()),
    )?])
}

fn gen_membership(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let s = rnd::symplectic(&ctx, rng, 1 + (t.index % 10) as usize);
    let g = rnd::non_symplectic(&ctx, rng);
    json!({"mode": t.mode, "n": t.n, "s": enc_m(s.matrix(), t.mode), "g": enc_m(g.matrix(), t.mode)})
}

fn eval_membership<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let (s, g): (Matrix<S>, Matrix<S>) = (mat(inst, "s")?, mat(inst, "g")?);
    let one = Matrix::identity(ctx.dim());
    let ss = ctx.sigma_end(&s)?.try_mul(&s)?;
    let gg = ctx.sigma_end(&g)?.try_mul(&g)?;
    let b = tol.residual * ctx.j().norm() * (1.0 + s.norm() * s.norm());
    Ok(vec![
        flag("generator-product-is-symplectic", ctx.is_symplectic(&s, tol.residual)?),
        mat_check("sigma(s) s = 1", &ss, &one, b)?,
        flag("non-symplectic-is-rejected", !ctx.is_symplectic(&g, tol.residual)?),
        flag(
            "sigma(g) g != 1",
            residual(&gg.try_sub(&one)?) > bound::<S>(tol.residual * (1.0 + g.norm() * g.norm())),
        ),
    ])
}

fn eval_cartan<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let a: Matrix<S> = mat(inst, "A")?;
    let (k, p) = ctx.cartan_split(&a)?;
    let b = tol.verification * (1.0 + a.norm());
    Ok(vec![
        mat_check("sigma(k) = -k", &ctx.sigma_end(&k)?, &k.scale(&-S::one()), b)?,
        mat_check("sigma(p) = p", &ctx.sigma_end(&p)?, &p, b)?,
        mat_check("k + p = A", &k.try_add(&p)?, &a, b)?,
    ])
}

// ---- enhanced-action ----

fn gen_group_element(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let d = 2 * t.n;
    json!({
        "mode": t.mode, "n": t.n,
        "g": enc_m(rnd::invertible(rng, d, 3).matrix(), t.mode),
        "X": enc_x(&rnd::enhanced(rng, d, 4), t.mode),
    })
}

fn eval_equivariance<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let g: GroupElement<S> = group(inst, "g")?;
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let lhs = ctx.sigma_l(&ctx.act(&g, &x)?)?;
    let rhs = ctx.act(&ctx.theta_group(&g)?, &ctx.sigma_l(&x)?)?;
    Ok(vec![elt_check(
        "sigma_L(g.X) = theta(g).sigma_L(X)",
        &lhs,
        &rhs,
        tol.verification * (1.0 + lhs.norm()),
    )?])
}

fn gen_l_stability(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let alpha = if t.index.is_multiple_of(2) {
        AlphaSign::Minus
    } else {
        AlphaSign::Plus
    };
    let g = rnd::symplectic(&ctx, rng, 3);
    let x = rnd::l_element(&ctx, rng, alpha, 4);
    json!({"mode": t.mode, "n": t.n, "alpha": alpha.value(), "g": enc_m(g.matrix(), t.mode), "X": enc_x(&x, t.mode)})
}

fn eval_l_stability<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let alpha = alpha_of(inst)?;
    let g: GroupElement<S> = group(inst, "g")?;
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let gx = ctx.act(&g, &x)?;
    let r = |e: &EnhancedElement<S>| -> Result<f64> {
        let d = ctx.l_defect(e, alpha)?;
        Ok(if d == 0.0 || S::MODE == Mode::Approx {
            d
        } else {
            d.max(f64::MIN_POSITIVE)
        })
    };
    Ok(vec![
        check("X in L", r(&x)?, bound::<S>(tol.residual * (1.0 + x.norm()))),
        check("g.X in L", r(&gx)?, bound::<S>(tol.verification * (1.0 + gx.norm()))),
    ])
}

fn gen_group_action(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let d = 2 * t.n;
    json!({
        "mode": t.mode, "n": t.n,
        "g": enc_m(rnd::invertible(rng, d, 3).matrix(), t.mode),
        "h": enc_m(rnd::invertible(rng, d, 3).matrix(), t.mode),
        "X": enc_x(&rnd::enhanced(rng, d, 4), t.mode),
    })
}

fn eval_group_action<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let (g, h): (GroupElement<S>, GroupElement<S>) = (group(inst, "g")?, group(inst, "h")?);
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let lhs = ctx.act(&g.compose(&h)?, &x)?;
    let rhs = ctx.act(&g, &ctx.act(&h, &x)?)?;
    let id = ctx.act(&GroupElement::identity(ctx.dim()), &x)?;
    Ok(vec![
        elt_check("(gh).X = g.(h.X)", &lhs, &rhs, tol.verification * (1.0 + lhs.norm()))?,
        elt_check("1.X = X", &id, &x, tol.verification * (1.0 + x.norm()))?,
    ])
}

// ---- sqrt-calculus ----

fn approx_root(h: &Matrix<Approx>, tol: &Tolerances) -> Result<(Matrix<Approx>, f64)> {
    let out = primary_sqrt(h, tol)?.into_approx();
    Ok((out.root, out.cert.residual))
}

fn commutator(a: &Matrix<Approx>, b: &Matrix<Approx>) -> Result<f64> {
    Ok(a.try_mul(b)?.dist(&b.try_mul(a)?))
}

fn gen_sqrt_residual(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let h = rnd::sqrt_input(rng, 2 * t.n, t.index % 2 == 1);
    json!({"mode": Mode::Approx, "h": h.to_json()})
}

fn eval_sqrt_residual(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let h: Matrix<Approx> = mat(inst, "h")?;
    let (s, cert) = approx_root(&h, tol)?;
    let hn = h.norm();
    Ok(vec![
        check("S^2 = h", s.try_mul(&s)?.dist(&h), tol.residual * hn),
        check("Sh = hS", commutator(&s, &h)?, tol.residual * hn * hn),
        check("certificate", cert, tol.residual * (1.0 + hn)),
    ])
}

fn gen_sqrt_commutant(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let h = rnd::sqrt_input(rng, 2 * t.n, t.index % 2 == 1);
    let c: Vec<Value> = (0..3)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).to_json())
        .collect();
    json!({"mode": Mode::Approx, "h": h.to_json(), "c": c})
}

fn eval_sqrt_commutant(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let h: Matrix<Approx> = mat(inst, "h")?;
    let c = Vector::<Approx>::from_json(field(inst, "c")?, Variance::Vector)?.entries;
    if c.len() != 3 {
        return Err(Error::Parse("c must hold three coefficients".into()));
    }
    let b = Matrix::scalar(h.rows(), c[0])
        .try_add(&h.scale(&c[1]))?
        .try_add(&h.try_mul(&h)?.scale(&c[2]))?;
    let (s, _) = approx_root(&h, tol)?;
    Ok(vec![check(
        "SB = BS",
        commutator(&s, &b)?,
        tol.verification * b.norm() * s.norm(),
    )])
}

fn gen_sqrt_fixed_vector(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let d = 2 * t.n;
    let mut eig = rnd::separated_eigenvalues(rng, d, 1e-2);
    eig[0] = Complex64::new(1.0, 0.0);
    let p = rnd::well_conditioned(rng, d, 1e2);
    let h = p
        .try_mul(&Matrix::diag(&eig))
        .and_then(|m| m.try_mul(&p.inverse()?))
        .expect("invertible");
    let w: Vec<Value> = p.col(0).iter().map(Scalar::to_json).collect();
    json!({"mode": Mode::Approx, "h": h.to_json(), "w": w})
}

fn eval_sqrt_fixed_vector(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let h: Matrix<Approx> = mat(inst, "h")?;
    let w: Vector<Approx> = vect(inst, "w")?;
    let (s, _) = approx_root(&h, tol)?;
    let sw = Vector::new(s.mul_vec(&w.entries)?);
    Ok(vec![
        check(
            "hw = w",
            Vector::new(h.mul_vec(&w.entries)?).try_sub(&w)?.norm(),
            tol.residual * (1.0 + h.norm()) * w.norm(),
        ),
        check("Sw = w", sw.try_sub(&w)?.norm(), tol.verification * w.norm()),
    ])
}

fn gen_sqrt_sigma_fixed(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let h = rnd::sigma_fixed_input(&ctx, rng).expect("square");
    json!({"mode": t.mode, "n": t.n, "h": enc_m(&h, t.mode)})
}

fn eval_sqrt_sigma_fixed<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let h: Matrix<S> = mat(inst, "h")?;
    let out = sigma_fixed_sqrt(&ctx, &h, tol)?;
    Ok(match out.root() {
        DynMatrix::Exact(s) => {
            let ectx = SymplecticContext::<Exact>::new(ctx.n());
            let he = h.to_exact().ok_or(Error::WrongMode { expected: "exact" })?;
            vec![
                mat_check("S^2 = h", &s.try_mul(&s)?, &he, 0.0)?,
                mat_check("sigma(S) = S", &ectx.sigma_end(&s)?, &s, 0.0)?,
            ]
        }
        DynMatrix::Approx(s) => {
            let actx = SymplecticContext::<Approx>::new(ctx.n());
            let ha = h.to_approx();
            vec![
                check("S^2 = h", s.try_mul(&s)?.dist(&ha), tol.residual * ha.norm()),
                check(
                    "sigma(S) = S",
                    actx.sigma_end(&s)?.dist(&s),
                    tol.verification * s.norm(),
                ),
            ]
        }
    })
}

// ---- orbit-engine ----

fn witness_json(inst: &rnd::WitnessInstance, mode: Mode) -> Value {
    json!({
        "mode": mode,
        "n": inst.n,
        "alpha": inst.alpha.value(),
        "constraint": inst.constraint,
        "X": enc_x(&inst.x, mode),
        "Y": enc_x(&inst.y, mode),
        "g": enc_m(inst.g.matrix(), mode),
    })
}

fn gen_witness(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let alpha = if t.index.is_multiple_of(2) {
        AlphaSign::Minus
    } else {
        AlphaSign::Plus
    };
    witness_json(&rnd::witness_instance(&ctx, rng, alpha), t.mode)
}

fn gen_witness_theta(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let locus = if t.index.is_multiple_of(2) {
        ThetaLocus::L1
    } else {
        ThetaLocus::L2
    };
    witness_json(&rnd::theta_instance(&ctx, rng, locus), t.mode)
}

/// Independent checks of a witness, in the witness's own mode.
pub fn witness_checks<T: Scalar>(
    n: usize,
    w: &Matrix<T>,
    x: &EnhancedElement<T>,
    y: &EnhancedElement<T>,
    constraint: GroupConstraint,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let ctx = SymplecticContext::<T>::new(n);
    let j = ctx.j();
    let wtjw = w.transpose().try_mul(j)?.try_mul(w)?;
    let wg = GroupElement::new(w.clone())?;
    let mut out = vec![
        mat_check("w^T J w = J", &wtjw, j, tol.verification * j.norm())?,
        elt_check("w.X = Y", &ctx.act(&wg, x)?, y, tol.verification * (1.0 + y.norm()))?,
    ];
    if constraint.is_block() {
        let off = ctx.off_block_norm(w)?;
        let off = if off == 0.0 || T::MODE == Mode::Approx {
            off
        } else {
            off.max(f64::MIN_POSITIVE)
        };
        out.push(check("w block-diagonal", off, bound::<T>(tol.verification)));
    }
    Ok(out)
}

fn run_witness<S: Scalar>(
    ctx: &SymplecticContext<S>,
    x: &EnhancedElement<S>,
    y: &EnhancedElement<S>,
    g: &GroupElement<S>,
    constraint: GroupConstraint,
    alpha: AlphaSign,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let report = symplectic_witness(ctx, x, y, g, constraint, alpha, tol)?;
    match &report.witness {
        DynMatrix::Exact(w) => {
            let to_q = |s: &S| s.to_gauss().expect("exact witness from exact input");
            witness_checks(ctx.n(), w, &x.map(to_q), &y.map(to_q), constraint, tol)
        }
        DynMatrix::Approx(w) => witness_checks(ctx.n(), w, &x.map(S::to_c64), &y.map(S::to_c64), constraint, tol),
    }
}

fn eval_witness<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    run_witness(
        &ctx,
        &elt(inst, "X")?,
        &elt(inst, "Y")?,
        &group(inst, "g")?,
        constraint_of(inst)?,
        alpha_of(inst)?,
        tol,
    )
}

fn search_json(inst: &rnd::WitnessInstance, mode: Mode, seed: u64) -> Value {
    let mut v = witness_json(inst, mode);
    let obj = v.as_object_mut().expect("object");
    obj.remove("g");
    obj.insert("search_seed".into(), json!(seed));
    v
}

fn gen_injectivity(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let alpha = if t.index.is_multiple_of(2) {
        AlphaSign::Minus
    } else {
        AlphaSign::Plus
    };
    let inst = rnd::witness_instance(&ctx, rng, alpha);
    search_json(&inst, t.mode, rng.gen())
}

fn gen_injectivity_theta(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let locus = if t.index.is_multiple_of(2) {
        ThetaLocus::L1
    } else {
        ThetaLocus::L2
    };
    let inst = rnd::theta_instance(&ctx, rng, locus);
    search_json(&inst, t.mode, rng.gen())
}

/// Search a conjugator in the linear group, then extract a witness from it.
fn eval_injectivity<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let y: EnhancedElement<S> = elt(inst, "Y")?;
    let constraint = constraint_of(inst)?;
    let linear = if constraint.is_block() {
        GroupConstraint::BlockDiagonal
    } else {
        GroupConstraint::Full
    };
    let search = find_conjugator(&ctx, &x, &y, linear, tol, uint(inst, "search_seed")?)?;
    let Some(g) = search.found() else {
        return Ok(vec![flag("conjugator found", false)]);
    };
    let mut out = vec![
        flag("conjugator found", true),
        elt_check(
            "g^-1.Y = X",
            &ctx.act(&g.inv(), &y)?,
            &x,
            tol.verification * (1.0 + x.norm()),
        )?,
    ];
    out.extend(run_witness(&ctx, &x, &y, g, constraint, alpha_of(inst)?, tol)?);
    Ok(out)
}

/// `P E_r Q` with `P`, `Q` invertible.
fn rank_r(rng: &mut ChaCha8Rng, d: usize, r: usize) -> Matrix<Q> {
    let e = Matrix::from_fn(d, d, |i, j| {
        if i == j && i < r {
            Q::from_i64(1)
        } else {
            Q::from_i64(0)
        }
    });
    let p = rnd::invertible(rng, d, 2);
    let q = rnd::invertible(rng, d, 2);
    p.matrix()
        .try_mul(&e)
        .and_then(|m| m.try_mul(q.matrix()))
        .expect("square")
}

fn gen_rank_mismatch(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let d = 2 * t.n;
    let r1 = rng.gen_range(0..=d);
    let r2 = loop {
        let r = rng.gen_range(0..=d);
        if r != r1 {
            break r;
        }
    };
    let mk = |rng: &mut ChaCha8Rng, r| {
        let a = rank_r(rng, d, r);
        EnhancedElement::new(rnd::vector(rng, d, 3), rnd::vector(rng, d, 3), a).expect("sizes agree")
    };
    let x = mk(rng, r1);
    let y = mk(rng, r2);
    json!({"mode": t.mode, "n": t.n, "X": enc_x(&x, t.mode), "Y": enc_x(&y, t.mode), "search_seed": rng.gen::<u64>()})
}

fn eval_rank_mismatch<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let y: EnhancedElement<S> = elt(inst, "Y")?;
    let ranks_differ = rank(&x.a, tol.residual) != rank(&y.a, tol.residual);
    let search = find_conjugator(&ctx, &x, &y, GroupConstraint::Full, tol, uint(inst, "search_seed")?)?;
    Ok(vec![
        flag("ranks differ", ranks_differ),
        flag("no conjugator", search.found().is_none()),
    ])
}

// ---- invariants ----

fn sp_matrix(ctx: &SymplecticContext<Q>, rng: &mut ChaCha8Rng) -> Matrix<Q> {
    ctx.cartan_split(&rnd::matrix(rng, ctx.dim(), ctx.dim(), 4))
        .expect("square")
        .0
}

fn gen_gamma_invariance(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let mut v = gen_group_element(rng, t);
    v["k"] = json!(t.index % 5);
    v
}

fn eval_gamma_invariance<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let k = uint(inst, "k")? as usize;
    let g: GroupElement<S> = group(inst, "g")?;
    let x: EnhancedElement<S> = elt(inst, "X")?;
    let y = ctx.act(&g, &x)?;
    let scale = (1.0 + x.norm()).powi(2) * (1.0 + x.a.norm()).powi(k as i32);
    Ok(vec![scalar_check(
        "Gamma_k(g.X) = Gamma_k(X)",
        gamma_big(&y, k)?,
        gamma_big(&x, k)?,
        tol.verification * scale,
    )])
}

fn gen_sp_pair(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let v = rnd::vector(rng, ctx.dim(), 4);
    let a = sp_matrix(&ctx, rng);
    json!({"mode": t.mode, "n": t.n, "k": t.index % 6, "v": enc_v(&v, t.mode), "A": enc_m(&a, t.mode)})
}

fn gamma_scale<S: Scalar>(v: &Vector<S>, a: &Matrix<S>, k: usize) -> f64 {
    (1.0 + v.norm()).powi(2) * (1.0 + a.norm()).powi(k as i32)
}

fn eval_gamma_even<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let v: Vector<S> = vect(inst, "v")?;
    let a: Matrix<S> = mat(inst, "A")?;
    (0..=8)
        .step_by(2)
        .map(|k| {
            let g = gamma_small(&ctx, &v, &a, k, tol.residual)?;
            Ok(scalar_check(
                &format!("gamma_{k} = 0"),
                g,
                S::zero(),
                tol.verification * gamma_scale(&v, &a, k),
            ))
        })
        .collect()
}

fn gen_gamma_small_invariance(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    let ctx = SymplecticContext::<Q>::new(t.n);
    let g = rnd::symplectic(&ctx, rng, 3);
    let mut v = gen_sp_pair(rng, t);
    v["g"] = enc_m(g.matrix(), t.mode);
    v
}

fn eval_gamma_small_invariance<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let k = uint(inst, "k")? as usize;
    let g: GroupElement<S> = group(inst, "g")?;
    let v: Vector<S> = vect(inst, "v")?;
    let a: Matrix<S> = mat(inst, "A")?;
    let gv = Vector::new(g.matrix().mul_vec(&v.entries)?);
    let ga = g.matrix().try_mul(&a)?.try_mul(g.inverse())?;
    // g.A g^-1 stays in sp only up to rounding; loosen the membership test
    let lhs = gamma_small(
        &ctx,
        &gv,
        &ga,
        k,
        tol.verification * (1.0 + g.matrix().norm() * g.inverse().norm()),
    )?;
    let rhs = gamma_small(&ctx, &v, &a, k, tol.residual)?;
    let scale = gamma_scale(&gv, &ga, k) + gamma_scale(&v, &a, k);
    Ok(vec![scalar_check(
        "gamma_k(g.v, g.A) = gamma_k(v, A)",
        lhs,
        rhs,
        tol.verification * scale,
    )])
}

fn eval_restriction<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let ctx = ctx_for::<S>(inst)?;
    let k = uint(inst, "k")? as usize;
    let u: Vector<S> = vect(inst, "v")?;
    let a: Matrix<S> = mat(inst, "A")?;
    let x = ctx.embed_l(&u, &a, AlphaSign::Minus, tol.residual)?;
    let big = gamma_big(&x, k)?;
    let small = gamma_small(&ctx, &u, &a, k, tol.residual)?;
    let eps = S::from_i64(RESTRICTION_SIGN);
    Ok(vec![scalar_check(
        "Gamma_k(embed(u, A)) = eps gamma_k(u, A)",
        big,
        eps * small,
        tol.verification * gamma_scale(&u, &a, k),
    )])
}

// ---- gl2-case-study ----

fn m2<S: Scalar>(a: S, b: S, c: S, d: S) -> Matrix<S> {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2")
}

/// `[[a, s t], [s / t, a]]` with `a^2 - s^2 = 1`, all rational.
pub fn exact_x5(rng: &mut ChaCha8Rng) -> Matrix<Q> {
    let (p, q) = loop {
        let p = rng.gen_range(1..=9i64);
        let q = rng.gen_range(1..=9i64);
        if p != q {
            break (p, q);
        }
    };
    let a = Q::from_ratio(p * p + q * q, 2 * p * q);
    let s = Q::from_ratio(p * p - q * q, 2 * p * q);
    let t = Q::from_ratio(rnd::int(rng, 5).max(1), rng.gen_range(1..=5));
    let sign = if rng.gen_bool(0.5) {
        Q::from_i64(1)
    } else {
        Q::from_i64(-1)
    };
    // -x stays sigma-fixed
    m2(
        a.clone() * sign.clone(),
        s.clone() * t.clone() * sign.clone(),
        s / t * sign.clone(),
        a * sign,
    )
}

pub fn approx_x5(rng: &mut ChaCha8Rng) -> Matrix<Approx> {
    let a = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0));
    let b = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
    m2(a, b, (a * a - 1.0) / b, a)
}

fn gen_k_rep(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    // exact configs still mix in approx samples, which carry non-rational s
    if t.mode == Mode::Exact && t.index.is_multiple_of(2) {
        let x = exact_x5(rng);
        let p = Q::from_i64(rnd::int(rng, 6).max(1));
        let q = Q::from_i64(rng.gen_range(1..=6));
        json!({"mode": Mode::Exact, "x": x.to_json(), "p": p.to_json(), "q": q.to_json()})
    } else {
        let x = approx_x5(rng);
        let p = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
        let q = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
        json!({"mode": Mode::Approx, "x": x.to_json(), "p": p.to_json(), "q": q.to_json()})
    }
}

fn rep_check(name: &str, a: &DynMatrix, b: &DynMatrix, tol: f64) -> Check {
    match (a, b) {
        (DynMatrix::Exact(x), DynMatrix::Exact(y)) => flag(name, x == y),
        _ => {
            let (x, y) = (a.to_approx(), b.to_approx());
            if x.rows() != y.rows() || x.cols() != y.cols() {
                return flag(name, false);
            }
            check(name, x.dist(&y), tol * (1.0 + x.norm()))
        }
    }
}

fn canonical_dyn(rep: &DynMatrix, tol: f64) -> Result<DynMatrix> {
    match rep {
        DynMatrix::Exact(m) => canonical_k_rep(m, tol),
        DynMatrix::Approx(m) => canonical_k_rep(m, tol),
    }
}

fn eval_k_rep<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let x: Matrix<S> = mat(inst, "x")?;
    let (p, q): (S, S) = (scal(inst, "p")?, scal(inst, "q")?);
    let k = m2(p.clone(), S::zero(), S::zero(), q.clone());
    let k_inv = m2(S::one() / p, S::zero(), S::zero(), S::one() / q);
    let moved = k.try_mul(&x)?.try_mul(&k_inv)?;
    let rep = canonical_k_rep(&x, tol.residual)?;
    Ok(vec![
        rep_check(
            "K-invariance",
            &canonical_k_rep(&moved, tol.residual)?,
            &rep,
            tol.verification,
        ),
        rep_check(
            "idempotence",
            &canonical_dyn(&rep, tol.residual)?,
            &rep,
            tol.verification,
        ),
    ])
}

fn gen_gl2_conjugacy(rng: &mut ChaCha8Rng, _: &Trial) -> Value {
    let x1 = exact_x5(rng);
    let x2 = if rng.gen_bool(0.5) {
        let t = Q::from_i64(rng.gen_range(2..=4));
        m2(
            x1[(0, 0)].clone(),
            x1[(0, 1)].clone() * t.clone(),
            x1[(1, 0)].clone() / t,
            x1[(1, 1)].clone(),
        )
    } else {
        exact_x5(rng)
    };
    json!({"mode": Mode::Exact, "x1": x1.to_json(), "x2": x2.to_json(), "search_seed": rng.gen::<u64>()})
}

fn eval_gl2_conjugacy(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    if mode_of(inst)? != Mode::Exact {
        return Err(Error::WrongMode { expected: "exact" });
    }
    let x1: Matrix<Q> = mat(inst, "x1")?;
    let x2: Matrix<Q> = mat(inst, "x2")?;
    let conj = gl2_conjugator(&x1, &x2, tol, uint(inst, "search_seed")?)?;
    let same_trace = x1.trace() == x2.trace();
    let mut out = vec![flag("conjugate iff equal trace", conj.is_some() == same_trace)];
    if let Some(g) = conj {
        out.push(mat_check(
            "g x1 g^-1 = x2",
            &g.matrix().try_mul(&x1)?.try_mul(g.inverse())?,
            &x2,
            0.0,
        )?);
    }
    let (r1, r2) = (canonical_k_rep(&x1, 0.0)?, canonical_k_rep(&x2, 0.0)?);
    out.push(flag("equal K-reps imply equal trace", r1 != r2 || same_trace));
    Ok(out)
}

fn gen_unipotent(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    json!({"mode": t.mode, "beta": enc_s(&rnd::scalar(rng, 9), t.mode)})
}

/// Squares of `[[α, β], [0, α]]` keep a unit diagonal, and the obstruction
/// check agrees on both unipotent and both split-diagonal `x`.
fn eval_unipotent<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let beta: S = scal(inst, "beta")?;
    let one = S::one();
    let zero = S::zero();
    let b = tol.verification * (1.0 + beta.magnitude()).powi(2);
    let mut out = Vec::new();
    for alpha in [one.clone(), -one.clone()] {
        let f = unipotent_stabilizer(&alpha, &beta);
        let sq = f.try_mul(&f)?;
        out.push(scalar_check("(f^2)_11 = 1", sq[(0, 0)].clone(), one.clone(), b));
        out.push(scalar_check("(f^2)_22 = 1", sq[(1, 1)].clone(), one.clone(), b));
        for a in [one.clone(), -one.clone()] {
            let x = m2(a.clone(), one.clone(), zero.clone(), a);
            out.push(flag(
                "square has a root",
                obstruction_check(&x, &sq, tol.residual)?.has_root(),
            ));
            let h = m2(-one.clone(), beta.clone(), zero.clone(), -one.clone());
            out.push(flag(
                "[[-1, beta], [0, -1]] has none",
                !obstruction_check(&x, &h, tol.residual)?.has_root(),
            ));
        }
    }
    let diag = |a: &S, d: &S| m2(a.clone(), zero.clone(), zero.clone(), d.clone());
    let m1 = -one.clone();
    for x in [diag(&one, &m1), diag(&m1, &one)] {
        for h in [diag(&m1, &m1), diag(&one, &m1), diag(&m1, &one)] {
            out.push(flag(
                "split-diagonal h has none",
                !obstruction_check(&x, &h, tol.residual)?.has_root(),
            ));
        }
        out.push(flag(
            "identity has a root",
            obstruction_check(&x, &diag(&one, &one), tol.residual)?.has_root(),
        ));
    }
    Ok(out)
}

fn gen_sigma5(rng: &mut ChaCha8Rng, t: &Trial) -> Value {
    json!({
        "mode": t.mode,
        "g": enc_m(rnd::invertible(rng, 2, 4).matrix(), t.mode),
        "h": enc_m(rnd::invertible(rng, 2, 4).matrix(), t.mode),
    })
}

fn eval_sigma5<S: Scalar>(inst: &Value, tol: &Tolerances) -> Result<Vec<Check>> {
    let (g, h): (GroupElement<S>, GroupElement<S>) = (group(inst, "g")?, group(inst, "h")?);
    let scale = (1.0 + g.matrix().norm() * g.inverse().norm()) * (1.0 + h.matrix().norm() * h.inverse().norm());
    let b = tol.verification * scale;
    Ok(vec![
        mat_check("involution", sigma5(&sigma5(&g)?)?.matrix(), g.matrix(), b)?,
        mat_check(
            "anti-multiplicative",
            sigma5(&g.compose(&h)?)?.matrix(),
            sigma5(&h)?.compose(&sigma5(&g)?)?.matrix(),
            b,
        )?,
    ])
}
