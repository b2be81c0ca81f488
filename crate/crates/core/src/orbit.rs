//! Conjugator search, witness extraction and the block-diagonal variant.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enhanced::{AlphaSign, EnhancedElement};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{negligible, solve_linear, SolutionSpace};
use crate::matrix::{DynMatrix, Matrix, Vector};
use crate::scalar::{GaussRational, Mode, Scalar};
use crate::sqrt::{sigma_fixed_sqrt, SqrtOutcome};
use crate::symplectic::{GroupElement, SymplecticContext};
use crate::tolerance::Tolerances;

/// Samples drawn before declaring a solution space singular.
pub const CONJUGATOR_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupConstraint {
    /// `GL_{2n}`
    Full,
    /// `Sp_{2n}`
    Symplectic,
    /// `GL_n x GL_n`
    BlockDiagonal,
    /// `Sp_{2n} ∩ (GL_n x GL_n)`
    Constrained,
}

impl GroupConstraint {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupConstraint::Full => "full",
            GroupConstraint::Symplectic => "symplectic",
            GroupConstraint::BlockDiagonal => "block-diagonal",
            GroupConstraint::Constrained => "constrained",
        }
    }

    pub fn is_block(self) -> bool {
        matches!(self, GroupConstraint::BlockDiagonal | GroupConstraint::Constrained)
    }

    pub fn is_symplectic(self) -> bool {
        matches!(self, GroupConstraint::Symplectic | GroupConstraint::Constrained)
    }

    pub fn contains<S: Scalar>(self, ctx: &SymplecticContext<S>, g: &Matrix<S>, tol: f64) -> Result<bool> {
        let symplectic = !self.is_symplectic() || ctx.is_symplectic(g, tol)?;
        let block = !self.is_block() || ctx.is_block_diagonal(g, tol)?;
        Ok(symplectic && block && g.is_invertible(tol))
    }
}

impl std::str::FromStr for GroupConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(GroupConstraint::Full),
            "symplectic" => Ok(GroupConstraint::Symplectic),
            "block-diagonal" => Ok(GroupConstraint::BlockDiagonal),
            "constrained" => Ok(GroupConstraint::Constrained),
            other => Err(Error::Parse(format!("unknown constraint {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConjugatorVerdict<S> {
    Found(GroupElement<S>),
    /// The linear solution space is empty or `{0}`.
    NoSolutions,
    /// Every sample was singular: a probabilistic "no".
    AllSamplesSingular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugatorSearch<S> {
    pub verdict: ConjugatorVerdict<S>,
    /// Dimension of the linear solution space, when feasible.
    pub solution_dim: Option<usize>,
    pub samples: usize,
    /// Coefficients are drawn uniformly from `[-range, range]`.
    pub coefficient_range: i64,
}

impl<S: Scalar> ConjugatorSearch<S> {
    pub fn found(&self) -> Option<&GroupElement<S>> {
        match &self.verdict {
            ConjugatorVerdict::Found(g) => Some(g),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let (verdict, g) = match &self.verdict {
            ConjugatorVerdict::Found(g) => ("found", g.matrix().to_json()),
            ConjugatorVerdict::NoSolutions => ("no-solutions", Value::Null),
            ConjugatorVerdict::AllSamplesSingular => ("all-samples-singular", Value::Null),
        };
        json!({
            "verdict": verdict,
            "probabilistic": matches!(self.verdict, ConjugatorVerdict::AllSamplesSingular),
            "g": g,
            "solution_dim": self.solution_dim,
            "samples": self.samples,
            "coefficient_range": self.coefficient_range,
        })
    }
}

/// The linear map `g -> (g u_X, sigma(g) v_Y, g A_X - A_Y g)` and its
/// target `(u_Y, v_X, 0)`, with block-zero rows appended when asked.
fn conjugacy_system<S: Scalar>(
    ctx: &SymplecticContext<S>,
    x: &EnhancedElement<S>,
    y: &EnhancedElement<S>,
    block: bool,
) -> Result<(Matrix<S>, Vector<S>)> {
    let d = ctx.dim();
    let n = ctx.n();
    let unknowns = d * d;
    let mut columns = Vec::with_capacity(unknowns);
    for a in 0..d {
        for b in 0..d {
            let e = Matrix::from_fn(d, d, |i, j| if i == a && j == b { S::one() } else { S::zero() });
            let mut col = e.mul_vec(&x.u.entries)?;
            col.extend(ctx.sigma_end(&e)?.mul_vec(&y.v.entries)?);
            col.extend(e.try_mul(&x.a)?.try_sub(&y.a.try_mul(&e)?)?.entries().iter().cloned());
            if block {
                for r in 0..d {
                    for c in 0..d {
                        if (r < n) != (c < n) {
                            col.push(if r == a && c == b { S::one() } else { S::zero() });
                        }
                    }
                }
            }
            columns.push(col);
        }
    }
    let rows = columns[0].len();
    let coefficients = Matrix::from_fn(rows, unknowns, |i, j| columns[j][i].clone());
    let mut rhs = y.u.entries.clone();
    rhs.extend(x.v.entries.iter().cloned());
    rhs.resize(rows, S::zero());
    Ok((coefficients, Vector::new(rhs)))
}

/// Searches for an invertible `g` (in the full or block-diagonal group) with
/// `g · X = Y`.
pub fn find_conjugator<S: Scalar>(
    ctx: &SymplecticContext<S>,
    x: &EnhancedElement<S>,
    y: &EnhancedElement<S>,
    constraint: GroupConstraint,
    tol: &Tolerances,
    seed: u64,
) -> Result<ConjugatorSearch<S>> {
    if constraint.is_symplectic() {
        return Err(Error::UnsupportedConstraint(format!(
            "{} is not a linear condition; use the witness extraction",
            constraint.as_str()
        )));
    }
    if x.dim() != ctx.dim() || y.dim() != ctx.dim() {
        return Err(dim_err(format!(
            "elements of dimension {} and {} in a context of dimension {}",
            x.dim(),
            y.dim(),
            ctx.dim()
        )));
    }
    let d = ctx.dim();
    let (coefficients, rhs) = conjugacy_system(ctx, x, y, constraint.is_block())?;
    let none = |solution_dim| ConjugatorSearch {
        verdict: ConjugatorVerdict::NoSolutions,
        solution_dim,
        samples: 0,
        coefficient_range: 0,
    };
    let (particular, kernel) = match solve_linear(&coefficients, &rhs, tol.residual)? {
        SolutionSpace::Infeasible { .. } => return Ok(none(None)),
        SolutionSpace::Affine { particular, kernel } => (particular, kernel),
    };
    if kernel.is_empty() && particular.is_zero() {
        return Ok(none(Some(0)));
    }
    let dim = kernel.len();
    // det(g) has degree <= d in the coefficients, so a set of size 2d + 1
    // misses a nonzero det with probability < 1/2 per sample
    let range = d as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = |coeffs: &[i64]| {
        let mut g = particular.entries.clone();
        for (c, k) in coeffs.iter().zip(&kernel) {
            let c = S::from_i64(*c);
            for (gi, ki) in g.iter_mut().zip(&k.entries) {
                *gi = gi.clone() + c.clone() * ki.clone();
            }
        }
        Matrix::from_fn(d, d, |i, j| g[i * d + j].clone())
    };
    let samples = if dim == 0 { 1 } else { CONJUGATOR_SAMPLES };
    for _ in 0..samples {
        let coeffs: Vec<i64> = (0..dim).map(|_| rng.gen_range(-range..=range)).collect();
        let candidate = entries(&coeffs);
        if !candidate.is_invertible(tol.residual) {
            continue;
        }
        let g = GroupElement::new(candidate)?;
        let residual = ctx.act(&g, x)?.dist(y)?;
        if S::MODE == Mode::Exact && residual != 0.0 {
            return Err(Error::TheoremViolation("sampled conjugator does not conjugate".into()));
        }
        return Ok(ConjugatorSearch {
            verdict: ConjugatorVerdict::Found(g),
            solution_dim: Some(dim),
            samples,
            coefficient_range: range,
        });
    }
    Ok(ConjugatorSearch {
        verdict: if dim == 0 {
            ConjugatorVerdict::NoSolutions
        } else {
            ConjugatorVerdict::AllSamplesSingular
        },
        solution_dim: Some(dim),
        samples,
        coefficient_range: range,
    })
}

/// Named residuals of a witness extraction. Exact computations report 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WitnessResiduals {
    /// `|h · X - X|`
    pub stabilizer_h: f64,
    /// `|sigma(h) - h|`
    pub sigma_h: f64,
    /// `|f^2 - h|`
    pub sqrt: f64,
    /// `|p(h) - f|`
    pub certificate: f64,
    /// `|sigma(f) - f|`
    pub sigma_f: f64,
    /// `|f · X - X|`
    pub stabilizer_f: f64,
    /// `|w^T J w - J|`
    pub membership: f64,
    /// Norm of the off-diagonal blocks of `w`.
    pub block: f64,
    /// `|w · X - Y|`
    pub action: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport<S> {
    pub constraint: GroupConstraint,
    pub alpha: AlphaSign,
    /// Mode of the witness; differs from the input mode when the square
    /// root needed radicals.
    pub mode: Mode,
    pub h: Matrix<S>,
    pub sqrt: SqrtOutcome<S>,
    pub witness: DynMatrix,
    pub residuals: WitnessResiduals,
    pub tolerances: Tolerances,
}

impl<S: Scalar> WitnessReport<S> {
    pub fn switched_to_approx(&self) -> bool {
        self.sqrt.switched()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "constraint": self.constraint,
            "alpha": self.alpha,
            "input_mode": S::MODE,
            "mode": self.mode,
            "switched_to_approx": self.switched_to_approx(),
            "h": self.h.to_json(),
            "f": self.sqrt.root().to_json(),
            "sqrt_cert": self.sqrt.cert_json(),
            "witness": self.witness.to_json(),
            "residuals": self.residuals,
            "tolerances": self.tolerances,
        })
    }
}

/// Checks `|diff| <= bound`; on failure returns either a theorem violation
/// (exact computation) or a residual error.
fn certify<T: Scalar>(diff: &Matrix<T>, bound: f64, what: &str, theorem: bool) -> Result<f64> {
    let residual = diff.norm();
    if negligible(diff, bound) {
        return Ok(residual);
    }
    if theorem && T::MODE == Mode::Exact {
        return Err(Error::TheoremViolation(format!("{what} fails exactly")));
    }
    Err(Error::Residual {
        what: what.into(),
        residual,
        bound,
    })
}

fn element_diff<T: Scalar>(a: &EnhancedElement<T>, b: &EnhancedElement<T>) -> Result<Matrix<T>> {
    let d = a.try_sub(b)?;
    let mut entries = d.u.entries;
    entries.extend(d.v.entries);
    entries.extend(d.a.entries().iter().cloned());
    Matrix::from_rows(vec![entries])
}

/// Turns a conjugator `g` with `g · X = Y` into one in the symplectic group
/// (or in `K` for the constrained variant): `w = g f^{-1}` where `f` is a
/// `sigma`-fixed square root of `h = sigma(g) g` that is a polynomial in `h`.
#[allow(clippy::too_many_arguments)]
pub fn symplectic_witness<S: Scalar>(
    ctx: &SymplecticContext<S>,
    x: &EnhancedElement<S>,
    y: &EnhancedElement<S>,
    g: &GroupElement<S>,
    constraint: GroupConstraint,
    alpha: AlphaSign,
    tol: &Tolerances,
) -> Result<WitnessReport<S>> {
    ctx.require_positive()?;
    if !constraint.is_symplectic() {
        return Err(Error::UnsupportedConstraint(format!(
            "witness target must be symplectic or constrained, got {}",
            constraint.as_str()
        )));
    }
    if !ctx.in_l(x, alpha, tol.residual)? {
        return Err(Error::Precondition(format!(
            "X is not in L for alpha = {}",
            alpha.value()
        )));
    }
    if !ctx.in_l(y, alpha, tol.residual)? {
        return Err(Error::Precondition(format!(
            "Y is not in L for alpha = {}",
            alpha.value()
        )));
    }
    let scale = 1.0 + x.norm().max(y.norm());
    let gx = ctx.act(g, x)?;
    if !negligible(&element_diff(&gx, y)?, tol.verification * scale) {
        return Err(Error::Precondition("g does not map X to Y".into()));
    }
    if constraint.is_block() && !ctx.is_block_diagonal(g.matrix(), tol.residual)? {
        return Err(Error::Precondition("g is not block-diagonal".into()));
    }

    let mut residuals = WitnessResiduals::default();
    let h_mat = ctx.sigma_end(g.matrix())?.try_mul(g.matrix())?;
    let h_scale = scale * (1.0 + h_mat.norm());
    let h = GroupElement::new(h_mat.clone())?;
    residuals.stabilizer_h = certify(
        &element_diff(&ctx.act(&h, x)?, x)?,
        tol.verification * h_scale,
        "stabilizer property of h",
        true,
    )?;
    residuals.sigma_h = certify(
        &ctx.sigma_end(&h_mat)?.try_sub(&h_mat)?,
        tol.verification * h_mat.norm(),
        "sigma-fixedness of h",
        true,
    )?;

    let sqrt = sigma_fixed_sqrt(ctx, &h_mat, tol)?;
    residuals.sqrt = sqrt.sqrt_residual();
    residuals.certificate = sqrt.cert_residual();
    residuals.sigma_f = sqrt.sigma_residual().unwrap_or(0.0);

    let (mode, witness) = match &sqrt {
        SqrtOutcome::InMode(s) => {
            let w = finish_witness(ctx, x, y, g, &s.root, constraint, tol, h_scale, &mut residuals)?;
            (S::MODE, S::wrap_matrix(w))
        }
        SqrtOutcome::SwitchedToApprox(s) => {
            let actx = SymplecticContext::<Complex64>::new(ctx.n());
            let ga = GroupElement::new(g.matrix().to_approx())?;
            let w = finish_witness(
                &actx,
                &x.map(S::to_c64),
                &y.map(S::to_c64),
                &ga,
                &s.root,
                constraint,
                tol,
                h_scale,
                &mut residuals,
            )?;
            (Mode::Approx, DynMatrix::Approx(w))
        }
    };
    Ok(WitnessReport {
        constraint,
        alpha,
        mode,
        h: h_mat,
        sqrt,
        witness,
        residuals,
        tolerances: *tol,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_witness<T: Scalar>(
    ctx: &SymplecticContext<T>,
    x: &EnhancedElement<T>,
    y: &EnhancedElement<T>,
    g: &GroupElement<T>,
    f: &Matrix<T>,
    constraint: GroupConstraint,
    tol: &Tolerances,
    h_scale: f64,
    residuals: &mut WitnessResiduals,
) -> Result<Matrix<T>> {
    let f = GroupElement::new(f.clone())?;
    residuals.stabilizer_f = certify(
        &element_diff(&ctx.act(&f, x)?, x)?,
        tol.verification * h_scale,
        "stabilizer property of f",
        true,
    )?;
    let w = GroupElement::new(g.matrix().try_mul(f.inverse())?)?;
    let wtjw = w.matrix().transpose().try_mul(ctx.j())?.try_mul(w.matrix())?;
    residuals.membership = certify(
        &wtjw.try_sub(ctx.j())?,
        tol.verification * ctx.j().norm(),
        "symplectic membership of the witness",
        true,
    )?;
    if constraint.is_block() {
        let n = ctx.n();
        let off = Matrix::from_rows(vec![w
            .matrix()
            .block(0, n, n, n)
            .entries()
            .iter()
            .chain(w.matrix().block(n, 0, n, n).entries())
            .cloned()
            .collect()])?;
        residuals.block = certify(&off, tol.verification, "block pattern of the witness", true)?;
    }
    residuals.action = certify(
        &element_diff(&ctx.act(&w, x)?, y)?,
        tol.verification * (1.0 + y.norm()),
        "action of the witness",
        true,
    )?;
    Ok(w.matrix().clone())
}

/// `[[0, B], [C, 0]]`.
pub fn embed_antidiag<S: Scalar>(b: &Matrix<S>, c: &Matrix<S>) -> Result<Matrix<S>> {
    let n = b.rows();
    if b.cols() != n || c.rows() != n || c.cols() != n {
        return Err(dim_err("antidiagonal blocks must be n x n of the same size"));
    }
    let z = Matrix::zeros(n, n);
    Matrix::from_blocks(&z, b, c, &z)
}

/// The two block-diagonal loci: `L1` has a full vector part, `L2` only the
/// first half `W` of `V = W ⊕ W*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaLocus {
    L1,
    L2,
}

impl std::str::FromStr for ThetaLocus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" | "l1" => Ok(ThetaLocus::L1),
            "L2" | "l2" => Ok(ThetaLocus::L2),
            other => Err(Error::Parse(format!("unknown locus {other:?}"))),
        }
    }
}

/// Sign `eps` of the covector part `(u, eps u^T)` in the block-diagonal
/// loci, chosen so that the loci lie in `L` for `alpha = -1`. Determined by
/// testing both candidates once.
pub fn theta_rep_sign() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let ctx = SymplecticContext::<GaussRational>::new(1);
        let u = Vector::<GaussRational>::from_i64(&[1, 1]);
        let a = embed_antidiag(&Matrix::from_i64(&[&[2]]), &Matrix::from_i64(&[&[3]])).expect("1x1 blocks");
        [-1, 1]
            .into_iter()
            .find(|&eps| {
                let x = EnhancedElement::new(u.clone(), u.scale(&GaussRational::from_i64(eps)), a.clone())
                    .expect("consistent dimensions");
                ctx.in_l(&x, AlphaSign::Minus, 0.0).expect("consistent dimensions")
            })
            .expect("one sign puts the locus in L")
    })
}

fn is_symmetric<S: Scalar>(m: &Matrix<S>, tol: f64) -> bool {
    m.try_sub(&m.transpose())
        .is_ok_and(|d| negligible(&d, tol * (1.0 + m.norm())))
}

/// `(u, eps u^T) + [[0, B], [C, 0]]` with `B`, `C` symmetric. For `L2`, `u`
/// has dimension `n` and is placed as `(u, 0)`.
pub fn embed_theta_rep<S: Scalar>(
    ctx: &SymplecticContext<S>,
    locus: ThetaLocus,
    u: &Vector<S>,
    b: &Matrix<S>,
    c: &Matrix<S>,
    tol: f64,
) -> Result<EnhancedElement<S>> {
    let n = ctx.n();
    if b.rows() != n || c.rows() != n {
        return Err(dim_err(format!("blocks must be {n} x {n}")));
    }
    if !is_symmetric(b, tol) || !is_symmetric(c, tol) {
        return Err(Error::Precondition("B and C must be symmetric".into()));
    }
    let full = match locus {
        ThetaLocus::L1 => {
            ctx.check_vec(u, "u")?;
            u.clone()
        }
        ThetaLocus::L2 => {
            if u.dim() != n {
                return Err(dim_err(format!("L2 vector part must have dimension {n}")));
            }
            let mut e = u.entries.clone();
            e.resize(2 * n, S::zero());
            Vector::new(e)
        }
    };
    let eps = S::from_i64(theta_rep_sign());
    EnhancedElement::new(full.clone(), full.scale(&eps), embed_antidiag(b, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = GaussRational;

    fn elt(u: &[i64], v: &[i64], a: &[&[i64]]) -> EnhancedElement<Q> {
        EnhancedElement::new(Vector::from_i64(u), Vector::from_i64(v), Matrix::from_i64(a)).unwrap()
    }

    #[test]
    fn conjugator_examples() {
        let ctx = SymplecticContext::<Q>::new(1);
        let tol = Tolerances::default();
        let x = elt(&[1, 0], &[-1, 0], &[&[1, 2], &[0, -1]]);
        let found = find_conjugator(&ctx, &x, &x, GroupConstraint::Full, &tol, 7).unwrap();
        let g = found.found().expect("stabilizer element");
        assert_eq!(ctx.act(g, &x).unwrap(), x);

        let x = elt(&[0, 0], &[0, 0], &[&[1, 0], &[0, -1]]);
        let y = elt(&[0, 0], &[0, 0], &[&[-1, 0], &[0, 1]]);
        let found = find_conjugator(&ctx, &x, &y, GroupConstraint::Full, &tol, 7).unwrap();
        let g = found.found().unwrap();
        assert!(g.matrix()[(0, 0)].clone() == Q::from_i64(0) && g.matrix()[(1, 1)].clone() == Q::from_i64(0));
        assert_eq!(ctx.act(g, &x).unwrap(), y);
        assert_eq!(found.solution_dim, Some(2));

        let x = elt(&[0, 0], &[0, 0], &[&[0, 1], &[0, 0]]);
        let y = EnhancedElement::zero(2);
        let found = find_conjugator(&ctx, &x, &y, GroupConstraint::Full, &tol, 7).unwrap();
        assert!(found.found().is_none());

        assert!(find_conjugator(&ctx, &x, &y, GroupConstraint::Symplectic, &tol, 7).is_err());
    }

    #[test]
    fn block_constrained_search() {
        let ctx = SymplecticContext::<Q>::new(1);
        let tol = Tolerances::default();
        let x = elt(&[0, 0], &[0, 0], &[&[1, 0], &[0, -1]]);
        let y = elt(&[0, 0], &[0, 0], &[&[-1, 0], &[0, 1]]);
        // the only conjugators are antidiagonal
        let found = find_conjugator(&ctx, &x, &y, GroupConstraint::BlockDiagonal, &tol, 1).unwrap();
        assert_eq!(found.verdict, ConjugatorVerdict::NoSolutions);
    }

    #[test]
    fn witness_examples() {
        let ctx = SymplecticContext::<Q>::new(1);
        let tol = Tolerances::default();
        let x = elt(&[0, 0], &[0, 0], &[&[1, 2], &[3, -1]]);

        let g = ctx.transvection(&Vector::from_i64(&[1, 2]), &Q::from_i64(3)).unwrap();
        let y = ctx.act(&g, &x).unwrap();
        let report = symplectic_witness(&ctx, &x, &y, &g, GroupConstraint::Symplectic, AlphaSign::Minus, &tol).unwrap();
        assert_eq!(report.h, Matrix::identity(2));
        assert_eq!(report.witness, DynMatrix::Exact(g.matrix().clone()));

        let two = GroupElement::new(Matrix::scalar(2, Q::from_i64(2))).unwrap();
        let report =
            symplectic_witness(&ctx, &x, &x, &two, GroupConstraint::Symplectic, AlphaSign::Minus, &tol).unwrap();
        assert_eq!(report.h, Matrix::scalar(2, Q::from_i64(4)));
        assert_eq!(report.sqrt.root(), DynMatrix::Exact(Matrix::scalar(2, Q::from_i64(2))));
        assert_eq!(report.witness, DynMatrix::Exact(Matrix::identity(2)));

        let g2 = g.compose(&two).unwrap();
        let report =
            symplectic_witness(&ctx, &x, &y, &g2, GroupConstraint::Symplectic, AlphaSign::Minus, &tol).unwrap();
        assert_eq!(report.witness, DynMatrix::Exact(g.matrix().clone()));
        assert_eq!(report.residuals, WitnessResiduals::default());
    }

    #[test]
    fn witness_rejects_bad_inputs() {
        let ctx = SymplecticContext::<Q>::new(1);
        let tol = Tolerances::default();
        let x = elt(&[0, 0], &[0, 0], &[&[1, 2], &[3, -1]]);
        let not_in_l = elt(&[1, 0], &[1, 0], &[&[1, 2], &[3, -1]]);
        let e = GroupElement::identity(2);
        let r = symplectic_witness(
            &ctx,
            &x,
            &not_in_l,
            &e,
            GroupConstraint::Symplectic,
            AlphaSign::Minus,
            &tol,
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
        let g = ctx.transvection(&Vector::from_i64(&[1, 0]), &Q::from_i64(1)).unwrap();
        let r = symplectic_witness(&ctx, &x, &x, &g, GroupConstraint::Symplectic, AlphaSign::Minus, &tol);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn antidiagonal_embedding() {
        let ctx = SymplecticContext::<Q>::new(3);
        let b = Matrix::<Q>::from_i64(&[&[1, 2, 0], &[3, 4, 5], &[0, -1, 2]]);
        let c = Matrix::<Q>::from_i64(&[&[0, 1, 1], &[2, 0, 7], &[1, 1, 1]]);
        let m = embed_antidiag(&b, &c).unwrap();
        let expected = embed_antidiag(
            &b.transpose().scale(&Q::from_i64(-1)),
            &c.transpose().scale(&Q::from_i64(-1)),
        )
        .unwrap();
        assert_eq!(ctx.sigma_end(&m).unwrap(), expected);
        assert_eq!(
            embed_antidiag(&Matrix::<Q>::from_i64(&[&[2]]), &Matrix::from_i64(&[&[3]])).unwrap(),
            Matrix::from_i64(&[&[0, 2], &[3, 0]])
        );
    }

    #[test]
    fn theta_rep_examples() {
        assert_eq!(theta_rep_sign(), -1);
        let ctx = SymplecticContext::<Q>::new(1);
        let one = |v| Matrix::<Q>::from_i64(&[&[v]]);
        let zero = embed_theta_rep(&ctx, ThetaLocus::L1, &Vector::zeros(2), &one(0), &one(0), 0.0).unwrap();
        assert!(zero.is_zero());
        let x = embed_theta_rep(&ctx, ThetaLocus::L1, &Vector::from_i64(&[1, 1]), &one(2), &one(3), 0.0).unwrap();
        assert_eq!(x, elt(&[1, 1], &[-1, -1], &[&[0, 2], &[3, 0]]));
        assert!(ctx.in_l(&x, AlphaSign::Minus, 0.0).unwrap());
        let x = embed_theta_rep(&ctx, ThetaLocus::L2, &Vector::from_i64(&[1]), &one(0), &one(0), 0.0).unwrap();
        assert_eq!(x.u, Vector::from_i64(&[1, 0]));
        assert_eq!(x.v.entries, vec![Q::from_i64(-1), Q::from_i64(0)]);

        let ctx2 = SymplecticContext::<Q>::new(2);
        let b = Matrix::<Q>::from_i64(&[&[1, 2], &[0, 1]]);
        assert!(embed_theta_rep(&ctx2, ThetaLocus::L1, &Vector::zeros(4), &b, &b.transpose(), 0.0).is_err());
    }
}
