//! Orbit embeddings for the enhanced symplectic Lie algebra.
//!
//! Everything is generic over [`Scalar`]: exact Gaussian rationals
//! ([`Exact`]) or double-precision complex numbers ([`Approx`]).

pub mod enhanced;
pub mod error;
pub mod gl2;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod orbit;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod sqrt;
pub mod symplectic;
pub mod tolerance;

pub use enhanced::{AlphaSign, EnhancedElement};
pub use error::{Error, Result};
pub use gl2::{
    canonical_k_rep, collapsing_pairs, continuous_representatives, discrete_representatives, gl2_conjugator, in_x5,
    obstruction_check, reps_equal, sigma5, unipotent_stabilizer, CollapsingPair, ObstructionCertificate,
    ObstructionVerdict, StabilizerFamily,
};
pub use invariants::{
    gamma_big, gamma_small, gamma_table, restriction_identity_check, InvariantValue, RestrictionCheck,
};
pub use matrix::{DynMatrix, Matrix, Variance, Vector};
pub use orbit::{
    embed_antidiag, embed_theta_rep, find_conjugator, symplectic_witness, theta_rep_sign, ConjugatorSearch,
    ConjugatorVerdict, GroupConstraint, ThetaLocus, WitnessReport, WitnessResiduals,
};
pub use poly::Poly;
pub use scalar::{GaussRational, Mode, Scalar};
pub use sqrt::{primary_sqrt, sigma_fixed_sqrt, PolyCert, PrimarySqrt, SqrtOutcome};
pub use symplectic::{GroupElement, SymplecticContext};
pub use tolerance::Tolerances;

pub type Exact = GaussRational;
pub type Approx = num_complex::Complex64;
pub type ExactMatrix = Matrix<Exact>;
pub type ApproxMatrix = Matrix<Approx>;
pub type ExactElement = EnhancedElement<Exact>;
pub type ApproxElement = EnhancedElement<Approx>;
