use serde::{Deserialize, Serialize};

/// Thresholds used by approx-mode checks. Exact mode ignores them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Linear-solve feasibility, square-root residuals, approx membership tests.
    pub residual: f64,
    /// Witness residuals and derived-property checks (commutant, sigma-fixedness).
    pub verification: f64,
    /// Relative radius for merging eigenvalues into one cluster.
    pub cluster_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            verification: 1e-8,
            cluster_radius: 1e-7,
        }
    }
}

impl Tolerances {
    /// Overrides the residual tolerance; the verification tolerance keeps
    /// its default ratio of ten.
    pub fn with_residual(residual: f64) -> Self {
        Tolerances {
            residual,
            verification: 10.0 * residual,
            ..Self::default()
        }
    }
}
