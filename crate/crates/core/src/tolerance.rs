//! Numerical tolerances shared by the rank, definiteness, inverse and
//! spectral checks.
//!
//! Every threshold is relative to the magnitude of the operand it is applied
//! to; see the individual fields for the exact scaling.

/// Default relative base tolerance, 2^-40.
pub const BASE_TOLERANCE: f64 = 9.094_947_017_729_282e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Singular values below `rank * sigma_max * max(rows, cols)` count as zero.
    pub rank: f64,
    /// Symmetric-part eigenvalues must exceed `pd * max(1, ||A||_2)`.
    pub pd: f64,
    /// Inverses are refused when the condition number exceeds `1 / inverse`.
    pub inverse: f64,
    /// Band around the unit circle treated as marginal.
    pub stability: f64,
    /// Eigenvalues closer than `cluster * max|lambda|` are grouped.
    pub cluster: f64,
}

impl Tolerance {
    /// Uses `base` for the rank, definiteness and inverse checks and keeps
    /// the default stability and clustering bands.
    pub fn with_base(base: f64) -> Self {
        Tolerance {
            rank: base,
            pd: base,
            inverse: base,
            ..Self::default()
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank: BASE_TOLERANCE,
            pd: BASE_TOLERANCE,
            inverse: BASE_TOLERANCE,
            stability: 1e-9,
            cluster: 1e-6,
        }
    }
}
