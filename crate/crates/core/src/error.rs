use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={extent} at mode {mode}")]
    IndexOutOfBounds {
        mode: usize,
        index: usize,
        extent: usize,
    },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("invalid argument to {op}: {detail}")]
    InvalidArgument { op: &'static str, detail: String },

    #[error("operator is singular (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("no unique Lyapunov solution: spectral radius {spectral_radius} is not below the stability margin")]
    NoUniqueSolution { spectral_radius: f64 },

    #[error(
        "decomposition unavailable: eigenvalue cluster near {eigenvalue} has algebraic multiplicity {algebraic} but geometric multiplicity {geometric}"
    )]
    Defective {
        eigenvalue: Complex64,
        algebraic: usize,
        geometric: usize,
    },

    #[error("target not reachable: reachability Gramian is not U-positive definite (min symmetric eigenvalue {min_eigenvalue:e})")]
    Unreachable { min_eigenvalue: f64 },

    #[error("problem size {size} exceeds the dense solver limit {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("numerical failure in {op}: {detail}")]
    Numerical { op: &'static str, detail: String },
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(op: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            detail: detail.into(),
        }
    }
}
