//! Multilinear time-invariant (MLTI) systems over even-order paired tensors.
//!
//! States, inputs and outputs are tensors; system operators are paired
//! tensors acting through the Einstein product. Every operator has a matrix
//! unfolding `phi` that turns the Einstein product into matrix
//! multiplication, and the analyses here (spectra, ranks, Gramians) are
//! computed through it.

pub mod block;
pub mod error;
pub mod gramian;
pub mod linalg;
pub mod paired;
pub mod scalar;
pub mod shape;
pub mod spectral;
pub mod stability;
pub mod system;
pub mod tensor;
pub mod tolerance;

#[cfg(test)]
pub(crate) mod test_util;

pub use block::{block_permutation, mode_col_block, mode_row_block, n_mode_col_block, n_mode_row_block, BlockSpec, Permutation};
pub use error::{Error, Result};
pub use gramian::{
    is_observable, is_observable_with, is_reachable, is_reachable_with, lyapunov_solve, lyapunov_solve_with,
    min_energy_input, min_energy_input_with, obs_gramian_finite, obs_gramian_infinite, observability_tensor,
    reach_gramian_finite, reach_gramian_infinite, reachability_tensor, GramianSide, LYAPUNOV_SIZE_LIMIT,
};
pub use paired::{factored_power, ComplexPairedTensor, PairedTensor, RealPairedTensor};
pub use scalar::Scalar;
pub use shape::{ivec, Shape};
pub use spectral::{
    characteristic_polynomial, cluster_eigenvalues, geometric_multiplicity, polynomial_at, spectral_radius, tevd,
    tevd_with, u_eigen, u_eigen_with, u_eigenvalues, EigenCluster, Tevd, USpectrum,
};
pub use stability::{classify_stability, classify_stability_with, MarginalCluster, StabilityClass, StabilityVerdict};
pub use system::{MltiSystem, Trajectory, TuckerFactors};
pub use tensor::{ComplexTensor, DenseTensor, Tensor};
pub use tolerance::{Tolerance, BASE_TOLERANCE};

pub use num_complex::Complex64;
