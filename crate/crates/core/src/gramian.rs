//! Reachability and observability: Gramians, tensor Lyapunov equations,
//! Kalman-type block tensors and minimum-energy steering.

use nalgebra::{DMatrix, DVector};

use crate::block::{mode_col_block, mode_row_block, BlockSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::paired::PairedTensor;
use crate::spectral::spectral_radius;
use crate::system::MltiSystem;
use crate::tensor::DenseTensor;
use crate::tolerance::Tolerance;

/// Largest `|J|` accepted by the dense Lyapunov solver.
pub const LYAPUNOV_SIZE_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramianSide {
    /// `W - A * W * A^T = Q`
    Reach,
    /// `A^T * W * A - W = -Q`
    Obs,
}

fn symmetrized(w: &PairedTensor<f64>) -> Result<PairedTensor<f64>> {
    Ok(w.add(&w.u_transpose())?.scale(0.5))
}

fn check_horizon(t0: usize, t1: usize, op: &'static str) -> Result<usize> {
    if t1 <= t0 {
        return Err(Error::invalid(op, format!("horizon [{t0}, {t1}) is empty")));
    }
    Ok(t1 - t0)
}

/// `W_c(t0, t1) = sum_{t=t0}^{t1-1} A^{*(t1-t-1)} * B * B^T * (A^T)^{*(t1-t-1)}`.
pub fn reach_gramian_finite(sys: &MltiSystem, t0: usize, t1: usize) -> Result<PairedTensor<f64>> {
    let horizon = check_horizon(t0, t1, "reach_gramian_finite")?;
    let mut propagated = sys.b().clone();
    let mut w = PairedTensor::zeros(sys.a().pairs().to_vec());
    for p in 0..horizon {
        if p > 0 {
            propagated = sys.a().einstein_product(&propagated)?;
        }
        w = w.add(&propagated.einstein_product(&propagated.u_transpose())?)?;
    }
    symmetrized(&w)
}

/// `W_o(t0, t1) = sum_{t=t0}^{t1-1} (A^T)^{*(t-t0)} * C^T * C * A^{*(t-t0)}`.
pub fn obs_gramian_finite(sys: &MltiSystem, t0: usize, t1: usize) -> Result<PairedTensor<f64>> {
    let horizon = check_horizon(t0, t1, "obs_gramian_finite")?;
    let mut propagated = sys.c().clone();
    let mut w = PairedTensor::zeros(sys.a().pairs().to_vec());
    for p in 0..horizon {
        if p > 0 {
            propagated = propagated.einstein_product(sys.a())?;
        }
        w = w.add(&propagated.u_transpose().einstein_product(&propagated)?)?;
    }
    symmetrized(&w)
}

pub fn lyapunov_solve(a: &PairedTensor<f64>, q: &PairedTensor<f64>, side: GramianSide) -> Result<PairedTensor<f64>> {
    lyapunov_solve_with(a, q, side, &Tolerance::default())
}

/// Solves the tensor Stein equation by unfolding it to
/// `(I - M (x) M) vec(W) = vec(Q)` with `M = phi(A)` (reach) or
/// `M = phi(A)^T` (obs).
pub fn lyapunov_solve_with(
    a: &PairedTensor<f64>,
    q: &PairedTensor<f64>,
    side: GramianSide,
    tol: &Tolerance,
) -> Result<PairedTensor<f64>> {
    if !a.is_square() || q.pairs() != a.pairs() {
        return Err(Error::shape(
            "lyapunov_solve",
            format!("A pairs {:?}, Q pairs {:?}", a.pairs(), q.pairs()),
        ));
    }
    let n = a.row_len();
    if n > LYAPUNOV_SIZE_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: LYAPUNOV_SIZE_LIMIT,
        });
    }
    let rho = spectral_radius(a)?;
    if rho >= 1.0 - tol.stability {
        return Err(Error::NoUniqueSolution { spectral_radius: rho });
    }
    let m = match side {
        GramianSide::Reach => a.phi(),
        GramianSide::Obs => a.phi().transpose(),
    };
    let system = DMatrix::<f64>::identity(n * n, n * n) - m.kronecker(&m);
    let rhs = DVector::from_column_slice(q.phi().as_slice());
    let solution = system.lu().solve(&rhs).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let w = PairedTensor::phi_inverse(&DMatrix::from_column_slice(n, n, solution.as_slice()), a.pairs().to_vec())?;
    if q.is_weakly_symmetric(1e-12) {
        symmetrized(&w)
    } else {
        Ok(w)
    }
}

/// Infinite-horizon reachability Gramian, `W - A*W*A^T = B*B^T`.
pub fn reach_gramian_infinite(sys: &MltiSystem, tol: &Tolerance) -> Result<PairedTensor<f64>> {
    let q = sys.b().einstein_product(&sys.b().u_transpose())?;
    lyapunov_solve_with(sys.a(), &q, GramianSide::Reach, tol)
}

/// Infinite-horizon observability Gramian, `A^T*W*A - W = -C^T*C`.
pub fn obs_gramian_infinite(sys: &MltiSystem, tol: &Tolerance) -> Result<PairedTensor<f64>> {
    let q = sys.c().u_transpose().einstein_product(sys.c())?;
    lyapunov_solve_with(sys.a(), &q, GramianSide::Obs, tol)
}

/// `||B  A*B  ...  A^{*(|J|-1)}*B||` with block factors `K_n = J_n`.
pub fn reachability_tensor(sys: &MltiSystem) -> Result<PairedTensor<f64>> {
    let count = sys.state_len();
    let mut blocks = Vec::with_capacity(count);
    let mut block = sys.b().clone();
    for p in 0..count {
        if p > 0 {
            block = sys.a().einstein_product(&block)?;
        }
        blocks.push(block.clone());
    }
    Ok(mode_row_block(&BlockSpec::new(blocks, sys.state_shape().extents().to_vec())?))
}

/// Column block of `C, C*A, ..., C*A^{*(|J|-1)}` with factors `J_n`.
pub fn observability_tensor(sys: &MltiSystem) -> Result<PairedTensor<f64>> {
    let count = sys.state_len();
    let mut blocks = Vec::with_capacity(count);
    let mut block = sys.c().clone();
    for p in 0..count {
        if p > 0 {
            block = block.einstein_product(sys.a())?;
        }
        blocks.push(block.clone());
    }
    Ok(mode_col_block(&BlockSpec::new(blocks, sys.state_shape().extents().to_vec())?))
}

pub fn is_reachable(sys: &MltiSystem) -> Result<bool> {
    is_reachable_with(sys, &Tolerance::default())
}

pub fn is_reachable_with(sys: &MltiSystem, tol: &Tolerance) -> Result<bool> {
    Ok(reachability_tensor(sys)?.rank_u_with(tol) == sys.state_len())
}

pub fn is_observable(sys: &MltiSystem) -> Result<bool> {
    is_observable_with(sys, &Tolerance::default())
}

pub fn is_observable_with(sys: &MltiSystem, tol: &Tolerance) -> Result<bool> {
    Ok(observability_tensor(sys)?.rank_u_with(tol) == sys.state_len())
}

pub fn min_energy_input(
    sys: &MltiSystem,
    x0: &DenseTensor,
    x1: &DenseTensor,
    horizon: usize,
) -> Result<Vec<DenseTensor>> {
    min_energy_input_with(sys, x0, x1, horizon, &Tolerance::default())
}

/// Inputs `U_t = B^T * (A^T)^{*(T-t-1)} * W_c(0, T)^{-1} * V` with
/// `V = X_1 - A^{*T} * X_0`, steering `X_0` to `X_1` in `horizon` steps.
pub fn min_energy_input_with(
    sys: &MltiSystem,
    x0: &DenseTensor,
    x1: &DenseTensor,
    horizon: usize,
    tol: &Tolerance,
) -> Result<Vec<DenseTensor>> {
    let state = sys.state_shape();
    for (name, x) in [("initial", x0), ("target", x1)] {
        if x.shape() != &state {
            return Err(Error::shape(
                "min_energy_input",
                format!(
                    "{name} state has shape {:?}, state shape is {:?}",
                    x.extents(),
                    state.extents()
                ),
            ));
        }
    }
    let gramian = reach_gramian_finite(sys, 0, horizon)?;
    if !gramian.is_u_positive_definite_with(tol) {
        let (min_eigenvalue, _) = gramian.symmetric_eigen_extremes();
        return Err(Error::Unreachable { min_eigenvalue });
    }
    let free = sys.power(horizon as u32)?.einstein_apply(x0)?;
    let v = x1.sub(&free)?;
    let w = gramian.phi();
    if linalg::condition_number(&w) * tol.inverse > 1.0 {
        return Err(Error::Singular {
            condition: linalg::condition_number(&w),
        });
    }
    let z = w
        .cholesky()
        .ok_or_else(|| Error::Numerical {
            op: "min_energy_input",
            detail: "Cholesky factorization of the Gramian failed".into(),
        })?
        .solve(&DVector::from_column_slice(v.data()));
    let a_t = sys.a().u_transpose();
    let b_t = sys.b().u_transpose();
    // co-states (A^T)^{*p} * W^{-1} * V for p = 0 .. T-1
    let mut costate = DenseTensor::new(state, z.as_slice().to_vec())?;
    let mut inputs = vec![None; horizon];
    for p in 0..horizon {
        if p > 0 {
            costate = a_t.einstein_apply(&costate)?;
        }
        inputs[horizon - p - 1] = Some(b_t.einstein_apply(&costate)?);
    }
    Ok(inputs.into_iter().map(|u| u.expect("filled for every step")).collect())
}
