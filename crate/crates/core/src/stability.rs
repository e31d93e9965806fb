//! Internal stability from the U-eigenvalues of `A`.

use num_complex::Complex64;

use crate::error::Result;
use crate::paired::PairedTensor;
use crate::spectral::{cluster_eigenvalues, geometric_multiplicity, u_eigen_with, USpectrum};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    AsymptoticallyStable,
    Stable,
    Unstable,
}

impl StabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityClass::AsymptoticallyStable => "asymptotically-stable",
            StabilityClass::Stable => "stable",
            StabilityClass::Unstable => "unstable",
        }
    }
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Multiplicities of an eigenvalue cluster on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalCluster {
    pub eigenvalue: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    pub eigenvalues: USpectrum,
    pub marginal_detail: Vec<MarginalCluster>,
}

pub fn classify_stability(a: &PairedTensor<f64>) -> Result<StabilityVerdict> {
    classify_stability_with(a, &Tolerance::default())
}

/// Asymptotically stable when every `|lambda| < 1 - tol.stability`; unstable
/// when some `|lambda| > 1 + tol.stability`; otherwise stable exactly when
/// each cluster on the unit circle has equal algebraic and geometric
/// multiplicity.
pub fn classify_stability_with(a: &PairedTensor<f64>, tol: &Tolerance) -> Result<StabilityVerdict> {
    let spectrum = u_eigen_with(a, tol)?;
    let band = tol.stability;
    let radius = spectrum
        .eigenvalues
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);

    let mut marginal_detail = Vec::new();
    let class = if radius < 1.0 - band {
        StabilityClass::AsymptoticallyStable
    } else if radius > 1.0 + band {
        StabilityClass::Unstable
    } else {
        for cluster in cluster_eigenvalues(&spectrum.eigenvalues, tol) {
            let on_circle = cluster
                .members
                .iter()
                .any(|&k| (spectrum.eigenvalues[k].norm() - 1.0).abs() <= band);
            if on_circle {
                marginal_detail.push(MarginalCluster {
                    eigenvalue: cluster.center,
                    algebraic: cluster.algebraic_multiplicity(),
                    geometric: geometric_multiplicity(a, cluster.center, tol)?,
                });
            }
        }
        if marginal_detail.iter().all(|c| c.algebraic == c.geometric) {
            StabilityClass::Stable
        } else {
            StabilityClass::Unstable
        }
    };
    Ok(StabilityVerdict {
        class,
        eigenvalues: spectrum,
        marginal_detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn mat(rows: usize, cols: usize, row_major: &[f64]) -> PairedTensor<f64> {
        PairedTensor::from_matrix(&DMatrix::from_row_slice(rows, cols, row_major))
    }

    #[test]
    fn scaled_identities() {
        let id = PairedTensor::<f64>::u_identity(&[2, 3]);
        assert_eq!(
            classify_stability(&id.scale(0.5)).unwrap().class,
            StabilityClass::AsymptoticallyStable
        );
        let v = classify_stability(&id).unwrap();
        assert_eq!(v.class, StabilityClass::Stable);
        assert_eq!(v.marginal_detail.len(), 1);
        assert_eq!(v.marginal_detail[0].algebraic, 6);
        assert_eq!(v.marginal_detail[0].geometric, 6);
        assert_eq!(
            classify_stability(&id.scale(1.5)).unwrap().class,
            StabilityClass::Unstable
        );
    }

    #[test]
    fn example_operator_is_asymptotically_stable() {
        let a = PairedTensor::from_factors(&[
            mat(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.5, 0.8]),
            mat(2, 2, &[0.0, 1.0, 0.5, 0.0]),
        ])
        .unwrap();
        let v = classify_stability(&a).unwrap();
        assert_eq!(v.class, StabilityClass::AsymptoticallyStable);
        assert!(v.marginal_detail.is_empty());
    }

    #[test]
    fn jordan_block_on_unit_circle_is_unstable() {
        let j = mat(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let v = classify_stability(&j).unwrap();
        assert_eq!(v.class, StabilityClass::Unstable);
        assert_eq!(v.marginal_detail[0].algebraic, 2);
        assert_eq!(v.marginal_detail[0].geometric, 1);

        // the same block with a contracting direction in a second mode
        let a = PairedTensor::from_factors(&[j, mat(2, 2, &[1.0, 0.0, 0.0, 0.3])]).unwrap();
        assert_eq!(classify_stability(&a).unwrap().class, StabilityClass::Unstable);
    }

    #[test]
    fn rotation_is_marginally_stable() {
        let (s, c) = 0.7f64.sin_cos();
        let rot = mat(2, 2, &[c, -s, s, c]);
        let a = PairedTensor::from_factors(&[rot, mat(1, 1, &[1.0])]).unwrap();
        let v = classify_stability(&a).unwrap();
        assert_eq!(v.class, StabilityClass::Stable);
        assert_eq!(v.marginal_detail.len(), 2);
    }
}
