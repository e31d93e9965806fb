//! U-eigenvalues, eigentensors, the tensor eigenvalue decomposition and the
//! characteristic polynomial, all computed on the unfolding `phi(A)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::block::{mode_row_block, BlockSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::paired::{ComplexPairedTensor, PairedTensor};
use crate::tensor::{ComplexTensor, Tensor};
use crate::tolerance::Tolerance;

/// Eigenvalues sorted by descending magnitude, then real part, then
/// imaginary part, with unit-norm eigentensors in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct USpectrum {
    pub eigenvalues: Vec<Complex64>,
    pub eigentensors: Vec<ComplexTensor>,
}

/// Eigenvalues grouped within `cluster * max|lambda|` of each other.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    pub center: Complex64,
    /// Indices into the sorted eigenvalue list.
    pub members: Vec<usize>,
}

impl EigenCluster {
    pub fn algebraic_multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// `A = V * D * V^{-1}` with `V` the mode row block of the eigentensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Tevd {
    pub v: ComplexPairedTensor,
    pub d: ComplexPairedTensor,
    pub v_inv: ComplexPairedTensor,
    /// Every eigenvalue is real, so `V` and `D` can be taken real.
    pub real_representable: bool,
}

fn require_square(a: &PairedTensor<f64>, op: &'static str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::shape(op, format!("pairs {:?} are not square", a.pairs())))
    }
}

fn sort_descending(values: &mut [Complex64]) {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    // Quantize before comparing so rounding noise cannot reorder ties such
    // as conjugate pairs or equal-magnitude real pairs.
    let q = |x: f64| (x / scale * 1e10).round() as i64;
    values.sort_by(|a, b| {
        (q(b.norm()), q(b.re), q(b.im))
            .cmp(&(q(a.norm()), q(a.re), q(a.im)))
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
}

fn eigenvalues_of(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical {
            op: "u_eigen",
            detail: format!("Schur iteration did not converge for a {}x{} unfolding", m.nrows(), m.ncols()),
        })?;
    let mut values: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    sort_descending(&mut values);
    Ok(values)
}

/// Sorted U-eigenvalues without eigentensors.
pub fn u_eigenvalues(a: &PairedTensor<f64>) -> Result<Vec<Complex64>> {
    require_square(a, "u_eigenvalues")?;
    eigenvalues_of(&a.phi())
}

/// Groups sorted eigenvalues whose distance to a cluster's first member is
/// within `tol.cluster * max|lambda|`.
pub fn cluster_eigenvalues(eigenvalues: &[Complex64], tol: &Tolerance) -> Vec<EigenCluster> {
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap = tol.cluster * scale;
    let mut clusters: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (k, &z) in eigenvalues.iter().enumerate() {
        match clusters.iter_mut().find(|(anchor, _)| (z - *anchor).norm() <= gap) {
            Some((_, members)) => members.push(k),
            None => clusters.push((z, vec![k])),
        }
    }
    clusters
        .into_iter()
        .map(|(_, members)| {
            let sum: Complex64 = members.iter().map(|&k| eigenvalues[k]).sum();
            EigenCluster {
                center: sum / members.len() as f64,
                members,
            }
        })
        .collect()
}

fn shifted(m: &DMatrix<f64>, shift: Complex64) -> DMatrix<Complex64> {
    let mut c = m.map(|x| Complex64::new(x, 0.0));
    for k in 0..c.nrows() {
        c[(k, k)] -= shift;
    }
    c
}

/// `|J| - rank_U(A - lambda I)`.
pub fn geometric_multiplicity(a: &PairedTensor<f64>, lambda: Complex64, tol: &Tolerance) -> Result<usize> {
    require_square(a, "geometric_multiplicity")?;
    let m = a.phi();
    Ok(m.nrows() - linalg::numerical_rank(&shifted(&m, lambda), tol.rank))
}

/// Rotates `v` so its first non-negligible entry is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8 * max) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Right singular vectors for the `count` smallest singular values.
fn null_vectors(c: DMatrix<Complex64>, count: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = c.ncols();
    let svd = c.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical {
        op: "u_eigen",
        detail: "singular vectors unavailable".into(),
    })?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    Ok(order
        .into_iter()
        .take(count)
        .map(|k| (0..n).map(|c| v_t[(k, c)].conj()).collect())
        .collect())
}

pub fn u_eigen(a: &PairedTensor<f64>) -> Result<USpectrum> {
    u_eigen_with(a, &Tolerance::default())
}

/// Eigenpairs of the unfolding, folded back to tensors of the row shape.
///
/// Each eigenvalue cluster of size `m` receives the `m` right singular
/// vectors of `phi(A) - lambda I` with the smallest singular values. For a
/// defective cluster these span more than the eigenspace.
pub fn u_eigen_with(a: &PairedTensor<f64>, tol: &Tolerance) -> Result<USpectrum> {
    require_square(a, "u_eigen")?;
    let m = a.phi();
    let eigenvalues = eigenvalues_of(&m)?;
    let shape = a.row_shape();
    let mut eigentensors = vec![None; eigenvalues.len()];
    for cluster in cluster_eigenvalues(&eigenvalues, tol) {
        let shift = if cluster.members.len() == 1 {
            eigenvalues[cluster.members[0]]
        } else {
            cluster.center
        };
        let vectors = null_vectors(shifted(&m, shift), cluster.members.len())?;
        for (&k, mut v) in cluster.members.iter().zip(vectors) {
            fix_phase(&mut v);
            eigentensors[k] = Some(Tensor::new(shape.clone(), v)?);
        }
    }
    Ok(USpectrum {
        eigenvalues,
        eigentensors: eigentensors
            .into_iter()
            .map(|t| t.expect("every eigenvalue belongs to a cluster"))
            .collect(),
    })
}

pub fn spectral_radius(a: &PairedTensor<f64>) -> Result<f64> {
    Ok(u_eigenvalues(a)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

pub fn tevd(a: &PairedTensor<f64>) -> Result<Tevd> {
    tevd_with(a, &Tolerance::default())
}

pub fn tevd_with(a: &PairedTensor<f64>, tol: &Tolerance) -> Result<Tevd> {
    let spectrum = u_eigen_with(a, tol)?;
    for cluster in cluster_eigenvalues(&spectrum.eigenvalues, tol) {
        let algebraic = cluster.algebraic_multiplicity();
        let geometric = geometric_multiplicity(a, cluster.center, tol)?;
        if geometric < algebraic {
            return Err(Error::Defective {
                eigenvalue: cluster.center,
                algebraic,
                geometric,
            });
        }
    }
    let row = a.row_shape();
    let vector_pairs: Vec<(usize, usize)> = row.extents().iter().map(|&j| (j, 1)).collect();
    let blocks = spectrum
        .eigentensors
        .iter()
        .map(|x| PairedTensor::new(vector_pairs.clone(), x.data().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let v = mode_row_block(&BlockSpec::new(blocks, row.extents().to_vec())?);
    let d = PairedTensor::u_diagonal(&Tensor::new(row, spectrum.eigenvalues.clone())?);
    let v_inv = v.u_inverse_with(tol)?;
    let scale = spectrum.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let real_representable = spectrum
        .eigenvalues
        .iter()
        .all(|z| z.im.abs() <= tol.cluster * scale);
    Ok(Tevd {
        v,
        d,
        v_inv,
        real_representable,
    })
}

impl Tevd {
    /// `V * D * V^{-1}`.
    pub fn reconstruct(&self) -> Result<ComplexPairedTensor> {
        self.v.einstein_product(&self.d)?.einstein_product(&self.v_inv)
    }
}

/// Monic coefficients of `det_U(lambda I - A)`, highest power first.
pub fn characteristic_polynomial(a: &PairedTensor<f64>) -> Result<Vec<f64>> {
    let eigenvalues = u_eigenvalues(a)?;
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &z in &eigenvalues {
        let mut next = coeffs.clone();
        next.push(Complex64::new(0.0, 0.0));
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] -= z * c;
        }
        coeffs = next;
    }
    Ok(coeffs.into_iter().map(|c| c.re).collect())
}

/// `p(A)` by Horner's scheme with Einstein products; coefficients highest
/// power first.
pub fn polynomial_at(coeffs: &[f64], a: &PairedTensor<f64>) -> Result<PairedTensor<f64>> {
    require_square(a, "polynomial_at")?;
    let row: Vec<usize> = a.pairs().iter().map(|p| p.0).collect();
    let id = PairedTensor::<f64>::u_identity(&row);
    let mut acc = PairedTensor::zeros(a.pairs().to_vec());
    for &c in coeffs {
        acc = acc.einstein_product(a)?.add(&id.scale(c))?;
    }
    Ok(acc)
}
