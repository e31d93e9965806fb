//! Even-order paired tensors and the Einstein product.
//!
//! A paired tensor with pairs `(J_1, I_1), ..., (J_N, I_N)` is an order-2N
//! tensor with interleaved indices `(j_1, i_1, ..., j_N, i_N)`. Its data is
//! stored in `ivec` order over the interleaved extents, so the unfolding
//! `phi` only has to reorder entries: row `ivec(j, J)`, column `ivec(i, I)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::shape::{offset_table, Shape};
use crate::tensor::Tensor;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct PairedTensor<T> {
    pairs: Vec<(usize, usize)>,
    data: Vec<T>,
}

pub type RealPairedTensor = PairedTensor<f64>;
pub type ComplexPairedTensor = PairedTensor<Complex64>;

/// Flat offsets of the row block and the column block of a layout.
struct Offsets {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn interleaved(pairs: &[(usize, usize)]) -> Vec<usize> {
    pairs.iter().flat_map(|&(j, i)| [j, i]).collect()
}

fn offsets(pairs: &[(usize, usize)]) -> Offsets {
    let strides = Shape(interleaved(pairs)).strides();
    let row_ext: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let col_ext: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let row_str: Vec<usize> = strides.iter().step_by(2).copied().collect();
    let col_str: Vec<usize> = strides.iter().skip(1).step_by(2).copied().collect();
    Offsets {
        rows: offset_table(&row_ext, &row_str),
        cols: offset_table(&col_ext, &col_str),
    }
}

fn describe(pairs: &[(usize, usize)]) -> String {
    format!("{pairs:?}")
}

impl<T: Scalar> PairedTensor<T> {
    pub fn new(pairs: Vec<(usize, usize)>, data: Vec<T>) -> Result<Self> {
        if let Some(n) = pairs.iter().position(|&(j, i)| j == 0 || i == 0) {
            return Err(Error::invalid(
                "PairedTensor::new",
                format!("pair {n} has a zero extent"),
            ));
        }
        let len: usize = pairs.iter().map(|&(j, i)| j * i).product();
        if data.len() != len {
            return Err(Error::shape(
                "PairedTensor::new",
                format!(
                    "data length {} does not match pairs {} ({len} elements)",
                    data.len(),
                    describe(&pairs)
                ),
            ));
        }
        Ok(PairedTensor { pairs, data })
    }

    pub fn zeros(pairs: Vec<(usize, usize)>) -> Self {
        let len = pairs.iter().map(|&(j, i)| j * i).product();
        PairedTensor {
            pairs,
            data: vec![T::zero(); len],
        }
    }

    /// Builds from `f(row_index, col_index)` with 0-based multi-indices.
    pub fn from_fn(pairs: Vec<(usize, usize)>, mut f: impl FnMut(&[usize], &[usize]) -> T) -> Self {
        let shape = Shape(interleaved(&pairs));
        let data = shape
            .indices()
            .map(|idx| {
                let row: Vec<usize> = idx.iter().step_by(2).copied().collect();
                let col: Vec<usize> = idx.iter().skip(1).step_by(2).copied().collect();
                f(&row, &col)
            })
            .collect();
        PairedTensor { pairs, data }
    }

    /// Reinterprets an order-2N tensor with extents `(J_1, I_1, ..., J_N, I_N)`.
    pub fn from_tensor(tensor: Tensor<T>) -> Result<Self> {
        if !tensor.order().is_multiple_of(2) {
            return Err(Error::shape(
                "PairedTensor::from_tensor",
                format!("order {} is odd", tensor.order()),
            ));
        }
        let pairs = tensor
            .extents()
            .chunks(2)
            .map(|c| (c[0], c[1]))
            .collect();
        Ok(PairedTensor {
            pairs,
            data: tensor.into_data(),
        })
    }

    /// The same entries viewed as an order-2N tensor.
    pub fn as_tensor(&self) -> Tensor<T> {
        Tensor::new(Shape(interleaved(&self.pairs)), self.data.clone())
            .expect("paired layout is consistent")
    }

    /// Single-pair tensor holding a matrix.
    pub fn from_matrix(m: &DMatrix<T>) -> Self {
        PairedTensor {
            pairs: vec![(m.nrows(), m.ncols())],
            data: m.as_slice().to_vec(),
        }
    }

    /// `A_1 o A_2 o ... o A_N` for single-pair factors, giving
    /// `A[j_1, i_1, ..., j_N, i_N] = prod_n A_n[j_n, i_n]`.
    pub fn from_factors(factors: &[PairedTensor<T>]) -> Result<Self> {
        if let Some(n) = factors.iter().position(|f| f.order() != 1) {
            return Err(Error::shape(
                "from_factors",
                format!("factor {n} has {} pairs, expected 1", factors[n].order()),
            ));
        }
        let tensor = factors
            .iter()
            .fold(Tensor::scalar(T::one()), |acc, f| {
                acc.outer_product(&f.as_tensor())
            });
        Self::from_tensor(tensor)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of pairs N; the tensor order is 2N.
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn row_shape(&self) -> Shape {
        Shape(self.pairs.iter().map(|p| p.0).collect())
    }

    pub fn col_shape(&self) -> Shape {
        Shape(self.pairs.iter().map(|p| p.1).collect())
    }

    pub fn row_len(&self) -> usize {
        self.pairs.iter().map(|p| p.0).product()
    }

    pub fn col_len(&self) -> usize {
        self.pairs.iter().map(|p| p.1).product()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.pairs.iter().all(|&(j, i)| j == i)
    }

    /// Entry at 0-based row and column multi-indices.
    pub fn get(&self, row: &[usize], col: &[usize]) -> T {
        let idx: Vec<usize> = row.iter().zip(col).flat_map(|(&j, &i)| [j, i]).collect();
        self.data[Shape(interleaved(&self.pairs)).offset(&idx)]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> PairedTensor<U> {
        PairedTensor {
            pairs: self.pairs.clone(),
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|x| x * factor)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.pairs != other.pairs {
            return Err(Error::shape(
                op,
                format!("{} vs {}", describe(&self.pairs), describe(&other.pairs)),
            ));
        }
        Ok(PairedTensor {
            pairs: self.pairs.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.modulus_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Unfolding `phi(A)[ivec(j, J), ivec(i, I)] = A[j_1, i_1, ..., j_N, i_N]`.
    pub fn phi(&self) -> DMatrix<T> {
        let off = offsets(&self.pairs);
        DMatrix::from_fn(off.rows.len(), off.cols.len(), |r, c| {
            self.data[off.rows[r] + off.cols[c]]
        })
    }

    /// Folds a `|J| x |I|` matrix back into a paired tensor.
    pub fn phi_inverse(m: &DMatrix<T>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut out = Self::zeros(pairs);
        if (m.nrows(), m.ncols()) != (out.row_len(), out.col_len()) {
            return Err(Error::shape(
                "phi_inverse",
                format!(
                    "matrix is {}x{} but pairs {} need {}x{}",
                    m.nrows(),
                    m.ncols(),
                    describe(&out.pairs),
                    out.row_len(),
                    out.col_len()
                ),
            ));
        }
        let off = offsets(&out.pairs);
        for (c, &co) in off.cols.iter().enumerate() {
            for (r, &ro) in off.rows.iter().enumerate() {
                out.data[ro + co] = m[(r, c)];
            }
        }
        Ok(out)
    }

    fn check_contractible(&self, rhs_rows: &[usize], op: &'static str) -> Result<()> {
        if self.order() != rhs_rows.len() {
            return Err(Error::shape(
                op,
                format!(
                    "left operand has {} pairs, right operand has {}",
                    self.order(),
                    rhs_rows.len()
                ),
            ));
        }
        for (n, (&(_, cols), &rows)) in self.pairs.iter().zip(rhs_rows).enumerate() {
            if cols != rows {
                return Err(Error::shape(
                    op,
                    format!("pair {n}: column extent {cols} vs row extent {rows}"),
                ));
            }
        }
        Ok(())
    }

    /// `(A * B)[j, i] = sum_k A[j_1, k_1, ..., j_N, k_N] B[k_1, i_1, ..., k_N, i_N]`.
    pub fn einstein_product(&self, other: &Self) -> Result<Self> {
        let b_rows: Vec<usize> = other.pairs.iter().map(|p| p.0).collect();
        self.check_contractible(&b_rows, "einstein_product")?;
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .zip(&other.pairs)
            .map(|(&(j, _), &(_, i))| (j, i))
            .collect();
        let a_off = offsets(&self.pairs);
        let b_off = offsets(&other.pairs);
        let o_off = offsets(&pairs);
        let mut out = Self::zeros(pairs);
        for (&bc, &oc) in b_off.cols.iter().zip(&o_off.cols) {
            for (&ac, &br) in a_off.cols.iter().zip(&b_off.rows) {
                let b = other.data[br + bc];
                if b == T::zero() {
                    continue;
                }
                for (&ar, &or) in a_off.rows.iter().zip(&o_off.rows) {
                    out.data[or + oc] += self.data[ar + ac] * b;
                }
            }
        }
        Ok(out)
    }

    /// `A * X` for an order-N tensor `X` whose shape is the column shape of `A`.
    pub fn einstein_apply(&self, x: &Tensor<T>) -> Result<Tensor<T>> {
        self.check_contractible(x.extents(), "einstein_apply")?;
        let off = offsets(&self.pairs);
        let mut out = vec![T::zero(); off.rows.len()];
        for (&ac, &xv) in off.cols.iter().zip(x.data()) {
            if xv == T::zero() {
                continue;
            }
            for (o, &ar) in out.iter_mut().zip(&off.rows) {
                *o += self.data[ar + ac] * xv;
            }
        }
        Tensor::new(self.row_shape(), out)
    }

    /// `A^T[i, j] = A[j, i]` pair by pair.
    pub fn u_transpose(&self) -> Self {
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(j, i)| (i, j)).collect();
        let src = offsets(&self.pairs);
        let dst = offsets(&pairs);
        let mut data = vec![T::zero(); self.data.len()];
        for (&sc, &dr) in src.cols.iter().zip(&dst.rows) {
            for (&sr, &dc) in src.rows.iter().zip(&dst.cols) {
                data[dr + dc] = self.data[sr + sc];
            }
        }
        PairedTensor { pairs, data }
    }

    /// Relative test `||A - A^T||_F <= tol * ||A||_F`.
    pub fn is_weakly_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let diff = self
            .sub(&self.u_transpose())
            .expect("square tensors share pairs with their transpose");
        diff.frobenius_norm() <= tol * self.frobenius_norm()
    }

    pub fn u_identity(row_shape: &[usize]) -> Self {
        let pairs = row_shape.iter().map(|&j| (j, j)).collect();
        Self::from_fn(pairs, |r, c| if r == c { T::one() } else { T::zero() })
    }

    /// Square tensor with `values[j]` at `(j_1, j_1, ..., j_N, j_N)`.
    pub fn u_diagonal(values: &Tensor<T>) -> Self {
        let pairs = values.extents().iter().map(|&j| (j, j)).collect();
        Self::from_fn(pairs, |r, c| if r == c { values.get(r) } else { T::zero() })
    }

    fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::shape(
                op,
                format!("pairs {} are not square", describe(&self.pairs)),
            ))
        }
    }

    /// `A^{*k}` by repeated squaring; `A^{*0}` is the U-identity.
    pub fn einstein_power(&self, k: u32) -> Result<Self> {
        self.require_square("einstein_power")?;
        let row: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        let mut result = Self::u_identity(&row);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.einstein_product(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.einstein_product(&base)?;
            }
        }
        Ok(result)
    }

    pub fn is_u_orthogonal(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let m = self.phi();
        let n = m.nrows();
        let id = DMatrix::<T>::identity(n, n);
        let ut_u = m.adjoint() * &m - &id;
        let u_ut = &m * m.adjoint() - id;
        ut_u.norm() <= tol * n as f64 && u_ut.norm() <= tol * n as f64
    }

    pub fn u_inverse(&self) -> Result<Self> {
        self.u_inverse_with(&Tolerance::default())
    }

    /// `phi^{-1}(phi(A)^{-1})` via dense LU, refused when the condition
    /// number exceeds `1 / tol.inverse`.
    pub fn u_inverse_with(&self, tol: &Tolerance) -> Result<Self> {
        self.require_square("u_inverse")?;
        let m = self.phi();
        let condition = linalg::condition_number(&m);
        if !(condition.is_finite() && condition * tol.inverse <= 1.0) {
            return Err(Error::Singular { condition });
        }
        let inv = m.lu().try_inverse().ok_or(Error::Singular { condition })?;
        Self::phi_inverse(&inv, self.pairs.clone())
    }

    /// Unfolding determinant `det(phi(A))`.
    pub fn u_det(&self) -> Result<T> {
        self.require_square("u_det")?;
        Ok(self.phi().determinant())
    }

    pub fn rank_u(&self) -> usize {
        self.rank_u_with(&Tolerance::default())
    }

    pub fn rank_u_with(&self, tol: &Tolerance) -> usize {
        linalg::numerical_rank(&self.phi(), tol.rank)
    }

    /// Dimension of the null space, `|I| - rank_U(A)`.
    pub fn nullity_u(&self) -> usize {
        self.col_len() - self.rank_u()
    }
}

impl PairedTensor<f64> {
    pub fn is_u_positive_definite(&self) -> bool {
        self.is_u_positive_definite_with(&Tolerance::default())
    }

    /// The quadratic form `X^T * A * X` only sees the symmetric part of
    /// `phi(A)`; its smallest eigenvalue must clear `pd * max(1, ||phi(A)||_2)`.
    pub fn is_u_positive_definite_with(&self, tol: &Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        let m = self.phi();
        let (lo, _) = linalg::symmetric_part_extremes(&m);
        lo > tol.pd * linalg::spectral_norm(&m).max(1.0)
    }

    /// `(min, max)` eigenvalues of the symmetric part of the unfolding.
    pub fn symmetric_eigen_extremes(&self) -> (f64, f64) {
        linalg::symmetric_part_extremes(&self.phi())
    }

    pub fn to_complex(&self) -> ComplexPairedTensor {
        self.map(|x| Complex64::new(x, 0.0))
    }
}

/// `(A_1 o ... o A_N)^{*k} = A_1^k o ... o A_N^k` for single-pair factors.
pub fn factored_power<T: Scalar>(factors: &[PairedTensor<T>], k: u32) -> Result<PairedTensor<T>> {
    let powered = factors
        .iter()
        .map(|f| f.einstein_power(k))
        .collect::<Result<Vec<_>>>()?;
    PairedTensor::from_factors(&powered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_paired, random_tensor, rng};
    use approx::assert_relative_eq;

    fn mat(rows: usize, cols: usize, row_major: &[f64]) -> RealPairedTensor {
        PairedTensor::from_matrix(&DMatrix::from_row_slice(rows, cols, row_major))
    }

    fn close(a: &RealPairedTensor, b: &RealPairedTensor, tol: f64) -> bool {
        a.pairs() == b.pairs() && a.sub(b).unwrap().frobenius_norm() <= tol * (1.0 + b.frobenius_norm())
    }

    #[test]
    fn constructor_validates() {
        assert!(PairedTensor::<f64>::new(vec![(2, 3)], vec![0.0; 5]).is_err());
        assert!(PairedTensor::<f64>::new(vec![(2, 0)], vec![]).is_err());
        let p = PairedTensor::<f64>::new(vec![(2, 3), (1, 2)], vec![0.0; 12]).unwrap();
        assert_eq!(p.row_shape().extents(), &[2, 1]);
        assert_eq!(p.col_shape().extents(), &[3, 2]);
    }

    #[test]
    fn phi_of_identity_and_single_pair() {
        let id = PairedTensor::<f64>::u_identity(&[3, 2]);
        assert_eq!(id.phi(), DMatrix::identity(6, 6));
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(PairedTensor::from_matrix(&m).phi(), m);
    }

    #[test]
    fn phi_matches_general_unfold_and_definition() {
        let mut r = rng(11);
        let a = random_paired(&mut r, &[(2, 3), (3, 1), (2, 2)]);
        let perm = [0, 2, 4, 1, 3, 5];
        assert_eq!(a.phi(), a.as_tensor().general_unfold(&perm, 3).unwrap());
        let rows = a.row_shape();
        let cols = a.col_shape();
        let m = a.phi();
        for j in rows.indices() {
            for i in cols.indices() {
                assert_eq!(m[(rows.offset(&j), cols.offset(&i))], a.get(&j, &i));
            }
        }
    }

    #[test]
    fn phi_round_trip_is_exact() {
        let mut r = rng(12);
        let a = random_paired(&mut r, &[(2, 3), (1, 2), (3, 3)]);
        let back = PairedTensor::phi_inverse(&a.phi(), a.pairs().to_vec()).unwrap();
        assert_eq!(back, a);
        assert!(PairedTensor::phi_inverse(&a.phi(), vec![(2, 3)]).is_err());
    }

    #[test]
    fn kronecker_order_of_outer_product() {
        // ivec puts mode 1 fastest, so phi(A1 o A2) = A2 (x) A1.
        let a1 = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let a2 = DMatrix::from_row_slice(2, 3, &[0.5, -1.0, 2.0, 1.5, 0.0, 3.0]);
        let a = PairedTensor::from_factors(&[
            PairedTensor::from_matrix(&a1),
            PairedTensor::from_matrix(&a2),
        ])
        .unwrap();
        assert_eq!(a.pairs(), &[(2, 2), (2, 3)]);
        assert_eq!(a.phi(), a2.kronecker(&a1));
    }

    #[test]
    fn einstein_product_small_cases() {
        let mut r = rng(13);
        let a = random_paired(&mut r, &[(2, 3), (3, 2)]);
        let id = PairedTensor::u_identity(&[3, 2]);
        assert!(close(&a.einstein_product(&id).unwrap(), &a, 1e-15));

        let m1 = mat(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let m2 = mat(3, 1, &[1.0, -1.0, 2.0]);
        let p = m1.einstein_product(&m2).unwrap();
        assert_eq!(p.phi(), m1.phi() * m2.phi());

        let bad = random_paired(&mut r, &[(2, 2), (2, 2)]);
        match a.einstein_product(&bad) {
            Err(Error::ShapeMismatch { detail, .. }) => assert!(detail.contains("pair 0")),
            other => panic!("expected shape mismatch, got {other:?}"),
        }
    }

    #[test]
    fn einstein_apply_matches_matvec() {
        let mut r = rng(14);
        let a = random_paired(&mut r, &[(2, 3), (3, 2)]);
        let x = random_tensor(&mut r, &[3, 2]);
        let y = a.einstein_apply(&x).unwrap();
        assert_eq!(y.extents(), &[2, 3]);
        let expect = a.phi() * nalgebra::DVector::from_column_slice(x.data());
        for (p, q) in y.data().iter().zip(expect.iter()) {
            assert_relative_eq!(p, q, max_relative = 1e-13, epsilon = 1e-14);
        }
        let id = PairedTensor::u_identity(&[3, 2]);
        assert_eq!(id.einstein_apply(&x).unwrap(), x);
        assert!(a.einstein_apply(&random_tensor(&mut r, &[2, 3])).is_err());
    }

    #[test]
    fn transpose_properties() {
        let mut r = rng(15);
        let a = random_paired(&mut r, &[(2, 3), (3, 2)]);
        let b = random_paired(&mut r, &[(3, 1), (2, 2)]);
        assert_eq!(a.u_transpose().u_transpose(), a);
        assert_eq!(a.u_transpose().phi(), a.phi().transpose());
        let lhs = a.einstein_product(&b).unwrap().u_transpose();
        let rhs = b.u_transpose().einstein_product(&a.u_transpose()).unwrap();
        assert!(close(&lhs, &rhs, 1e-14));
        let g = a.einstein_product(&a.u_transpose()).unwrap();
        assert!(g.is_weakly_symmetric(1e-14));
        assert!(!a.is_weakly_symmetric(1e-14));
    }

    #[test]
    fn identity_and_diagonal() {
        let v = Tensor::from_extents(&[2, 2], vec![1.0, -2.0, 3.0, 0.5]).unwrap();
        let w = Tensor::from_extents(&[2, 2], vec![2.0, 1.0, -1.0, 4.0]).unwrap();
        let dv = PairedTensor::u_diagonal(&v);
        let c = Tensor::from_extents(&[2, 2], vec![3.0; 4]).unwrap();
        assert_eq!(
            PairedTensor::u_diagonal(&c),
            PairedTensor::<f64>::u_identity(&[2, 2]).scale(3.0)
        );
        let vw = Tensor::from_extents(&[2, 2], vec![2.0, -2.0, -3.0, 2.0]).unwrap();
        assert_eq!(
            dv.einstein_product(&PairedTensor::u_diagonal(&w)).unwrap(),
            PairedTensor::u_diagonal(&vw)
        );
        assert_relative_eq!(dv.u_det().unwrap(), -3.0, max_relative = 1e-14);
        assert_relative_eq!(
            PairedTensor::<f64>::u_identity(&[3, 2]).u_det().unwrap(),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn inverse_cases() {
        let id = PairedTensor::<f64>::u_identity(&[2, 3]);
        assert!(close(&id.u_inverse().unwrap(), &id, 1e-15));
        let c = id.scale(4.0);
        assert!(close(&c.u_inverse().unwrap(), &id.scale(0.25), 1e-15));

        let mut r = rng(16);
        let a = random_paired(&mut r, &[(2, 2), (3, 3)])
            .add(&PairedTensor::u_identity(&[2, 3]).scale(3.0))
            .unwrap();
        let inv = a.u_inverse().unwrap();
        let ident = PairedTensor::u_identity(&[2, 3]);
        assert!(a.einstein_product(&inv).unwrap().sub(&ident).unwrap().frobenius_norm() <= 1e-10);
        assert!(inv.einstein_product(&a).unwrap().sub(&ident).unwrap().frobenius_norm() <= 1e-10);

        let singular = PairedTensor::<f64>::zeros(vec![(2, 2), (2, 2)]);
        assert!(matches!(singular.u_inverse(), Err(Error::Singular { .. })));
        let rect = PairedTensor::<f64>::zeros(vec![(2, 3)]);
        assert!(matches!(rect.u_inverse(), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(PairedTensor::<f64>::u_identity(&[3, 2]).rank_u(), 6);
        assert_eq!(PairedTensor::<f64>::zeros(vec![(3, 2), (2, 2)]).rank_u(), 0);
        let mut r = rng(17);
        let b = random_paired(&mut r, &[(3, 1), (2, 1)]);
        let g = b.einstein_product(&b.u_transpose()).unwrap();
        assert_eq!(g.rank_u(), 1);
        assert_eq!(g.nullity_u(), 5);
    }

    #[test]
    fn positive_definiteness() {
        let id = PairedTensor::<f64>::u_identity(&[2, 3]);
        assert!(id.is_u_positive_definite());
        assert!(!id.scale(-1.0).is_u_positive_definite());
        let mut r = rng(18);
        let b = random_paired(&mut r, &[(2, 3), (2, 2)]);
        assert_eq!(b.rank_u(), 4);
        let g = b.einstein_product(&b.u_transpose()).unwrap();
        assert!(g.is_u_positive_definite());
        let thin = random_paired(&mut r, &[(2, 1), (2, 1)]);
        let g = thin.einstein_product(&thin.u_transpose()).unwrap();
        assert!(!g.is_u_positive_definite());
    }

    #[test]
    fn orthogonality() {
        let id = PairedTensor::<f64>::u_identity(&[2, 2]);
        assert!(id.is_u_orthogonal(1e-14));
        assert!(!id.scale(2.0).is_u_orthogonal(1e-14));
        let rot = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let q = PairedTensor::from_factors(&[
            PairedTensor::from_matrix(&rot),
            PairedTensor::from_matrix(&rot.transpose()),
        ])
        .unwrap();
        assert!(q.is_u_orthogonal(1e-14));
    }

    #[test]
    fn powers() {
        let mut r = rng(19);
        let a = random_paired(&mut r, &[(3, 3), (2, 2)]);
        assert_eq!(a.einstein_power(0).unwrap(), PairedTensor::u_identity(&[3, 2]));
        assert_eq!(a.einstein_power(1).unwrap(), a);
        let a3 = a
            .einstein_product(&a)
            .unwrap()
            .einstein_product(&a)
            .unwrap();
        assert!(close(&a.einstein_power(3).unwrap(), &a3, 1e-13));
        assert!(random_paired(&mut r, &[(2, 3)]).einstein_power(2).is_err());
    }

    #[test]
    fn factored_and_dense_powers_agree() {
        let a1 = mat(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.5, 0.8]);
        let a2 = mat(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        let factors = [a1, a2];
        let a = PairedTensor::from_factors(&factors).unwrap();
        for k in 0..=10 {
            let dense = a.einstein_power(k).unwrap();
            let fact = factored_power(&factors, k).unwrap();
            let diff = dense.sub(&fact).unwrap().frobenius_norm();
            assert!(diff <= 1e-12 * (1.0 + dense.frobenius_norm()), "k={k} diff={diff}");
        }
    }
}
