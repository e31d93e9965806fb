//! Dense tensors stored in `ivec` order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::paired::PairedTensor;
use crate::scalar::Scalar;
use crate::shape::Shape;

/// Order-N tensor. The element at 0-based multi-index `j` lives at
/// `data[shape.offset(j)]`, i.e. the first index varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    shape: Shape,
    data: Vec<T>,
}

pub type DenseTensor = Tensor<f64>;
pub type ComplexTensor = Tensor<Complex64>;

impl<T: Scalar> Tensor<T> {
    pub fn new(shape: Shape, data: Vec<T>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::shape(
                "Tensor::new",
                format!(
                    "data length {} does not match shape {:?} ({} elements)",
                    data.len(),
                    shape.extents(),
                    shape.len()
                ),
            ));
        }
        Ok(Tensor { shape, data })
    }

    pub fn from_extents(extents: &[usize], data: Vec<T>) -> Result<Self> {
        Self::new(Shape::new(extents.to_vec())?, data)
    }

    pub fn zeros(shape: Shape) -> Self {
        let data = vec![T::zero(); shape.len()];
        Tensor { shape, data }
    }

    pub fn scalar(value: T) -> Self {
        Tensor {
            shape: Shape::scalar(),
            data: vec![value],
        }
    }

    /// Builds a tensor from a function of the 0-based multi-index.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = shape.indices().map(|idx| f(&idx)).collect();
        Tensor { shape, data }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn extents(&self) -> &[usize] {
        self.shape.extents()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, index: &[usize]) -> T {
        self.data[self.shape.offset(index)]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Tensor<U> {
        Tensor {
            shape: self.shape.clone(),
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
        if self.shape != other.shape {
            return Err(Error::shape(
                op,
                format!("{:?} vs {:?}", self.extents(), other.extents()),
            ));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
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

    /// Sum of elementwise products over all indices. Bilinear: complex
    /// entries are not conjugated.
    pub fn inner_product(&self, other: &Self) -> Result<T> {
        if self.shape != other.shape {
            return Err(Error::shape(
                "inner_product",
                format!("{:?} vs {:?}", self.extents(), other.extents()),
            ));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// `(X o Y)[j, i] = X[j] Y[i]` with the modes of `other` appended.
    pub fn outer_product(&self, other: &Self) -> Self {
        let mut extents = self.extents().to_vec();
        extents.extend_from_slice(other.extents());
        let mut data = Vec::with_capacity(self.len() * other.len());
        for &y in &other.data {
            data.extend(self.data.iter().map(|&x| x * y));
        }
        Tensor {
            shape: Shape(extents),
            data,
        }
    }

    /// `X x_n A`: contracts mode `n` (0-based) with the columns of the
    /// single-pair operator `matrix`.
    pub fn mode_n_product(&self, matrix: &PairedTensor<T>, n: usize) -> Result<Self> {
        if matrix.order() != 1 {
            return Err(Error::shape(
                "mode_n_product",
                format!("factor must have one pair, got {}", matrix.order()),
            ));
        }
        if n >= self.order() {
            return Err(Error::invalid(
                "mode_n_product",
                format!("mode {n} out of range for order {}", self.order()),
            ));
        }
        let (rows, cols) = matrix.pairs()[0];
        if cols != self.extents()[n] {
            return Err(Error::shape(
                "mode_n_product",
                format!(
                    "factor has {cols} columns but mode {n} has extent {}",
                    self.extents()[n]
                ),
            ));
        }
        let mut extents = self.extents().to_vec();
        extents[n] = rows;
        let out_shape = Shape(extents);
        let stride = self.shape.strides()[n];
        let a = matrix.data();
        let mut data = Vec::with_capacity(out_shape.len());
        for mut idx in out_shape.indices() {
            let i = idx[n];
            idx[n] = 0;
            let base = self.shape.offset(&idx);
            let mut acc = T::zero();
            for j in 0..cols {
                acc += self.data[base + j * stride] * a[i + j * rows];
            }
            data.push(acc);
        }
        Ok(Tensor {
            shape: out_shape,
            data,
        })
    }

    /// `X x {A_1, ..., A_N}`: one mode product per mode.
    pub fn tucker_product(&self, factors: &[PairedTensor<T>]) -> Result<Self> {
        if factors.len() != self.order() {
            return Err(Error::shape(
                "tucker_product",
                format!(
                    "{} factors for a tensor of order {}",
                    factors.len(),
                    self.order()
                ),
            ));
        }
        factors
            .iter()
            .enumerate()
            .try_fold(self.clone(), |acc, (n, f)| acc.mode_n_product(f, n))
    }

    /// Mode `k` of the result is mode `perm[k]` of `self` (0-based).
    pub fn s_transpose(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.order())?;
        let extents: Vec<usize> = perm.iter().map(|&p| self.extents()[p]).collect();
        let out_shape = Shape(extents);
        let src_strides = self.shape.strides();
        let strides: Vec<usize> = perm.iter().map(|&p| src_strides[p]).collect();
        let data = out_shape
            .indices()
            .map(|idx| {
                let off: usize = idx.iter().zip(&strides).map(|(j, s)| j * s).sum();
                self.data[off]
            })
            .collect();
        Ok(Tensor {
            shape: out_shape,
            data,
        })
    }

    /// `r x c` unfolding: rows enumerate modes `perm[..split]` and columns
    /// modes `perm[split..]`, both in `ivec` order.
    pub fn general_unfold(&self, perm: &[usize], split: usize) -> Result<DMatrix<T>> {
        if split == 0 || split > self.order() {
            return Err(Error::invalid(
                "general_unfold",
                format!("split {split} must satisfy 1 <= split <= {}", self.order()),
            ));
        }
        let permuted = self.s_transpose(perm)?;
        let rows: usize = permuted.extents()[..split].iter().product();
        let cols = permuted.len() / rows;
        Ok(DMatrix::from_vec(rows, cols, permuted.data))
    }

    /// n-mode matricization: mode `n` indexes rows, the remaining modes in
    /// their original order index columns.
    pub fn n_mode_matricization(&self, n: usize) -> Result<DMatrix<T>> {
        if n >= self.order() {
            return Err(Error::invalid(
                "n_mode_matricization",
                format!("mode {n} out of range for order {}", self.order()),
            ));
        }
        let perm: Vec<usize> = std::iter::once(n)
            .chain((0..self.order()).filter(|&m| m != n))
            .collect();
        self.general_unfold(&perm, 1)
    }
}

impl DenseTensor {
    pub fn to_complex(&self) -> ComplexTensor {
        self.map(|x| Complex64::new(x, 0.0))
    }
}

pub(crate) fn check_permutation(perm: &[usize], order: usize) -> Result<()> {
    if perm.len() != order {
        return Err(Error::invalid(
            "permutation",
            format!("length {} for order {order}", perm.len()),
        ));
    }
    let mut seen = vec![false; order];
    for &p in perm {
        if p >= order || seen[p] {
            return Err(Error::invalid(
                "permutation",
                format!("{perm:?} is not a permutation of 0..{order}"),
            ));
        }
        seen[p] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_tensor, rng};

    fn t(extents: &[usize], data: &[f64]) -> DenseTensor {
        Tensor::from_extents(extents, data.to_vec()).unwrap()
    }

    fn mat(rows: usize, cols: usize, row_major: &[f64]) -> PairedTensor<f64> {
        PairedTensor::from_matrix(&DMatrix::from_row_slice(rows, cols, row_major))
    }

    #[test]
    fn constructor_checks_length() {
        assert!(Tensor::<f64>::from_extents(&[2, 3], vec![0.0; 5]).is_err());
    }

    #[test]
    fn outer_product_examples() {
        let s = Tensor::scalar(2.0).outer_product(&Tensor::scalar(3.0));
        assert_eq!(s.order(), 0);
        assert_eq!(s.data(), &[6.0]);

        let e1 = t(&[2], &[1.0, 0.0]);
        let e2 = t(&[2], &[0.0, 1.0]);
        let p = e1.outer_product(&e2);
        assert_eq!(p.extents(), &[2, 2]);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if (i, j) == (0, 1) { 1.0 } else { 0.0 };
                assert_eq!(p.get(&[i, j]), expect);
            }
        }
    }

    #[test]
    fn outer_product_matches_nested_loops() {
        let mut r = rng(1);
        let x = random_tensor(&mut r, &[2, 3]);
        let y = random_tensor(&mut r, &[2]);
        let p = x.outer_product(&y);
        assert_eq!(p.extents(), &[2, 3, 2]);
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..2 {
                    assert_eq!(p.get(&[a, b, c]), x.get(&[a, b]) * y.get(&[c]));
                }
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let ones = t(&[2, 3], &[1.0; 6]);
        let zero = Tensor::zeros(ones.shape().clone());
        assert_eq!(ones.inner_product(&zero).unwrap(), 0.0);
        assert_eq!(ones.inner_product(&ones).unwrap(), 6.0);
        assert!(ones.inner_product(&t(&[3, 2], &[1.0; 6])).is_err());

        let mut r = rng(2);
        let x = random_tensor(&mut r, &[3, 2, 2]);
        let y = random_tensor(&mut r, &[3, 2, 2]);
        let flat: f64 = x.data().iter().zip(y.data()).map(|(a, b)| a * b).sum();
        approx::assert_relative_eq!(x.inner_product(&y).unwrap(), flat, max_relative = 1e-14);
        approx::assert_relative_eq!(
            x.frobenius_norm(),
            x.inner_product(&x).unwrap().sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn mode_product_identity_and_row_sums() {
        let mut r = rng(3);
        let x = random_tensor(&mut r, &[3, 2]);
        let id = PairedTensor::from_matrix(&DMatrix::<f64>::identity(3, 3));
        assert_eq!(x.mode_n_product(&id, 0).unwrap(), x);

        let sums = x.mode_n_product(&mat(1, 3, &[1.0, 1.0, 1.0]), 0).unwrap();
        assert_eq!(sums.extents(), &[1, 2]);
        for c in 0..2 {
            let expect: f64 = (0..3).map(|rr| x.get(&[rr, c])).sum();
            approx::assert_relative_eq!(sums.get(&[0, c]), expect, max_relative = 1e-14);
        }
        assert!(x.mode_n_product(&mat(1, 2, &[1.0, 1.0]), 0).is_err());
        assert!(x.mode_n_product(&id, 2).is_err());
    }

    #[test]
    fn mode_product_matches_matricize_multiply() {
        let mut r = rng(4);
        let x = random_tensor(&mut r, &[2, 3, 4]);
        let a = DMatrix::from_fn(5, 3, |i, j| (i as f64 + 1.0) * 0.3 - j as f64 * 0.7);
        let y = x.mode_n_product(&PairedTensor::from_matrix(&a), 1).unwrap();
        let expect = &a * x.n_mode_matricization(1).unwrap();
        let got = y.n_mode_matricization(1).unwrap();
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn tucker_product_identity_and_commuting_modes() {
        let mut r = rng(5);
        let x = random_tensor(&mut r, &[2, 3]);
        let ids = vec![
            PairedTensor::from_matrix(&DMatrix::<f64>::identity(2, 2)),
            PairedTensor::from_matrix(&DMatrix::<f64>::identity(3, 3)),
        ];
        assert_eq!(x.tucker_product(&ids).unwrap(), x);

        let a = mat(2, 2, &[0.5, -1.0, 2.0, 0.25]);
        let b = mat(4, 3, &[1.0, 0.0, 2.0, -1.0, 3.0, 0.5, 0.0, 1.0, 1.0, 2.0, 2.0, -2.0]);
        let forward = x.tucker_product(&[a.clone(), b.clone()]).unwrap();
        let reverse = x
            .mode_n_product(&b, 1)
            .unwrap()
            .mode_n_product(&a, 0)
            .unwrap();
        for (p, q) in forward.data().iter().zip(reverse.data()) {
            approx::assert_relative_eq!(p, q, max_relative = 1e-13, epsilon = 1e-14);
        }
        assert!(x.tucker_product(&[a]).is_err());
    }

    #[test]
    fn s_transpose_examples() {
        let mut r = rng(6);
        let x = random_tensor(&mut r, &[2, 3, 4]);
        assert_eq!(x.s_transpose(&[0, 1, 2]).unwrap(), x);

        let m = random_tensor(&mut r, &[2, 3]);
        let mt = m.s_transpose(&[1, 0]).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(mt.get(&[j, i]), m.get(&[i, j]));
            }
        }

        let perm = [2, 0, 1];
        let inv = [1, 2, 0];
        let y = x.s_transpose(&perm).unwrap();
        assert_eq!(y.extents(), &[4, 2, 3]);
        assert_eq!(y.s_transpose(&inv).unwrap(), x);
        assert!(x.s_transpose(&[0, 0, 1]).is_err());
        assert!(x.s_transpose(&[0, 1]).is_err());
    }

    #[test]
    fn unfold_examples() {
        let mut r = rng(7);
        let m = random_tensor(&mut r, &[2, 3]);
        let u = m.general_unfold(&[0, 1], 1).unwrap();
        assert_eq!(u.shape(), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(u[(i, j)], m.get(&[i, j]));
            }
        }

        let x = random_tensor(&mut r, &[2, 3, 4]);
        let x1 = x.n_mode_matricization(0).unwrap();
        assert_eq!(x1.shape(), (2, 12));
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..4 {
                    assert_eq!(x1[(a, b + 3 * c)], x.get(&[a, b, c]));
                }
            }
        }
        let x3 = x.n_mode_matricization(2).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..4 {
                    assert_eq!(x3[(c, a + 2 * b)], x.get(&[a, b, c]));
                }
            }
        }
        approx::assert_relative_eq!(x1.norm(), x.frobenius_norm(), max_relative = 1e-14);
        let g = x.general_unfold(&[2, 0, 1], 2).unwrap();
        approx::assert_relative_eq!(g.norm(), x.frobenius_norm(), max_relative = 1e-14);

        assert!(x.general_unfold(&[0, 1, 2], 0).is_err());
        assert_eq!(x.general_unfold(&[0, 1, 2], 3).unwrap().ncols(), 1);
        assert!(x.general_unfold(&[0, 1, 2], 4).is_err());
    }
}
