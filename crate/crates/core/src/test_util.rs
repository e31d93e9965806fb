use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{DenseTensor, PairedTensor, Shape};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tensor(rng: &mut impl Rng, extents: &[usize]) -> DenseTensor {
    let shape = Shape::new(extents.to_vec()).unwrap();
    let data = (0..shape.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    DenseTensor::new(shape, data).unwrap()
}

pub fn random_paired(rng: &mut impl Rng, pairs: &[(usize, usize)]) -> PairedTensor<f64> {
    let len = pairs.iter().map(|&(j, i)| j * i).product();
    let data = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    PairedTensor::new(pairs.to_vec(), data).unwrap()
}
