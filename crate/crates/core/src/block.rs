//! Block tensors built by concatenating same-shape paired tensors along
//! column (row block) or row (column block) extents.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::paired::PairedTensor;
use crate::scalar::Scalar;
use crate::shape::Shape;

/// Blocks for the generalized mode block construction. Block `b` (0-based)
/// sits at block multi-index `unravel(b, factors)`, so the first factor
/// groups consecutive runs of blocks, the second groups those runs, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec<T> {
    blocks: Vec<PairedTensor<T>>,
    factors: Vec<usize>,
}

impl<T: Scalar> BlockSpec<T> {
    pub fn new(blocks: Vec<PairedTensor<T>>, factors: Vec<usize>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::invalid("BlockSpec::new", "no blocks"));
        };
        if let Some(b) = blocks.iter().position(|b| b.pairs() != first.pairs()) {
            return Err(Error::shape(
                "BlockSpec::new",
                format!(
                    "block {b} has pairs {:?}, block 0 has {:?}",
                    blocks[b].pairs(),
                    first.pairs()
                ),
            ));
        }
        if factors.len() != first.order() {
            return Err(Error::shape(
                "BlockSpec::new",
                format!("{} factors for {} pairs", factors.len(), first.order()),
            ));
        }
        if factors.contains(&0) || factors.iter().product::<usize>() != blocks.len() {
            return Err(Error::invalid(
                "BlockSpec::new",
                format!(
                    "factors {factors:?} do not multiply to the block count {}",
                    blocks.len()
                ),
            ));
        }
        Ok(BlockSpec { blocks, factors })
    }

    pub fn blocks(&self) -> &[PairedTensor<T>] {
        &self.blocks
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }
}

/// Column permutation: column `c` of the block tensor's unfolding is column
/// `source[c]` of the horizontally concatenated block unfoldings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    source: Vec<usize>,
}

impl Permutation {
    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn is_identity(&self) -> bool {
        self.source.iter().enumerate().all(|(c, &s)| c == s)
    }

    /// Matrix `P` with `[phi(X_1) ... phi(X_K)] * P = phi(block tensor)`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.source.len();
        let mut p = DMatrix::zeros(n, n);
        for (c, &s) in self.source.iter().enumerate() {
            p[(s, c)] = 1.0;
        }
        p
    }
}

fn interleaved(pairs: &[(usize, usize)]) -> Shape {
    Shape::new(pairs.iter().flat_map(|&(j, i)| [j, i]).collect())
        .expect("paired extents are positive")
}

/// Places every block by offsetting its column indices by
/// `block_index[n] * I_n` on each mode.
fn place_columns<T: Scalar>(
    blocks: &[PairedTensor<T>],
    block_shape: &[usize],
) -> PairedTensor<T> {
    let template = blocks[0].pairs();
    let pairs: Vec<(usize, usize)> = template
        .iter()
        .zip(block_shape)
        .map(|(&(j, i), &k)| (j, i * k))
        .collect();
    let src_shape = interleaved(template);
    let dst_shape = interleaved(&pairs);
    let grid = Shape::new(block_shape.to_vec()).expect("block factors are positive");
    let mut data = vec![T::zero(); dst_shape.len()];
    for (b, block) in blocks.iter().enumerate() {
        let k = grid.unravel(b);
        for (src, mut idx) in src_shape.indices().enumerate() {
            for (n, &kn) in k.iter().enumerate() {
                idx[2 * n + 1] += kn * template[n].1;
            }
            data[dst_shape.offset(&idx)] = block.data()[src];
        }
    }
    PairedTensor::new(pairs, data).expect("layout computed from pairs")
}

fn check_same_pairs<T: Scalar>(a: &PairedTensor<T>, b: &PairedTensor<T>, n: usize, op: &'static str) -> Result<()> {
    if a.pairs() != b.pairs() {
        return Err(Error::shape(
            op,
            format!("{:?} vs {:?}", a.pairs(), b.pairs()),
        ));
    }
    if n >= a.order() {
        return Err(Error::invalid(
            op,
            format!("mode {n} out of range for {} pairs", a.order()),
        ));
    }
    Ok(())
}

/// `||A B||_n`: `B` follows `A` along the column extent of mode `n` (0-based).
pub fn n_mode_row_block<T: Scalar>(
    a: &PairedTensor<T>,
    b: &PairedTensor<T>,
    n: usize,
) -> Result<PairedTensor<T>> {
    check_same_pairs(a, b, n, "n_mode_row_block")?;
    let mut grid = vec![1; a.order()];
    grid[n] = 2;
    Ok(place_columns(&[a.clone(), b.clone()], &grid))
}

/// Column block: `B` follows `A` along the row extent of mode `n`.
pub fn n_mode_col_block<T: Scalar>(
    a: &PairedTensor<T>,
    b: &PairedTensor<T>,
    n: usize,
) -> Result<PairedTensor<T>> {
    check_same_pairs(a, b, n, "n_mode_col_block")?;
    Ok(n_mode_row_block(&a.u_transpose(), &b.u_transpose(), n)?.u_transpose())
}

/// Generalized mode row block; column extents become `I_n * K_n`.
pub fn mode_row_block<T: Scalar>(spec: &BlockSpec<T>) -> PairedTensor<T> {
    place_columns(&spec.blocks, &spec.factors)
}

/// Generalized mode column block; row extents become `J_n * K_n`.
pub fn mode_col_block<T: Scalar>(spec: &BlockSpec<T>) -> PairedTensor<T> {
    let transposed: Vec<PairedTensor<T>> = spec.blocks.iter().map(|b| b.u_transpose()).collect();
    place_columns(&transposed, &spec.factors).u_transpose()
}

/// Column permutation relating an n-mode row block of `block_count` blocks
/// with the given `pairs` to the concatenation of the block unfoldings.
pub fn block_permutation(n: usize, pairs: &[(usize, usize)], block_count: usize) -> Result<Permutation> {
    if n >= pairs.len() {
        return Err(Error::invalid(
            "block_permutation",
            format!("mode {n} out of range for {} pairs", pairs.len()),
        ));
    }
    if block_count == 0 {
        return Err(Error::invalid("block_permutation", "block count is zero"));
    }
    let cols: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let block_cols = Shape::new(cols.clone())?;
    let mut wide = cols.clone();
    wide[n] *= block_count;
    let wide = Shape::new(wide)?;
    let per_block = block_cols.len();
    let source = (0..wide.len())
        .map(|c| {
            let mut l = wide.unravel(c);
            let k = l[n] / cols[n];
            l[n] %= cols[n];
            k * per_block + block_cols.offset(&l)
        })
        .collect();
    Ok(Permutation { source })
}
