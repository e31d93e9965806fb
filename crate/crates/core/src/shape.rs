//! Extents and the `ivec` index map.
//!
//! Multi-indices passed to [`ivec`] and [`Shape::ivec`] are 1-based like the
//! formula they implement. Every other index-taking method in this crate is
//! 0-based: `j0 = j - 1` for each mode, and `ivec(j) - 1` is the flat offset.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape(pub(crate) Vec<usize>);

impl Shape {
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if let Some(mode) = extents.iter().position(|&e| e == 0) {
            return Err(Error::invalid(
                "Shape::new",
                format!("extent at mode {mode} is zero"),
            ));
        }
        Ok(Shape(extents))
    }

    /// Shape with no modes; holds a single element.
    pub fn scalar() -> Self {
        Shape(Vec::new())
    }

    pub fn extents(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Number of elements, `|J|`. One for the zero-order shape.
    pub fn len(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Column-major strides: the first index varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = Vec::with_capacity(self.0.len());
        let mut acc = 1;
        for &e in &self.0 {
            strides.push(acc);
            acc *= e;
        }
        strides
    }

    /// 1-based linear position of a 1-based multi-index.
    pub fn ivec(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.0.len() {
            return Err(Error::shape(
                "ivec",
                format!(
                    "multi-index has {} entries, shape has {} modes",
                    index.len(),
                    self.0.len()
                ),
            ));
        }
        let mut pos = 1;
        let mut stride = 1;
        for (mode, (&j, &extent)) in index.iter().zip(&self.0).enumerate() {
            if j == 0 || j > extent {
                return Err(Error::IndexOutOfBounds {
                    mode,
                    index: j,
                    extent,
                });
            }
            pos += (j - 1) * stride;
            stride *= extent;
        }
        Ok(pos)
    }

    /// 0-based flat offset of a 0-based multi-index. Indices are not checked
    /// beyond a debug assertion.
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.0.len());
        let mut pos = 0;
        let mut stride = 1;
        for (&j, &extent) in index.iter().zip(&self.0) {
            debug_assert!(j < extent);
            pos += j * stride;
            stride *= extent;
        }
        pos
    }

    /// Inverse of [`Shape::offset`].
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        self.0
            .iter()
            .map(|&e| {
                let j = offset % e;
                offset /= e;
                j
            })
            .collect()
    }

    /// All 0-based multi-indices in storage order.
    pub fn indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(self.0.clone())
    }
}

/// 1-based `ivec(j, J) = j_1 + sum_{k>=2} (j_k - 1) prod_{l<k} J_l`.
pub fn ivec(index: &[usize], shape: &Shape) -> Result<usize> {
    shape.ivec(index)
}

/// Iterates 0-based multi-indices with the first index varying fastest.
#[derive(Debug, Clone)]
pub struct MultiIndexIter {
    extents: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl MultiIndexIter {
    fn new(extents: Vec<usize>) -> Self {
        let done = extents.contains(&0);
        MultiIndexIter {
            current: vec![0; extents.len()],
            extents,
            done,
        }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut mode = 0;
        loop {
            if mode == self.extents.len() {
                self.done = true;
                break;
            }
            self.current[mode] += 1;
            if self.current[mode] < self.extents[mode] {
                break;
            }
            self.current[mode] = 0;
            mode += 1;
        }
        Some(out)
    }
}

/// Flat offsets, in `ivec` order over `extents`, of the sub-index selected
/// by `strides`. Used to read a sub-block of interleaved storage without
/// materialising multi-indices.
pub(crate) fn offset_table(extents: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut table = vec![0usize];
    for (&extent, &stride) in extents.iter().zip(strides) {
        let mut next = Vec::with_capacity(table.len() * extent);
        for j in 0..extent {
            next.extend(table.iter().map(|&o| o + j * stride));
        }
        table = next;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(e: &[usize]) -> Shape {
        Shape::new(e.to_vec()).unwrap()
    }

    #[test]
    fn ivec_examples() {
        assert_eq!(ivec(&[1, 1, 1], &shape(&[4, 2, 5])).unwrap(), 1);
        assert_eq!(ivec(&[2, 1], &shape(&[3, 2])).unwrap(), 2);
        assert_eq!(ivec(&[1, 2], &shape(&[3, 2])).unwrap(), 4);
        assert_eq!(ivec(&[3, 2, 2], &shape(&[3, 2, 2])).unwrap(), 12);
        assert_eq!(ivec(&[], &Shape::scalar()).unwrap(), 1);
    }

    #[test]
    fn ivec_bounds_error_names_mode() {
        let err = ivec(&[1, 3], &shape(&[3, 2])).unwrap_err();
        assert_eq!(
            err,
            Error::IndexOutOfBounds {
                mode: 1,
                index: 3,
                extent: 2
            }
        );
        assert!(matches!(
            ivec(&[0, 1], &shape(&[3, 2])),
            Err(Error::IndexOutOfBounds { mode: 0, .. })
        ));
        assert!(ivec(&[1], &shape(&[3, 2])).is_err());
    }

    #[test]
    fn zero_extent_rejected() {
        assert!(Shape::new(vec![2, 0]).is_err());
    }

    #[test]
    fn ivec_is_a_bijection() {
        let s = shape(&[3, 1, 4, 2]);
        let mut seen = vec![false; s.len()];
        for idx in s.indices() {
            let one_based: Vec<usize> = idx.iter().map(|j| j + 1).collect();
            let p = s.ivec(&one_based).unwrap();
            assert_eq!(p - 1, s.offset(&idx));
            assert_eq!(s.unravel(p - 1), idx);
            assert!(!seen[p - 1]);
            seen[p - 1] = true;
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn offset_table_matches_strides() {
        let s = shape(&[2, 3, 2]);
        let strides = s.strides();
        let table = offset_table(s.extents(), &strides);
        assert_eq!(table, (0..12).collect::<Vec<_>>());
        // every second mode of a (2,5,3,7) layout
        let t = shape(&[2, 5, 3, 7]);
        let st = t.strides();
        let rows = offset_table(&[2, 3], &[st[0], st[2]]);
        assert_eq!(rows, vec![0, 1, 10, 11, 20, 21]);
    }
}
