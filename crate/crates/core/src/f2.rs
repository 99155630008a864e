//! Exact linear algebra over the two-element field.
//!
//! Vectors are packed bitsets. [`Echelon`] keeps a row-echelon basis keyed by
//! the lowest set bit of each row, optionally carrying a "tag" vector that
//! records how each row was built from the inserted vectors; tags are what
//! make kernels and solutions cheap to extract.

use crate::error::{FloerError, Result};

const WORD: usize = 64;

/// Fixed-length vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVec({bits})")
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, mask: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, mask.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&mask.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            })
        })
    }

    /// Dot product over F₂.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    vec: BitVec,
    tag: BitVec,
}

/// Row-echelon basis of a subspace of F₂ⁿ.
///
/// Each row's pivot is its lowest set bit and pivots are distinct; rows are
/// kept sorted by pivot so a single ascending pass reduces any vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    tag_len: usize,
    rows: Vec<Row>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self::with_tags(len, 0)
    }

    pub fn with_tags(len: usize, tag_len: usize) -> Self {
        Echelon {
            len,
            tag_len,
            rows: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(len: usize, vectors: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut e = Self::new(len);
        for v in vectors {
            e.insert(v.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduces `v` (with its tag) against the basis in place.
    fn reduce_tagged(&self, v: &mut BitVec, tag: &mut BitVec) {
        for row in &self.rows {
            if v.get(row.pivot) {
                v.xor_assign(&row.vec);
                if self.tag_len > 0 {
                    tag.xor_assign(&row.tag);
                }
            }
        }
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for row in &self.rows {
            if v.get(row.pivot) {
                v.xor_assign(&row.vec);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts a vector; returns false if it was already in the span.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let tag = BitVec::zeros(self.tag_len);
        self.insert_tagged(v, tag).is_none()
    }

    /// Inserts `v` carrying `tag`. If `v` is dependent, returns the reduced
    /// tag, i.e. a combination of tags whose vectors sum to zero.
    pub fn insert_tagged(&mut self, mut v: BitVec, mut tag: BitVec) -> Option<BitVec> {
        debug_assert_eq!(v.len(), self.len);
        self.reduce_tagged(&mut v, &mut tag);
        match v.first_one() {
            None => Some(tag),
            Some(pivot) => {
                let at = self.rows.partition_point(|r| r.pivot < pivot);
                self.rows.insert(at, Row { pivot, vec: v, tag });
                None
            }
        }
    }

    /// Expresses `v` as a combination of inserted vectors, returned as the
    /// combined tag, or `None` when `v` is outside the span.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_len);
        self.reduce_tagged(&mut v, &mut tag);
        v.is_zero().then_some(tag)
    }
}

/// Kernel of the linear map whose columns are `columns`, as combinations of
/// column indices.
pub fn kernel(target_len: usize, columns: &[BitVec]) -> Vec<BitVec> {
    let n = columns.len();
    let mut e = Echelon::with_tags(target_len, n);
    columns
        .iter()
        .enumerate()
        .filter_map(|(k, c)| e.insert_tagged(c.clone(), BitVec::unit(n, k)))
        .collect()
}

/// Dense matrix over F₂, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(FloerError::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn rank(&self) -> usize {
        Echelon::from_vectors(self.cols, &self.data).dim()
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(FloerError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones() {
                    acc.xor_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        Ok(F2Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(FloerError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_indices(
            self.rows,
            (0..self.rows).filter(|&r| self.data[r].dot(x)),
        ))
    }

    /// One solution of `self · x = b`, or `None` when the system is
    /// inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.rows {
            return Err(FloerError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut e = Echelon::with_tags(self.rows, self.cols);
        for c in 0..self.cols {
            e.insert_tagged(self.column(c), BitVec::unit(self.cols, c));
        }
        Ok(e.express(b))
    }

    /// Basis of the null space `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let cols: Vec<BitVec> = (0..self.cols).map(|c| self.column(c)).collect();
        kernel(self.rows, &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(F2Matrix::identity(3).rank(), 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(F2Matrix::zeros(4, 5).rank(), 0);
    }

    #[test]
    fn solve_finds_solution_or_reports_inconsistency() {
        // [1 1 0; 0 1 1]
        let m = F2Matrix::from_rows(
            3,
            vec![
                BitVec::from_indices(3, [0, 1]),
                BitVec::from_indices(3, [1, 2]),
            ],
        )
        .unwrap();
        let b = BitVec::from_indices(2, [0]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);

        // [1 1; 1 1] x = (1, 0) has no solution
        let m = F2Matrix::from_rows(
            2,
            vec![
                BitVec::from_indices(2, [0, 1]),
                BitVec::from_indices(2, [0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(m.solve(&BitVec::from_indices(2, [0])).unwrap(), None);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let m = F2Matrix::identity(3);
        assert!(matches!(
            m.solve(&BitVec::zeros(2)),
            Err(FloerError::DimensionMismatch(_))
        ));
        assert!(matches!(
            m.mul(&F2Matrix::zeros(2, 2)),
            Err(FloerError::DimensionMismatch(_))
        ));
        assert!(F2Matrix::from_rows(3, vec![BitVec::zeros(2)]).is_err());
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = F2Matrix::from_rows(
            4,
            vec![
                BitVec::from_indices(4, [0, 1, 2]),
                BitVec::from_indices(4, [1, 3]),
            ],
        )
        .unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4 - m.rank());
        for v in ns {
            assert!(m.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn echelon_span_membership() {
        let mut e = Echelon::new(5);
        assert!(e.insert(BitVec::from_indices(5, [1, 3])));
        assert!(e.insert(BitVec::from_indices(5, [0, 1])));
        assert!(!e.insert(BitVec::from_indices(5, [0, 3])));
        assert!(e.contains(&BitVec::from_indices(5, [0, 3])));
        assert!(!e.contains(&BitVec::from_indices(5, [4])));
        assert_eq!(e.dim(), 2);
    }

    #[test]
    fn ones_iterates_set_bits_across_words() {
        let v = BitVec::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
        assert_eq!(v.count_ones(), 4);
    }
}
