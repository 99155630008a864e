//! Grading slices of filtered subquotients.
//!
//! In Maslov grading `g`, a generator `x` contributes at most one translate,
//! `U^k x` with `k = (maslov(x) - g) / 2`. So every grading slice of every
//! region is finite and can be indexed by generator. Chains in a slice are
//! bit vectors over generator indices; the differential between slices is
//! the fixed adjacency of the complex, with positions recomputed per grading.

use crate::complex::BifilteredComplex;
use crate::error::{FloerError, Result};
use crate::f2::{kernel, BitVec, Echelon};

/// A region of the (i, j) plane given by a membership predicate.
pub(crate) type Region<'r> = &'r dyn Fn(i64, i64) -> bool;

pub(crate) struct Slicer<'a> {
    c: &'a BifilteredComplex,
}

/// Homology of one grading slice of a subquotient.
pub(crate) struct SliceHomology {
    pub mask: BitVec,
    pub cycles: Vec<BitVec>,
    pub boundaries: Echelon,
}

impl SliceHomology {
    pub fn dim(&self) -> usize {
        self.cycles.len() - self.boundaries.dim()
    }

    /// Whether the class of `v` (restricted to the slice) is nonzero.
    pub fn class_nonzero(&self, v: &BitVec) -> bool {
        !self.boundaries.contains(&v.and(&self.mask))
    }

    /// Whether the span of `images` meets the line spanned by `target`
    /// nontrivially in homology.
    pub fn span_meets(&self, images: &[BitVec], target: &BitVec) -> bool {
        let target = target.and(&self.mask);
        if self.boundaries.contains(&target) {
            return false;
        }
        let mut e = self.boundaries.clone();
        for v in images {
            e.insert(v.and(&self.mask));
        }
        e.contains(&target)
    }
}

impl<'a> Slicer<'a> {
    pub fn new(c: &'a BifilteredComplex) -> Self {
        Slicer { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// Generators present in grading `g`, i.e. of matching parity.
    pub fn parity_mask(&self, g: i64) -> BitVec {
        BitVec::from_indices(
            self.len(),
            self.c
                .generators()
                .iter()
                .enumerate()
                .filter(|(_, x)| (x.maslov - g).rem_euclid(2) == 0)
                .map(|(k, _)| k),
        )
    }

    /// Position of the grading-`g` translate of generator `x`.
    pub fn position(&self, x: usize, g: i64) -> (i64, i64) {
        let gen = &self.c.generators()[x];
        let k = (gen.maslov - g).div_euclid(2);
        (-k, gen.alexander - k)
    }

    pub fn mask(&self, g: i64, region: Region) -> BitVec {
        let mut m = BitVec::zeros(self.len());
        for (x, gen) in self.c.generators().iter().enumerate() {
            if (gen.maslov - g).rem_euclid(2) != 0 {
                continue;
            }
            let (i, j) = self.position(x, g);
            if region(i, j) {
                m.set(x, true);
            }
        }
        m
    }

    /// Full boundary of a chain.
    pub fn d(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for x in v.ones() {
            out.xor_assign(self.c.boundary_row(x));
        }
        out
    }

    /// Cycles of the subquotient supported on `src`, whose differential is
    /// read off in `tgt` (the next grading down).
    pub fn cycles(&self, src: &BitVec, tgt: &BitVec) -> Vec<BitVec> {
        let idx: Vec<usize> = src.ones().collect();
        let cols: Vec<BitVec> = idx
            .iter()
            .map(|&x| self.c.boundary_row(x).and(tgt))
            .collect();
        kernel(self.len(), &cols)
            .into_iter()
            .map(|combo| BitVec::from_indices(self.len(), combo.ones().map(|k| idx[k])))
            .collect()
    }

    /// Span of boundaries from `src` (one grading up), restricted to `tgt`.
    pub fn boundaries(&self, src: &BitVec, tgt: &BitVec) -> Echelon {
        Echelon::from_vectors(
            self.len(),
            &src.ones()
                .map(|x| self.c.boundary_row(x).and(tgt))
                .collect::<Vec<_>>(),
        )
    }

    pub fn homology(&self, g: i64, region: Region) -> SliceHomology {
        let mask = self.mask(g, region);
        let below = self.mask(g - 1, region);
        let above = self.mask(g + 1, region);
        SliceHomology {
            cycles: self.cycles(&mask, &below),
            boundaries: self.boundaries(&above, &mask),
            mask,
        }
    }

    /// Rank of H(C) over F[U,U⁻¹], summing both grading parities.
    pub fn infinity_rank(&self) -> usize {
        let all = |_: i64, _: i64| true;
        (0..2).map(|p| self.homology(p, &all).dim()).sum()
    }

    /// A cycle generating H(C) when it has rank one, with its parity.
    pub fn infinity_class(&self) -> Result<(i64, BitVec)> {
        let all = |_: i64, _: i64| true;
        let mut found = None;
        let mut rank = 0;
        for p in 0..2 {
            let h = self.homology(p, &all);
            rank += h.dim();
            if h.dim() > 0 {
                let z = h
                    .cycles
                    .iter()
                    .find(|z| !h.boundaries.contains(z))
                    .cloned()
                    .expect("nonzero class");
                found = Some((p, z));
            }
        }
        match (rank, found) {
            (1, Some(f)) => Ok(f),
            _ => Err(FloerError::NotRankOne(rank)),
        }
    }

    /// Lowest grading of parity `parity` in `[lo, hi]` where the infinity
    /// class `z` survives in the region's homology.
    pub fn bottom_of_tower(
        &self,
        z: &BitVec,
        parity: i64,
        lo: i64,
        hi: i64,
        region: Region,
    ) -> Option<i64> {
        let start = lo - (lo - parity).rem_euclid(2);
        (start..=hi)
            .step_by(2)
            .find(|&g| self.homology(g, region).class_nonzero(z))
    }

    /// Grading window guaranteed to contain every interesting slice.
    pub fn grading_bounds(&self) -> (i64, i64) {
        let (lo, hi) = self.c.maslov_range().unwrap_or((0, 0));
        let g = self.c.max_abs_alexander();
        (lo - 2 * g - 4, hi + 2 * g + 4)
    }
}
