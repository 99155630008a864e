//! Three-manifold data read off the `i`-filtration: the plus flavor
//! `H(C{i >= 0})`, its U-tower, the d-invariant, and the torsion orders of
//! the reduced part.
//!
//! The primary route works one grading at a time and is exact. The
//! truncated route computes the same numbers from the finite complex
//! `C{0 <= i <= W}` and serves as an independent check.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{BifilteredComplex, FiniteF2Complex};
use crate::error::{FloerError, Result};
use crate::f2::{kernel, BitVec, Echelon};
use crate::slices::Slicer;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub d: i64,
    /// Lengths of the cyclic summands `F[U]/U^m` of the reduced part.
    pub torsion_orders: Vec<u32>,
    pub n_invariant: u32,
}

impl TowerReport {
    fn from_ranks(d: i64, ranks: &[usize]) -> Self {
        // ranks[n] = dim U^n Q, Q = HF_red; ranks ends with a zero.
        let at = |n: usize| ranks.get(n).copied().unwrap_or(0) as i64;
        let mut torsion_orders = Vec::new();
        for m in 1..ranks.len() {
            let count = at(m - 1) - 2 * at(m) + at(m + 1);
            for _ in 0..count {
                torsion_orders.push(m as u32);
            }
        }
        torsion_orders.sort_unstable_by(|a, b| b.cmp(a));
        let n_invariant = torsion_orders.first().copied().unwrap_or(0);
        TowerReport {
            d,
            torsion_orders,
            n_invariant,
        }
    }
}

pub(crate) fn plus_region(i: i64, _j: i64) -> bool {
    i >= 0
}

/// Rank of `H(C)` over F[U,U⁻¹].
pub fn infinity_rank(c: &BifilteredComplex) -> usize {
    Slicer::new(c).infinity_rank()
}

/// Fails with `NotRankOne` unless `H(C)` has rank one.
pub fn require_rank_one(c: &BifilteredComplex) -> Result<()> {
    Slicer::new(c).infinity_class().map(|_| ())
}

/// The d-invariant: the bottom grading of the tower in `H(C{i >= 0})`.
pub fn d_invariant(c: &BifilteredComplex) -> Result<i64> {
    let s = Slicer::new(c);
    let (parity, z) = s.infinity_class()?;
    let (lo, hi) = s.grading_bounds();
    s.bottom_of_tower(&z, parity, lo, hi, &plus_region)
        .ok_or_else(|| FloerError::Other("tower bottom not found in the grading window".into()))
}

/// d, torsion orders and N of the plus flavor.
pub fn tower_report(c: &BifilteredComplex) -> Result<TowerReport> {
    let s = Slicer::new(c);
    let (parity, z) = s.infinity_class()?;
    let (lo, hi) = s.grading_bounds();
    let d = s
        .bottom_of_tower(&z, parity, lo, hi, &plus_region)
        .ok_or_else(|| FloerError::Other("tower bottom not found in the grading window".into()))?;
    let (min_m, max_m) = c.maslov_range().unwrap_or((0, 0));
    // HF_red lives in gradings [min_m - 1, max_m]; above max_m the plus
    // flavor agrees with H(C).
    let support: Vec<i64> = (min_m - 1..=max_m).collect();
    let slices: BTreeMap<i64, _> = (min_m - 1..=max_m + 2 * (max_m - min_m + 4))
        .map(|g| (g, s.homology(g, &plus_region)))
        .collect();
    // Tower plus boundaries, per grading.
    let base: BTreeMap<i64, Echelon> = support
        .iter()
        .map(|&g| {
            let h = &slices[&g];
            let mut e = h.boundaries.clone();
            if (g - parity).rem_euclid(2) == 0 {
                e.insert(z.and(&h.mask));
            }
            (g, e)
        })
        .collect();
    let mut ranks = Vec::new();
    for n in 0.. {
        let mut total = 0;
        for &g in &support {
            let Some(src) = slices.get(&(g + 2 * n)) else {
                continue;
            };
            let mut e = base[&g].clone();
            let before = e.dim();
            for cyc in &src.cycles {
                e.insert(cyc.and(&slices[&g].mask));
            }
            total += e.dim() - before;
        }
        ranks.push(total);
        if total == 0 {
            break;
        }
        if n > max_m - min_m + 4 {
            return Err(FloerError::Other("U-torsion did not terminate".into()));
        }
    }
    Ok(TowerReport::from_ranks(d, &ranks))
}

pub fn n_invariant(c: &BifilteredComplex) -> Result<u32> {
    Ok(tower_report(c)?.n_invariant)
}

/// One term `U^k x` of a chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ChainTerm {
    pub generator: String,
    pub u_power: i64,
}

/// A homogeneous chain in `C`, stored as a list of translates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub grading: i64,
    pub terms: Vec<ChainTerm>,
}

impl Chain {
    pub fn new(grading: i64, terms: impl IntoIterator<Item = (&'static str, i64)>) -> Self {
        let mut terms: Vec<ChainTerm> = terms
            .into_iter()
            .map(|(g, k)| ChainTerm {
                generator: g.to_string(),
                u_power: k,
            })
            .collect();
        terms.sort();
        Chain { grading, terms }
    }

    fn from_bits(c: &BifilteredComplex, grading: i64, v: &BitVec) -> Self {
        let terms = v
            .ones()
            .map(|x| {
                let g = &c.generators()[x];
                ChainTerm {
                    generator: g.name.clone(),
                    u_power: (g.maslov - grading) / 2,
                }
            })
            .collect();
        Chain { grading, terms }
    }

    fn to_bits(&self, c: &BifilteredComplex) -> Result<BitVec> {
        let mut v = BitVec::zeros(c.len());
        for t in &self.terms {
            let x = c
                .index_of(&t.generator)
                .ok_or_else(|| FloerError::DanglingEndpoint(t.generator.clone()))?;
            if c.generators()[x].maslov - 2 * t.u_power != self.grading {
                return Err(FloerError::Other(format!(
                    "term U^{} {} is not in grading {}",
                    t.u_power, t.generator, self.grading
                )));
            }
            v.flip(x);
        }
        Ok(v)
    }
}

/// A cycle of `C` in the bottom tower grading `d` whose class generates the
/// tower.
pub fn tower_cycle(c: &BifilteredComplex) -> Result<Chain> {
    let s = Slicer::new(c);
    let (_, z) = s.infinity_class()?;
    let d = d_invariant(c)?;
    Ok(Chain::from_bits(c, d, &z))
}

/// Whether two chains of `C` in the same grading differ by a boundary.
pub fn homologous(c: &BifilteredComplex, a: &Chain, b: &Chain) -> Result<bool> {
    if a.grading != b.grading {
        return Ok(false);
    }
    let s = Slicer::new(c);
    let mut diff = a.to_bits(c)?;
    diff.xor_assign(&b.to_bits(c)?);
    if !s.d(&diff).is_zero() {
        return Ok(false);
    }
    let all = |_: i64, _: i64| true;
    Ok(!s.homology(a.grading, &all).class_nonzero(&diff))
}

/// Whether a chain is a cycle in `C`.
pub fn is_cycle(c: &BifilteredComplex, a: &Chain) -> Result<bool> {
    Ok(Slicer::new(c).d(&a.to_bits(c)?).is_zero())
}

/// The tower report computed from the finite complex `C{0 <= i <= W}`,
/// counting a class as tower when it lies in the image of `U^⌊W/2⌋`.
pub fn truncated_tower_report(c: &BifilteredComplex, window: i64) -> Result<TowerReport> {
    let f = c.subquotient_by(|i, _| (0..=window).contains(&i), window)?;
    let (min_m, max_m) = c.maslov_range().unwrap_or((0, 0));
    let by_grading = finite_slices(&f);
    let m = window / 2;
    let tower = |g: i64| -> Echelon {
        let mut e = by_grading
            .get(&g)
            .map(|s| s.1.clone())
            .unwrap_or_else(|| Echelon::new(f.len()));
        if let Some(src) = by_grading.get(&(g + 2 * m)) {
            for z in &src.0 {
                e.insert(f.u_power_map(z, m));
            }
        }
        e
    };
    let d = (min_m - 1..=max_m + 2)
        .find(|&g| {
            by_grading
                .get(&g)
                .is_some_and(|s| tower(g).dim() > s.1.dim())
        })
        .ok_or_else(|| FloerError::Other(format!("no tower visible in window {window}")))?;
    let support: Vec<i64> = (min_m - 1..=max_m).collect();
    let mut ranks = Vec::new();
    for n in 0..=m {
        let mut total = 0;
        for &g in &support {
            let Some(src) = by_grading.get(&(g + 2 * n)) else {
                continue;
            };
            let mut e = tower(g);
            let before = e.dim();
            for z in &src.0 {
                e.insert(f.u_power_map(z, n));
            }
            total += e.dim() - before;
        }
        ranks.push(total);
        if total == 0 {
            break;
        }
    }
    Ok(TowerReport::from_ranks(d, &ranks))
}

/// Cycles and boundaries of a finite complex, per grading.
fn finite_slices(f: &FiniteF2Complex) -> BTreeMap<i64, (Vec<BitVec>, Echelon)> {
    let mut by: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (b, el) in f.basis().iter().enumerate() {
        by.entry(el.maslov).or_default().push(b);
    }
    let n = f.len();
    by.iter()
        .map(|(&g, idx)| {
            let cols: Vec<BitVec> = idx.iter().map(|&b| f.boundary_of(b).clone()).collect();
            let cycles = kernel(n, &cols)
                .into_iter()
                .map(|combo| BitVec::from_indices(n, combo.ones().map(|k| idx[k])))
                .collect();
            let above = by.get(&(g + 1)).map(|v| v.as_slice()).unwrap_or(&[]);
            let bounds = Echelon::from_vectors(
                n,
                &above
                    .iter()
                    .map(|&b| f.boundary_of(b).clone())
                    .collect::<Vec<_>>(),
            );
            (g, (cycles, bounds))
        })
        .collect()
}

/// Result of the adaptive window search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCertificate {
    pub window: i64,
    pub report: TowerReport,
}

/// Default starting window: generators + 2·genus + 2.
pub fn default_window(c: &BifilteredComplex) -> i64 {
    c.len() as i64 + 2 * c.max_abs_alexander() + 2
}

/// Doubles the window from `start` until the truncated reports at `W` and
/// `2W` agree.
pub fn certify_window(c: &BifilteredComplex, start: Option<i64>) -> Result<WindowCertificate> {
    require_rank_one(c)?;
    let mut w = start.unwrap_or_else(|| default_window(c)).max(2);
    let mut current = truncated_tower_report(c, w);
    for _ in 0..8 {
        let next = truncated_tower_report(c, 2 * w);
        if let (Ok(a), Ok(b)) = (&current, &next) {
            if a == b {
                return Ok(WindowCertificate {
                    window: w,
                    report: a.clone(),
                });
            }
        }
        w *= 2;
        current = next;
    }
    Err(FloerError::Other("window did not stabilize".into()))
}
