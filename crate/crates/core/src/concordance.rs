//! Concordance invariants τ, ν, ν′, ε, Υ and V₀.
//!
//! Each invariant compares the image of a subquotient's homology with the
//! U-tower, one grading at a time. The tower in grading `g` is the image of
//! the generator of `H(C)`, which is a single cycle independent of `g` once
//! chains are indexed by generator.

use num_rational::Ratio;
use serde::Serialize;

use crate::complex::BifilteredComplex;
use crate::error::{FloerError, Result};
use crate::f2::{BitVec, Echelon};
use crate::flavors::{self, plus_region};
use crate::slices::{Region, Slicer};

/// The invariants of one complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub tau: i64,
    pub nu: i64,
    pub nu_prime: i64,
    pub epsilon: i8,
    pub v0: i64,
    pub d: i64,
    pub n_invariant: u32,
    #[serde(serialize_with = "crate::ratio_pairs")]
    pub upsilon: Vec<(Ratio<i64>, Ratio<i64>)>,
}

struct Context<'a> {
    slicer: Slicer<'a>,
    z: BitVec,
    parity: i64,
    /// Gradings of C{i = 0}.
    hat_range: (i64, i64),
    genus: i64,
}

impl<'a> Context<'a> {
    fn new(c: &'a BifilteredComplex) -> Result<Self> {
        let slicer = Slicer::new(c);
        let (parity, z) = slicer.infinity_class()?;
        let hat_range = c.maslov_range().unwrap_or((0, 0));
        Ok(Context {
            slicer,
            z,
            parity,
            hat_range,
            genus: c.max_abs_alexander(),
        })
    }

    fn hat_gradings(&self) -> impl Iterator<Item = i64> {
        let ((lo, hi), parity) = (self.hat_range, self.parity);
        (lo..=hi).filter(move |g| (g - parity).rem_euclid(2) == 0)
    }

    fn scan(&self) -> std::ops::RangeInclusive<i64> {
        -self.genus - 1..=self.genus + 1
    }

    /// Whether the image of `H(source)` in `H(C{i >= 0})`, under the map
    /// induced by the identity on translates, meets the tower.
    fn image_meets_tower(&self, source: Region) -> bool {
        self.hat_gradings().any(|g| {
            let src = self.slicer.homology(g, source);
            let tgt = self.slicer.homology(g, &plus_region);
            tgt.span_meets(&src.cycles, &self.z)
        })
    }

    fn tau(&self) -> Result<i64> {
        self.scan()
            .find(|&s| self.image_meets_tower(&|i, j| i == 0 && j <= s))
            .ok_or_else(|| FloerError::Other("tau not attained in the scan range".into()))
    }

    fn nu(&self) -> Result<i64> {
        self.scan()
            .find(|&s| self.image_meets_tower(&|i, j| i.max(j - s) == 0))
            .ok_or_else(|| FloerError::Other("nu not attained in the scan range".into()))
    }

    /// Whether every hat class hitting a nonzero tower element survives
    /// `v′_s`.
    fn nu_prime_holds(&self, s: i64) -> bool {
        let column = |i: i64, _: i64| i == 0;
        let hook = move |i: i64, j: i64| i.min(j - s) == 0;
        self.hat_gradings().all(|g| {
            let hat = self.slicer.homology(g, &column);
            let target = self.slicer.homology(g, &hook);
            // Combinations of hat cycles that die in H(target).
            let m = hat.cycles.len();
            let mut e = Echelon::with_tags(self.slicer.len(), m);
            for b in target.boundaries.basis() {
                e.insert_tagged(b.clone(), BitVec::zeros(m));
            }
            let mut killed = Vec::new();
            for (k, z) in hat.cycles.iter().enumerate() {
                if let Some(combo) = e.insert_tagged(z.and(&target.mask), BitVec::unit(m, k)) {
                    let mut v = BitVec::zeros(self.slicer.len());
                    for t in combo.ones() {
                        v.xor_assign(&hat.cycles[t]);
                    }
                    killed.push(v);
                }
            }
            let plus = self.slicer.homology(g, &plus_region);
            !plus.span_meets(&killed, &self.z)
        })
    }

    fn nu_prime(&self) -> Result<i64> {
        self.scan()
            .rev()
            .find(|&s| self.nu_prime_holds(s))
            .ok_or_else(|| FloerError::Other("nu' not attained in the scan range".into()))
    }

    fn d(&self) -> Result<i64> {
        let (lo, hi) = self.slicer.grading_bounds();
        self.slicer
            .bottom_of_tower(&self.z, self.parity, lo, hi, &plus_region)
            .ok_or_else(|| FloerError::Other("tower bottom not found".into()))
    }

    fn v0(&self) -> Result<i64> {
        let d = self.d()?;
        let (lo, hi) = self.slicer.grading_bounds();
        let large = |i: i64, j: i64| i.max(j) >= 0;
        let bottom = self
            .slicer
            .bottom_of_tower(&self.z, self.parity, lo, hi, &large)
            .ok_or_else(|| FloerError::Other("tower bottom of A0 not found".into()))?;
        Ok((d - bottom) / 2)
    }

    /// Υ at `t`, with `d` the tower grading.
    fn upsilon(&self, t: Ratio<i64>, d: i64) -> Result<Ratio<i64>> {
        if t < Ratio::from_integer(0) || t > Ratio::from_integer(2) {
            return Err(FloerError::Other(format!("t = {t} outside [0, 2]")));
        }
        let (p, q) = (*t.numer(), *t.denom());
        let n = self.slicer.len();
        let present = self.slicer.parity_mask(d);
        // Level of the grading-d translate, scaled by 2q.
        let level = |x: usize| {
            let (i, j) = self.slicer.position(x, d);
            (2 * q - p) * i + p * j
        };
        let mut levels: Vec<i64> = present.ones().map(level).collect();
        levels.sort_unstable();
        levels.dedup();
        let all = |_: i64, _: i64| true;
        let whole = self.slicer.homology(d, &all);
        let below = self.slicer.parity_mask(d - 1);
        for lambda in levels {
            let sub = BitVec::from_indices(n, present.ones().filter(|&x| level(x) <= lambda));
            let cycles = self.slicer.cycles(&sub, &below);
            if cycles.iter().any(|z| whole.class_nonzero(z)) {
                return Ok(Ratio::new(-lambda, q));
            }
        }
        Err(FloerError::Other("upsilon level not attained".into()))
    }
}

pub fn tau(c: &BifilteredComplex) -> Result<i64> {
    Context::new(c)?.tau()
}

pub fn nu(c: &BifilteredComplex) -> Result<i64> {
    Context::new(c)?.nu()
}

pub fn nu_prime(c: &BifilteredComplex) -> Result<i64> {
    Context::new(c)?.nu_prime()
}

/// ε from the trichotomy; any other combination is an error.
pub fn epsilon_from(tau: i64, nu: i64, nu_prime: i64) -> Result<i8> {
    match (nu - tau, nu_prime - tau) {
        (1, 0) => Ok(-1),
        (0, -1) => Ok(1),
        (0, 0) => Ok(0),
        _ => Err(FloerError::Trichotomy { tau, nu, nu_prime }),
    }
}

pub fn epsilon(c: &BifilteredComplex) -> Result<i8> {
    let ctx = Context::new(c)?;
    epsilon_from(ctx.tau()?, ctx.nu()?, ctx.nu_prime()?)
}

/// Υ(t) for rational `t` in `[0, 2]`.
pub fn upsilon(c: &BifilteredComplex, t: Ratio<i64>) -> Result<Ratio<i64>> {
    let ctx = Context::new(c)?;
    let d = ctx.d()?;
    ctx.upsilon(t, d)
}

pub fn v0(c: &BifilteredComplex) -> Result<i64> {
    Context::new(c)?.v0()
}

/// All invariants, with Υ sampled at `t = k/q` for `k = 0..=2q`.
pub fn invariants(c: &BifilteredComplex, upsilon_denominator: i64) -> Result<InvariantReport> {
    if upsilon_denominator < 1 {
        return Err(FloerError::Other(
            "upsilon denominator must be positive".into(),
        ));
    }
    let ctx = Context::new(c)?;
    let (tau, nu, nu_prime) = (ctx.tau()?, ctx.nu()?, ctx.nu_prime()?);
    let epsilon = epsilon_from(tau, nu, nu_prime)?;
    let report = flavors::tower_report(c)?;
    let upsilon = (0..=2 * upsilon_denominator)
        .map(|k| {
            let t = Ratio::new(k, upsilon_denominator);
            ctx.upsilon(t, report.d).map(|u| (t, u))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantReport {
        tau,
        nu,
        nu_prime,
        epsilon,
        v0: ctx.v0()?,
        d: report.d,
        n_invariant: report.n_invariant,
        upsilon,
    })
}
