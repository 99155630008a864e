//! The filtered mapping cone.
//!
//! * [`FlipMap`] and its checks: a grading-preserving chain map `φ` taking
//!   `C{j <= s}` to `C{i <= s}` quasi-isomorphically.
//! * [`cone_complex`] / [`core_complex`]: the cone `⊕A_s -> ⊕B_s` with the
//!   `𝓘, 𝓙` filtrations, flattened to a bifiltered complex and reduced. The
//!   result is the knot complex of the core of +1-surgery.
//! * [`d_of_one_over_n`]: the single-filtration cone for `1/n`-surgery.
//!
//! Flattening pins each piece generator at `𝓘 = 0`. In `A_s` the translate
//! `U^k x` has `𝓘 = -k + max(0, A(x) - s)`, so the pinned power is
//! `k0 = max(0, A(x) - s)` and its `𝓙` level (= new Alexander grading) is
//! `s` when `A(x) >= s` and `s - 1` otherwise. In `B_s` the pinned power is
//! 0 and the Alexander grading is `s - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{BifilteredComplex, DiffEntry, Generator};
use crate::error::{FloerError, Result};
use crate::f2::{BitVec, Echelon, F2Matrix};
use crate::flavors::{self, plus_region};
use crate::reduction::reduce;
use crate::slices::{Region, Slicer};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlipEntry {
    pub from: String,
    pub to: String,
    pub u_power: i64,
}

impl FlipEntry {
    pub fn new(from: impl Into<String>, to: impl Into<String>, u_power: i64) -> Self {
        FlipEntry {
            from: from.into(),
            to: to.into(),
            u_power,
        }
    }
}

impl fmt::Display for FlipEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> U^{} {}", self.from, self.u_power, self.to)
    }
}

/// `φ(x) = Σ U^k y`, one entry per term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipMap {
    pub entries: Vec<FlipEntry>,
}

impl FlipMap {
    pub fn identity(c: &BifilteredComplex) -> Self {
        FlipMap {
            entries: c
                .generators()
                .iter()
                .map(|g| FlipEntry::new(g.name.clone(), g.name.clone(), 0))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FloerError::Flip(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("flip map serializes")
    }

    /// Rows of the map over generator indices, after checking names.
    fn rows(&self, c: &BifilteredComplex) -> std::result::Result<Vec<BitVec>, FlipViolation> {
        let n = c.len();
        let mut rows = vec![BitVec::zeros(n); n];
        for e in &self.entries {
            let x = c
                .index_of(&e.from)
                .ok_or_else(|| FlipViolation::UnknownGenerator(e.from.clone()))?;
            let y = c
                .index_of(&e.to)
                .ok_or_else(|| FlipViolation::UnknownGenerator(e.to.clone()))?;
            rows[x].flip(y);
        }
        Ok(rows)
    }
}

/// The first axiom a candidate flip map fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipViolation {
    UnknownGenerator(String),
    Grading(FlipEntry),
    Filtration(FlipEntry),
    ChainMap { generator: String },
    QuasiIsomorphism { s: i64, grading: i64 },
}

impl fmt::Display for FlipViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipViolation::UnknownGenerator(n) => write!(f, "unknown generator `{n}`"),
            FlipViolation::Grading(e) => {
                write!(f, "entry {e} does not preserve the Maslov grading")
            }
            FlipViolation::Filtration(e) => {
                write!(f, "entry {e} does not map C{{j <= s}} into C{{i <= s}}")
            }
            FlipViolation::ChainMap { generator } => write!(f, "phi d != d phi on {generator}"),
            FlipViolation::QuasiIsomorphism { s, grading } => {
                write!(f, "C{{j <= {s}}} -> C{{i <= {s}}} is not a quasi-isomorphism in grading {grading}")
            }
        }
    }
}

fn apply(rows: &[BitVec], v: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(v.len());
    for x in v.ones() {
        out.xor_assign(&rows[x]);
    }
    out
}

/// Whether the map with matrix `rows` (shifting gradings by `shift`) induces
/// an isomorphism `H_g(source) -> H_{g+shift}(target)`.
fn induces_iso(
    s: &Slicer,
    rows: &[BitVec],
    source: Region,
    target: Region,
    g: i64,
    shift: i64,
) -> bool {
    let src = s.homology(g, source);
    let tgt = s.homology(g + shift, target);
    if src.dim() != tgt.dim() {
        return false;
    }
    let mut e = tgt.boundaries.clone();
    let base = e.dim();
    for z in &src.cycles {
        e.insert(apply(rows, z).and(&tgt.mask));
    }
    e.dim() - base == src.dim()
}

/// Checks grading, filtration, chain-map and quasi-isomorphism axioms in
/// that order and reports the first failure.
pub fn verify_flip(c: &BifilteredComplex, phi: &FlipMap) -> std::result::Result<(), FlipViolation> {
    for e in &phi.entries {
        let x = c
            .generator(&e.from)
            .ok_or_else(|| FlipViolation::UnknownGenerator(e.from.clone()))?;
        let y = c
            .generator(&e.to)
            .ok_or_else(|| FlipViolation::UnknownGenerator(e.to.clone()))?;
        if y.maslov - 2 * e.u_power != x.maslov {
            return Err(FlipViolation::Grading(e.clone()));
        }
    }
    for e in &phi.entries {
        let x = c.generator(&e.from).expect("checked");
        if -e.u_power > x.alexander {
            return Err(FlipViolation::Filtration(e.clone()));
        }
    }
    let rows = phi.rows(c)?;
    let slicer = Slicer::new(c);
    for x in 0..c.len() {
        let lhs = apply(&rows, c.boundary_row(x));
        let rhs = slicer.d(&rows[x]);
        if lhs != rhs {
            return Err(FlipViolation::ChainMap {
                generator: c.generators()[x].name.clone(),
            });
        }
    }
    check_quasi_iso(c, &rows)
}

fn check_quasi_iso(
    c: &BifilteredComplex,
    rows: &[BitVec],
) -> std::result::Result<(), FlipViolation> {
    let slicer = Slicer::new(c);
    let g = c.max_abs_alexander();
    let (lo, hi) = slicer.grading_bounds();
    for s in -g..=g {
        let source = move |_: i64, j: i64| j <= s;
        let target = move |i: i64, _: i64| i <= s;
        for grading in lo - 2 * s.abs()..=hi + 2 * s.abs() {
            if !induces_iso(&slicer, rows, &source, &target, grading, 0) {
                return Err(FlipViolation::QuasiIsomorphism { s, grading });
            }
        }
    }
    Ok(())
}

/// Finds a flip map with entry U-powers bounded by `2·genus`.
pub fn find_flip(c: &BifilteredComplex) -> Result<FlipMap> {
    find_flip_with_bound(c, 2 * c.max_abs_alexander())
}

/// Solves for filtered, grading-preserving chain maps with `|u_power| <=
/// bound`, works modulo filtered null-homotopies, and returns the first
/// class (in binary order over a complement basis) that passes
/// [`verify_flip`].
pub fn find_flip_with_bound(c: &BifilteredComplex, bound: i64) -> Result<FlipMap> {
    flavors::require_rank_one(c)?;
    let n = c.len();
    let gens = c.generators();
    // Admissible entries of φ.
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut var_of = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            let diff = gens[y].maslov - gens[x].maslov;
            if diff.rem_euclid(2) != 0 {
                continue;
            }
            let u = diff / 2;
            if u.abs() <= bound && -u <= gens[x].alexander {
                var_of[x][y] = Some(vars.len());
                vars.push((x, y));
            }
        }
    }
    let nv = vars.len();
    // φ∂ + ∂φ = 0, one equation per (x, z).
    let mut equations: Vec<BitVec> = Vec::new();
    for x in 0..n {
        for z in 0..n {
            let mut eq = BitVec::zeros(nv);
            for y in c.boundary_row(x).ones() {
                if let Some(v) = var_of[y][z] {
                    eq.flip(v);
                }
            }
            for y in 0..n {
                if c.boundary_row(y).get(z) {
                    if let Some(v) = var_of[x][y] {
                        eq.flip(v);
                    }
                }
            }
            if !eq.is_zero() {
                equations.push(eq);
            }
        }
    }
    let solutions = F2Matrix::from_rows(nv, equations)?.nullspace();

    // Filtered null-homotopic maps ∂H + H∂ for elementary H.
    let mut homotopies = Echelon::new(nv);
    'h: for x in 0..n {
        for y in 0..n {
            let diff = gens[y].maslov - gens[x].maslov - 1;
            if diff.rem_euclid(2) != 0 || -(diff / 2) > gens[x].alexander {
                continue;
            }
            let mut v = BitVec::zeros(nv);
            let mut add = |a: usize, b: usize| match var_of[a][b] {
                Some(k) => {
                    v.flip(k);
                    true
                }
                None => false,
            };
            let mut ok = true;
            for w in 0..n {
                if c.boundary_row(w).get(x) {
                    ok &= add(w, y);
                }
            }
            for z in c.boundary_row(y).ones() {
                ok &= add(x, z);
            }
            if !ok {
                continue;
            }
            homotopies.insert(v);
            if homotopies.dim() == nv {
                break 'h;
            }
        }
    }
    let mut span = homotopies.clone();
    let complement: Vec<BitVec> = solutions
        .into_iter()
        .filter(|s| span.insert(s.clone()))
        .collect();
    let m = complement.len();
    if m > 24 {
        return Err(FloerError::NoFlip(format!(
            "{m} independent chain-map classes is too many to search"
        )));
    }
    for mask in 1u64..(1u64 << m) {
        let mut v = BitVec::zeros(nv);
        for (k, basis) in complement.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.xor_assign(basis);
            }
        }
        let entries = v
            .ones()
            .map(|k| {
                let (x, y) = vars[k];
                FlipEntry::new(
                    gens[x].name.clone(),
                    gens[y].name.clone(),
                    (gens[y].maslov - gens[x].maslov) / 2,
                )
            })
            .collect();
        let phi = FlipMap { entries };
        if verify_flip(c, &phi).is_ok() {
            return Ok(phi);
        }
    }
    if c.is_empty() {
        return Ok(FlipMap::default());
    }
    Err(FloerError::NoFlip(format!(
        "none of the {m}-dimensional space of chain-map classes is a quasi-isomorphism"
    )))
}

/// Whether two flip maps induce the same maps `H(C{j <= s}) -> H(C{i <= s})`
/// for every `s` and grading.
pub fn same_on_homology(c: &BifilteredComplex, a: &FlipMap, b: &FlipMap) -> Result<bool> {
    let ra = a.rows(c).map_err(|e| FloerError::Flip(e.to_string()))?;
    let rb = b.rows(c).map_err(|e| FloerError::Flip(e.to_string()))?;
    let slicer = Slicer::new(c);
    let g = c.max_abs_alexander();
    let (lo, hi) = slicer.grading_bounds();
    for s in -g..=g {
        for grading in lo - 2 * s.abs()..=hi + 2 * s.abs() {
            let src = slicer.homology(grading, &move |_, j| j <= s);
            let tgt = slicer.homology(grading, &move |i, _| i <= s);
            for z in &src.cycles {
                let mut diff = apply(&ra, z);
                diff.xor_assign(&apply(&rb, z));
                if tgt.class_nonzero(&diff) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PieceKind {
    A,
    B,
}

/// One copy of the input complex inside the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConePiece {
    pub kind: PieceKind,
    pub index: i64,
}

fn signed(s: i64) -> String {
    if s < 0 {
        format!("m{}", -s)
    } else {
        s.to_string()
    }
}

fn piece_name(kind: PieceKind, s: i64, x: &str) -> String {
    let k = match kind {
        PieceKind::A => "A",
        PieceKind::B => "B",
    };
    format!("{k}{}_{x}", signed(s))
}

/// The truncated cone for +1-surgery as a bifiltered complex.
#[derive(Clone, Debug)]
pub struct ConeComplex {
    /// `A_s` for `s` in `range.0..=range.1`, `B_s` for `s` in
    /// `range.0 + 1..=range.1`.
    pub range: (i64, i64),
    pub pieces: Vec<ConePiece>,
    pub flattened: BifilteredComplex,
}

/// Default truncation: `A_s` for `s ∈ [1-g, g]`, widened to `[0, 1]` for
/// genus zero.
pub fn default_range(c: &BifilteredComplex) -> (i64, i64) {
    let g = c.max_abs_alexander().max(1);
    (1 - g, g)
}

fn pinned_power(alexander: i64, s: i64) -> i64 {
    (alexander - s).max(0)
}

/// Builds the cone `⊕A_s -> ⊕B_s` with `v_s = id` and `h_s = U^s φ`.
pub fn cone_complex(
    c: &BifilteredComplex,
    phi: &FlipMap,
    range: (i64, i64),
) -> Result<ConeComplex> {
    let (a, b) = range;
    if a >= b {
        return Err(FloerError::Other(format!("empty cone range ({a}, {b})")));
    }
    let gens = c.generators();
    let mut generators = Vec::new();
    let mut differential = Vec::new();
    let mut pieces = Vec::new();
    for s in a..=b {
        pieces.push(ConePiece {
            kind: PieceKind::A,
            index: s,
        });
        let shift = s * (s - 1);
        for x in gens {
            let k0 = pinned_power(x.alexander, s);
            let alexander = if x.alexander >= s { s } else { s - 1 };
            generators.push(Generator::new(
                piece_name(PieceKind::A, s, &x.name),
                alexander,
                x.maslov - 2 * k0 + shift,
            ));
        }
        for e in c.differential() {
            let (kx, ky) = (
                pinned_power(c.generator(&e.from).unwrap().alexander, s),
                pinned_power(c.generator(&e.to).unwrap().alexander, s),
            );
            differential.push(DiffEntry::new(
                piece_name(PieceKind::A, s, &e.from),
                piece_name(PieceKind::A, s, &e.to),
                kx + e.u_power - ky,
            ));
        }
        if s > a {
            pieces.push(ConePiece {
                kind: PieceKind::B,
                index: s,
            });
            for x in gens {
                generators.push(Generator::new(
                    piece_name(PieceKind::B, s, &x.name),
                    s - 1,
                    x.maslov + shift - 1,
                ));
            }
            for e in c.differential() {
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::B, s, &e.from),
                    piece_name(PieceKind::B, s, &e.to),
                    e.u_power,
                ));
            }
            for x in gens {
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::A, s, &x.name),
                    piece_name(PieceKind::B, s, &x.name),
                    pinned_power(x.alexander, s),
                ));
            }
        }
        if s < b {
            for e in &phi.entries {
                let x = c
                    .generator(&e.from)
                    .ok_or_else(|| FloerError::DanglingEndpoint(e.from.clone()))?;
                if c.generator(&e.to).is_none() {
                    return Err(FloerError::DanglingEndpoint(e.to.clone()));
                }
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::A, s, &e.from),
                    piece_name(PieceKind::B, s + 1, &e.to),
                    pinned_power(x.alexander, s) + s + e.u_power,
                ));
            }
        }
    }
    let flattened =
        BifilteredComplex::with_computed_genus(generators, differential)?.validated()?;
    Ok(ConeComplex {
        range,
        pieces,
        flattened,
    })
}

/// Reduced knot complex of the core of +1-surgery.
pub fn core_complex(c: &BifilteredComplex, phi: &FlipMap) -> Result<BifilteredComplex> {
    core_complex_with_range(c, phi, default_range(c))
}

pub fn core_complex_with_range(
    c: &BifilteredComplex,
    phi: &FlipMap,
    range: (i64, i64),
) -> Result<BifilteredComplex> {
    verify_flip(c, phi).map_err(|v| FloerError::Flip(v.to_string()))?;
    let cone = cone_complex(c, phi, range)?;
    reduce(&cone.flattened).validated()
}

/// Ranks of the hat knot Floer homology of the core, per Alexander grading
/// `s ∈ [-g, g]`, ascending.
pub fn hfk_hat_core(c: &BifilteredComplex, phi: &FlipMap) -> Result<Vec<(i64, usize)>> {
    verify_flip(c, phi).map_err(|v| FloerError::Flip(v.to_string()))?;
    let cone = cone_complex(c, phi, default_range(c))?;
    Ok(associated_graded_ranks(
        &cone.flattened,
        c.max_abs_alexander(),
    ))
}

/// Homology ranks of the associated graded pieces at `(0, s)`.
pub fn associated_graded_ranks(c: &BifilteredComplex, g: i64) -> Vec<(i64, usize)> {
    let gens = c.generators();
    (-g..=g)
        .map(|s| {
            let idx: Vec<usize> = (0..c.len()).filter(|&x| gens[x].alexander == s).collect();
            let rows: Vec<BitVec> = idx
                .iter()
                .map(|&x| {
                    BitVec::from_indices(
                        c.len(),
                        c.boundary_row(x)
                            .ones()
                            .filter(|&y| gens[y].alexander == s && c.implied_u(x, y) == 0),
                    )
                })
                .collect();
            (
                s,
                idx.len() - 2 * Echelon::from_vectors(c.len(), &rows).dim(),
            )
        })
        .collect()
}

/// Piece range `[n(1-g), ng-1]` of the `1/n` cone, `[0, 0]` for genus zero.
pub fn one_over_n_range(genus: i64, n: i64) -> (i64, i64) {
    if genus == 0 {
        (0, 0)
    } else {
        (n * (1 - genus), n * genus - 1)
    }
}

/// The `1/n`-surgery cone as a complex with a single filtration (all
/// Alexander gradings zero). Pieces are `(s, A_t)` with `t = ⌊s/n⌋` for `s`
/// in `range`, and `(s, B)` for `s` in `range.0+1..=range.1`; `v` maps
/// `(s, A)` to `(s, B)` and `h = U^t φ` maps it to `(s+1, B)`. The grading
/// shift of `(s, A)` is `base` at `s = 0` and grows by `2⌊s/n⌋` from `s` to
/// `s + 1`, which makes `v` and `h` lower the grading by one.
pub fn one_over_n_cone(
    c: &BifilteredComplex,
    phi: &FlipMap,
    n: i64,
    range: (i64, i64),
    base: i64,
) -> Result<BifilteredComplex> {
    if n < 1 {
        return Err(FloerError::Other(format!("n must be positive, got {n}")));
    }
    let (lo, hi) = range;
    let t_of = |s: i64| s.div_euclid(n);
    let shift = |s: i64| -> i64 {
        let mut sigma = base;
        if s >= 0 {
            for r in 0..s {
                sigma += 2 * t_of(r);
            }
        } else {
            for r in s..0 {
                sigma -= 2 * t_of(r);
            }
        }
        sigma
    };
    let gens = c.generators();
    let mut generators = Vec::new();
    let mut differential = Vec::new();
    for s in lo..=hi {
        let t = t_of(s);
        let sigma = shift(s);
        for x in gens {
            let k0 = pinned_power(x.alexander, t);
            generators.push(Generator::new(
                piece_name(PieceKind::A, s, &x.name),
                0,
                x.maslov - 2 * k0 + sigma,
            ));
        }
        for e in c.differential() {
            let kx = pinned_power(c.generator(&e.from).unwrap().alexander, t);
            let ky = pinned_power(c.generator(&e.to).unwrap().alexander, t);
            differential.push(DiffEntry::new(
                piece_name(PieceKind::A, s, &e.from),
                piece_name(PieceKind::A, s, &e.to),
                kx + e.u_power - ky,
            ));
        }
        if s > lo {
            for x in gens {
                generators.push(Generator::new(
                    piece_name(PieceKind::B, s, &x.name),
                    0,
                    x.maslov + sigma - 1,
                ));
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::A, s, &x.name),
                    piece_name(PieceKind::B, s, &x.name),
                    pinned_power(x.alexander, t),
                ));
            }
            for e in c.differential() {
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::B, s, &e.from),
                    piece_name(PieceKind::B, s, &e.to),
                    e.u_power,
                ));
            }
        }
        if s < hi {
            for e in &phi.entries {
                let x = c
                    .generator(&e.from)
                    .ok_or_else(|| FloerError::DanglingEndpoint(e.from.clone()))?;
                differential.push(DiffEntry::new(
                    piece_name(PieceKind::A, s, &e.from),
                    piece_name(PieceKind::B, s + 1, &e.to),
                    pinned_power(x.alexander, t) + t + e.u_power,
                ));
            }
        }
    }
    BifilteredComplex::new(generators, differential, 0)?.validated()
}

/// Grading constant for the `1/n` cone, read off the unknot and checked on
/// two truncations.
pub fn calibrate(n: i64) -> Result<i64> {
    let unknot = crate::catalog::get("unknot")?;
    let phi = unknot.flip.expect("unknot fixture carries its flip map");
    let narrow = flavors::d_invariant(&one_over_n_cone(&unknot.complex, &phi, n, (0, 0), 0)?)?;
    let wide = flavors::d_invariant(&one_over_n_cone(&unknot.complex, &phi, n, (-n, n), 0)?)?;
    if narrow != wide {
        return Err(FloerError::Calibration {
            n,
            a: narrow,
            b: wide,
        });
    }
    Ok(-narrow)
}

/// d-invariant of `1/n`-surgery on the knot, `n >= 1`.
pub fn d_of_one_over_n(c: &BifilteredComplex, phi: &FlipMap, n: i64) -> Result<i64> {
    verify_flip(c, phi).map_err(|v| FloerError::Flip(v.to_string()))?;
    let base = calibrate(n)?;
    let cone = one_over_n_cone(c, phi, n, one_over_n_range(c.max_abs_alexander(), n), base)?;
    flavors::d_invariant(&cone)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaProbe {
    pub theta: i64,
    pub stabilized: bool,
    /// `(n, d(Y_{1/n}))` for `n = 1..=n_max`.
    pub d_values: Vec<(i64, i64)>,
}

/// Spread of `d(Y_{1/n})` over `1 <= n <= n_max`.
pub fn theta_probe(c: &BifilteredComplex, phi: &FlipMap, n_max: i64) -> Result<ThetaProbe> {
    if n_max < 3 {
        return Err(FloerError::Other("the theta probe needs n_max >= 3".into()));
    }
    let d_values = (1..=n_max)
        .map(|n| d_of_one_over_n(c, phi, n).map(|d| (n, d)))
        .collect::<Result<Vec<_>>>()?;
    let ds: Vec<i64> = d_values.iter().map(|p| p.1).collect();
    let theta = ds.iter().max().unwrap() - ds.iter().min().unwrap();
    let tail = &ds[ds.len() - 3..];
    Ok(ThetaProbe {
        theta,
        stabilized: tail.iter().all(|&d| d == tail[0]),
        d_values,
    })
}

/// Checks the truncation boundary: `v_g` and `h_{-g}` induce isomorphisms
/// on the plus flavors `H(C{max(i, j-s) >= 0}) -> H(C{i >= 0})`.
pub fn check_truncation(c: &BifilteredComplex, phi: &FlipMap) -> Result<()> {
    let rows = phi.rows(c).map_err(|e| FloerError::Flip(e.to_string()))?;
    let ident: Vec<BitVec> = (0..c.len()).map(|x| BitVec::unit(c.len(), x)).collect();
    let g = c.max_abs_alexander();
    let slicer = Slicer::new(c);
    let (lo, hi) = slicer.grading_bounds();
    let large = move |s: i64| move |i: i64, j: i64| i.max(j - s) >= 0;
    for grading in lo..=hi {
        if !induces_iso(&slicer, &ident, &large(g), &plus_region, grading, 0) {
            return Err(FloerError::Other(format!(
                "v_{g} is not an isomorphism in grading {grading}"
            )));
        }
        if !induces_iso(&slicer, &rows, &large(-g), &plus_region, grading, 2 * g) {
            return Err(FloerError::Other(format!(
                "h_{} is not an isomorphism in grading {grading}",
                -g
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::concordance;

    fn fixture(name: &str) -> (BifilteredComplex, FlipMap) {
        let f = catalog::get(name).unwrap();
        (f.complex, f.flip.unwrap())
    }

    #[test]
    fn unknot_identity_is_a_flip() {
        let (c, phi) = fixture("unknot");
        assert_eq!(phi, FlipMap::identity(&c));
        assert_eq!(verify_flip(&c, &phi), Ok(()));
        assert_eq!(find_flip(&c).unwrap(), phi);
    }

    #[test]
    fn cable_swap_is_a_flip() {
        let (c, phi) = fixture("cable");
        assert_eq!(verify_flip(&c, &phi), Ok(()));
    }

    #[test]
    fn cable_identity_is_not_a_flip() {
        let (c, _) = fixture("cable");
        let err = verify_flip(&c, &FlipMap::identity(&c)).unwrap_err();
        assert!(matches!(err, FlipViolation::Filtration(_)), "{err}");
    }

    #[test]
    fn found_flip_agrees_with_cable_swap() {
        let (c, phi) = fixture("cable");
        let found = find_flip(&c).unwrap();
        assert_eq!(verify_flip(&c, &found), Ok(()));
        assert!(same_on_homology(&c, &found, &phi).unwrap());
    }

    #[test]
    fn trefoil_flip_is_the_symmetry() {
        let (c, phi) = fixture("t23");
        assert_eq!(verify_flip(&c, &phi), Ok(()));
        let found = find_flip(&c).unwrap();
        assert!(same_on_homology(&c, &found, &phi).unwrap());
    }

    #[test]
    fn unknot_core_is_the_unknot() {
        let (c, phi) = fixture("unknot");
        let core = core_complex(&c, &phi).unwrap();
        assert_eq!(core.len(), 1);
        assert_eq!(hfk_hat_core(&c, &phi).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn trefoil_core_lives_in_the_poincare_sphere() {
        let (c, phi) = fixture("t23");
        let core = core_complex(&c, &phi).unwrap();
        assert_eq!(flavors::d_invariant(&core).unwrap(), -2);
        let ranks = hfk_hat_core(&c, &phi).unwrap();
        let total: usize = ranks.iter().map(|r| r.1).sum();
        assert_eq!(total % 2, 1);
    }

    #[test]
    fn cable_core_matches_reduced_fixture() {
        let (c, phi) = fixture("cable");
        let core = core_complex(&c, &phi).unwrap();
        let mut got: Vec<(i64, i64)> = core
            .generators()
            .iter()
            .map(|g| (g.alexander, g.maslov))
            .collect();
        let mut want: Vec<(i64, i64)> = catalog::get("table1")
            .unwrap()
            .complex
            .generators()
            .iter()
            .map(|g| (g.alexander, g.maslov))
            .collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(concordance::tau(&core).unwrap(), -1);
        assert_eq!(concordance::epsilon(&core).unwrap(), 0);
        let ranks: Vec<usize> = hfk_hat_core(&c, &phi)
            .unwrap()
            .iter()
            .rev()
            .map(|r| r.1)
            .collect();
        assert_eq!(ranks, vec![1, 1, 4, 1, 4, 1, 1]);
    }

    #[test]
    fn truncation_range_does_not_matter() {
        let (c, phi) = fixture("cable");
        let g = c.max_abs_alexander();
        let a = core_complex_with_range(&c, &phi, (1 - g, g)).unwrap();
        let b = core_complex_with_range(&c, &phi, (-g, g + 1)).unwrap();
        assert_eq!(
            concordance::invariants(&a, 4).unwrap(),
            concordance::invariants(&b, 4).unwrap()
        );
        check_truncation(&c, &phi).unwrap();
    }

    #[test]
    fn unknot_surgeries_return_the_three_sphere() {
        let (c, phi) = fixture("unknot");
        for n in 1..=4 {
            assert_eq!(d_of_one_over_n(&c, &phi, n).unwrap(), 0);
        }
        assert_eq!(theta_probe(&c, &phi, 3).unwrap().theta, 0);
    }

    #[test]
    fn trefoil_surgeries() {
        let (c, phi) = fixture("t23");
        for n in 1..=4 {
            assert_eq!(d_of_one_over_n(&c, &phi, n).unwrap(), -2, "n = {n}");
        }
        let probe = theta_probe(&c, &phi, 4).unwrap();
        assert_eq!(probe.theta, 0);
        assert!(probe.stabilized);
    }

    #[test]
    fn plus_one_cone_matches_core_d() {
        let (c, phi) = fixture("cable");
        let core = core_complex(&c, &phi).unwrap();
        assert_eq!(
            d_of_one_over_n(&c, &phi, 1).unwrap(),
            flavors::d_invariant(&core).unwrap()
        );
    }
}
