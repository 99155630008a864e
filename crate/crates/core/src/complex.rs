//! Reduced bifiltered complexes over F[U,U⁻¹].
//!
//! Every generator is pinned at `i = 0`, so its U⁰-representative sits at
//! `(0, alexander)` and `U^k x` sits at `(-k, alexander - k)` with Maslov
//! grading `maslov - 2k`. A differential entry `x -> U^k y` is stored with
//! `k >= 0`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::f2::{BitVec, Echelon};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub alexander: i64,
    pub maslov: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, alexander: i64, maslov: i64) -> Self {
        Generator {
            name: name.into(),
            alexander,
            maslov,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiffEntry {
    pub from: String,
    pub to: String,
    pub u_power: i64,
}

impl DiffEntry {
    pub fn new(from: impl Into<String>, to: impl Into<String>, u_power: i64) -> Self {
        DiffEntry {
            from: from.into(),
            to: to.into(),
            u_power,
        }
    }
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> U^{} {}", self.from, self.u_power, self.to)
    }
}

/// On-disk form of a complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ComplexFile {
    genus: i64,
    generators: Vec<Generator>,
    differential: Vec<DiffEntry>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    reduced: bool,
}

/// A finitely generated free F[U,U⁻¹]-module with a bifiltration, a Maslov
/// grading and a differential.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexFile", into = "ComplexFile")]
pub struct BifilteredComplex {
    generators: Vec<Generator>,
    differential: Vec<DiffEntry>,
    genus: i64,
    reduced: bool,
    index: HashMap<String, usize>,
    /// `boundary[x]` has bit `y` set when `∂x` has a `U^k y` term (the power
    /// is implied by the gradings).
    boundary: Vec<BitVec>,
}

impl TryFrom<ComplexFile> for BifilteredComplex {
    type Error = FloerError;

    fn try_from(file: ComplexFile) -> Result<Self> {
        let mut c = BifilteredComplex::new(file.generators, file.differential, file.genus)?;
        c.reduced = file.reduced;
        Ok(c)
    }
}

impl From<BifilteredComplex> for ComplexFile {
    fn from(c: BifilteredComplex) -> Self {
        ComplexFile {
            genus: c.genus,
            generators: c.generators,
            differential: c.differential,
            reduced: c.reduced,
        }
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|ch| ch.is_ascii_alphanumeric() || matches!(ch, '_' | '.' | '-' | '\''))
}

impl BifilteredComplex {
    /// Builds a complex, checking names and endpoints. Algebraic axioms are
    /// checked separately by [`BifilteredComplex::validate`].
    pub fn new(
        generators: Vec<Generator>,
        differential: Vec<DiffEntry>,
        genus: i64,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(generators.len());
        for (k, g) in generators.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(FloerError::InvalidName(g.name.clone()));
            }
            if index.insert(g.name.clone(), k).is_some() {
                return Err(FloerError::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = generators.len();
        let mut boundary = vec![BitVec::zeros(n); n];
        for e in &differential {
            let from = *index
                .get(&e.from)
                .ok_or_else(|| FloerError::DanglingEndpoint(e.from.clone()))?;
            let to = *index
                .get(&e.to)
                .ok_or_else(|| FloerError::DanglingEndpoint(e.to.clone()))?;
            boundary[from].flip(to);
        }
        Ok(BifilteredComplex {
            generators,
            differential,
            genus,
            reduced: false,
            index,
            boundary,
        })
    }

    /// Like [`BifilteredComplex::new`] with the genus taken as max |alexander|.
    pub fn with_computed_genus(
        generators: Vec<Generator>,
        differential: Vec<DiffEntry>,
    ) -> Result<Self> {
        let genus = generators
            .iter()
            .map(|g| g.alexander.abs())
            .max()
            .unwrap_or(0);
        Self::new(generators, differential, genus)
    }

    /// Sets the flag that enables the reducedness check in `validate`.
    pub fn flagged_reduced(mut self, reduced: bool) -> Self {
        self.reduced = reduced;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FloerError::Invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &[DiffEntry] {
        &self.differential
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn is_flagged_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.index_of(name).map(|k| &self.generators[k])
    }

    pub(crate) fn boundary_row(&self, x: usize) -> &BitVec {
        &self.boundary[x]
    }

    pub(crate) fn boundary_rows(&self) -> &[BitVec] {
        &self.boundary
    }

    /// The U-power forced by the gradings on an arrow `x -> y`.
    pub(crate) fn implied_u(&self, x: usize, y: usize) -> i64 {
        (self.generators[y].maslov - self.generators[x].maslov + 1).div_euclid(2)
    }

    pub fn max_abs_alexander(&self) -> i64 {
        self.generators
            .iter()
            .map(|g| g.alexander.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn maslov_range(&self) -> Option<(i64, i64)> {
        let min = self.generators.iter().map(|g| g.maslov).min()?;
        let max = self.generators.iter().map(|g| g.maslov).max()?;
        Some((min, max))
    }

    /// Checks every axiom and returns the list of violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for e in &self.differential {
            let x = &self.generators[self.index[&e.from]];
            let y = &self.generators[self.index[&e.to]];
            if e.u_power < 0 {
                violations.push(Violation::NegativeUPower(e.clone()));
            }
            if y.alexander - e.u_power > x.alexander {
                violations.push(Violation::Filtration(e.clone()));
            }
            if y.maslov - 2 * e.u_power != x.maslov - 1 {
                violations.push(Violation::Grading(e.clone()));
            }
            if self.reduced && e.u_power == 0 && y.alexander >= x.alexander {
                violations.push(Violation::NotReduced(e.clone()));
            }
        }
        let actual = self.max_abs_alexander();
        if actual != self.genus {
            violations.push(Violation::GenusMismatch {
                stored: self.genus,
                actual,
            });
        }
        violations.extend(self.d_squared_terms().into_iter().map(Violation::DSquared));
        ValidationReport { violations }
    }

    /// Returns self if `validate` passes, otherwise an error.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.passes() {
            Ok(self)
        } else {
            Err(FloerError::Invalid(report.to_string()))
        }
    }

    /// Nonzero terms `U^k z` of `∂∂x`, computed entrywise with explicit
    /// U-power bookkeeping.
    fn d_squared_terms(&self) -> Vec<DiffEntry> {
        let mut out_edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.len()];
        for e in &self.differential {
            out_edges[self.index[&e.from]].push((self.index[&e.to], e.u_power));
        }
        let mut bad = Vec::new();
        for (x, edges) in out_edges.iter().enumerate() {
            let mut parity: BTreeMap<(usize, i64), bool> = BTreeMap::new();
            for &(y, k1) in edges {
                for &(z, k2) in &out_edges[y] {
                    *parity.entry((z, k1 + k2)).or_default() ^= true;
                }
            }
            for ((z, k), odd) in parity {
                if odd {
                    bad.push(DiffEntry::new(
                        self.generators[x].name.clone(),
                        self.generators[z].name.clone(),
                        k,
                    ));
                }
            }
        }
        bad
    }

    /// Tensor product over F[U,U⁻¹]; generator `(x, y)` is named `x.y`.
    pub fn tensor(&self, other: &BifilteredComplex) -> Result<BifilteredComplex> {
        let mut generators = Vec::with_capacity(self.len() * other.len());
        for x in &self.generators {
            for y in &other.generators {
                generators.push(Generator::new(
                    format!("{}.{}", x.name, y.name),
                    x.alexander + y.alexander,
                    x.maslov + y.maslov,
                ));
            }
        }
        let mut differential = Vec::new();
        for e in &self.differential {
            for y in &other.generators {
                differential.push(DiffEntry::new(
                    format!("{}.{}", e.from, y.name),
                    format!("{}.{}", e.to, y.name),
                    e.u_power,
                ));
            }
        }
        for x in &self.generators {
            for e in &other.differential {
                differential.push(DiffEntry::new(
                    format!("{}.{}", x.name, e.from),
                    format!("{}.{}", x.name, e.to),
                    e.u_power,
                ));
            }
        }
        let c = Self::with_computed_genus(generators, differential)?;
        Ok(c.flagged_reduced(self.reduced && other.reduced))
    }

    /// The dual complex: gradings negated, arrows reversed with the same
    /// U-powers. Generator names are kept.
    pub fn dualize(&self) -> BifilteredComplex {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), -g.alexander, -g.maslov))
            .collect();
        let differential = self
            .differential
            .iter()
            .map(|e| DiffEntry::new(e.to.clone(), e.from.clone(), e.u_power))
            .collect();
        Self::new(generators, differential, self.genus)
            .expect("dual of a well-formed complex is well formed")
            .flagged_reduced(self.reduced)
    }

    /// Generators sorted by name and arrows deduplicated mod 2 and sorted.
    pub fn canonical(&self) -> (Vec<Generator>, Vec<DiffEntry>) {
        let mut generators = self.generators.clone();
        generators.sort();
        let mut parity: BTreeMap<DiffEntry, bool> = BTreeMap::new();
        for e in &self.differential {
            *parity.entry(e.clone()).or_default() ^= true;
        }
        let differential = parity
            .into_iter()
            .filter(|(_, odd)| *odd)
            .map(|(e, _)| e)
            .collect();
        (generators, differential)
    }

    /// Renames generators through `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<BifilteredComplex> {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(f(&g.name), g.alexander, g.maslov))
            .collect();
        let differential = self
            .differential
            .iter()
            .map(|e| DiffEntry::new(f(&e.from), f(&e.to), e.u_power))
            .collect();
        Ok(Self::new(generators, differential, self.genus)?.flagged_reduced(self.reduced))
    }

    /// Coefficients of `Σ (-1)^maslov t^alexander` over the generators.
    pub fn graded_euler_characteristic(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(g.alexander).or_insert(0) += sign;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// The finite F₂ complex spanned by translates `U^k x`, `|k| <= window`,
    /// whose positions lie in `region`. Arrows leaving the region are
    /// dropped.
    pub fn subquotient(&self, region: &ConvexRegion, window: i64) -> Result<FiniteF2Complex> {
        self.subquotient_by(|i, j| region.contains(i, j), window)
    }

    pub(crate) fn subquotient_by(
        &self,
        region: impl Fn(i64, i64) -> bool,
        window: i64,
    ) -> Result<FiniteF2Complex> {
        let mut basis = Vec::new();
        let mut lookup: HashMap<(usize, i64), usize> = HashMap::new();
        for (x, g) in self.generators.iter().enumerate() {
            for k in -window..=window {
                let (i, j) = (-k, g.alexander - k);
                if region(i, j) {
                    lookup.insert((x, k), basis.len());
                    basis.push(BasisElement {
                        generator: x,
                        u_power: k,
                        i,
                        j,
                        maslov: g.maslov - 2 * k,
                    });
                }
            }
        }
        let n = basis.len();
        let mut boundary = vec![BitVec::zeros(n); n];
        for (b, el) in basis.iter().enumerate() {
            for y in self.boundary[el.generator].ones() {
                let k = el.u_power + self.implied_u(el.generator, y);
                let (i, j) = (-k, self.generators[y].alexander - k);
                if !region(i, j) {
                    continue;
                }
                match lookup.get(&(y, k)) {
                    Some(&t) => boundary[b].flip(t),
                    None => {
                        return Err(FloerError::WindowTooSmall {
                            window,
                            from: self.generators[el.generator].name.clone(),
                        })
                    }
                }
            }
        }
        Ok(FiniteF2Complex {
            basis,
            boundary,
            lookup,
        })
    }
}

impl PartialEq for BifilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.canonical() == other.canonical()
    }
}

impl Eq for BifilteredComplex {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DSquared(DiffEntry),
    Filtration(DiffEntry),
    Grading(DiffEntry),
    NegativeUPower(DiffEntry),
    NotReduced(DiffEntry),
    GenusMismatch { stored: i64, actual: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DSquared(e) => write!(
                f,
                "d^2 != 0: d(d({})) contains U^{} {}",
                e.from, e.u_power, e.to
            ),
            Violation::Filtration(e) => write!(f, "filtration breach on {e}"),
            Violation::Grading(e) => write!(f, "grading breach on {e}"),
            Violation::NegativeUPower(e) => write!(f, "negative U-power on {e}"),
            Violation::NotReduced(e) => write!(
                f,
                "arrow {e} preserves both filtrations in a complex flagged reduced"
            ),
            Violation::GenusMismatch { stored, actual } => {
                write!(
                    f,
                    "genus mismatch: stored {stored}, max |alexander| is {actual}"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_d_squared(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::DSquared(_)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return write!(f, "pass");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// One of the half-planes a [`ConvexRegion`] is cut out by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    ILe(i64),
    IGe(i64),
    JLe(i64),
    JGe(i64),
    /// `(1 - t/2) i + (t/2) j <= s`, with `t` in `[0, 2]`.
    Slope {
        t: Ratio<i64>,
        s: Ratio<i64>,
    },
}

impl HalfPlane {
    pub fn contains(&self, i: i64, j: i64) -> bool {
        match self {
            HalfPlane::ILe(a) => i <= *a,
            HalfPlane::IGe(a) => i >= *a,
            HalfPlane::JLe(b) => j <= *b,
            HalfPlane::JGe(b) => j >= *b,
            HalfPlane::Slope { t, s } => {
                let half = Ratio::new(1, 2);
                let lhs = (Ratio::from_integer(1) - t * half) * i + t * half * j;
                lhs <= *s
            }
        }
    }
}

/// Intersection of half-planes in the (i, j) plane.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvexRegion {
    pub constraints: Vec<HalfPlane>,
}

impl ConvexRegion {
    pub fn new(constraints: Vec<HalfPlane>) -> Self {
        ConvexRegion { constraints }
    }

    /// The column `{i = a}`.
    pub fn column(a: i64) -> Self {
        Self::new(vec![HalfPlane::ILe(a), HalfPlane::IGe(a)])
    }

    /// The box `[i0, i1] x [j0, j1]`.
    pub fn rect(i0: i64, i1: i64, j0: i64, j1: i64) -> Self {
        Self::new(vec![
            HalfPlane::IGe(i0),
            HalfPlane::ILe(i1),
            HalfPlane::JGe(j0),
            HalfPlane::JLe(j1),
        ])
    }

    pub fn and(mut self, h: HalfPlane) -> Self {
        self.constraints.push(h);
        self
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.constraints.iter().all(|h| h.contains(i, j))
    }
}

/// A translate `U^k x` used as a basis vector of a finite complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub generator: usize,
    pub u_power: i64,
    pub i: i64,
    pub j: i64,
    pub maslov: i64,
}

/// Finite-dimensional graded complex over F₂.
#[derive(Clone, Debug)]
pub struct FiniteF2Complex {
    basis: Vec<BasisElement>,
    boundary: Vec<BitVec>,
    lookup: HashMap<(usize, i64), usize>,
}

impl FiniteF2Complex {
    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn boundary_of(&self, b: usize) -> &BitVec {
        &self.boundary[b]
    }

    /// Differential as a square matrix; row `b` lists the terms of `∂b`.
    pub fn differential_matrix(&self) -> crate::f2::F2Matrix {
        crate::f2::F2Matrix::from_rows(self.len(), self.boundary.clone()).expect("square")
    }

    pub fn differential_rank(&self) -> usize {
        Echelon::from_vectors(self.len(), &self.boundary).dim()
    }

    /// Homology dimension in each Maslov grading (zero entries omitted).
    pub fn homology_ranks(&self) -> BTreeMap<i64, usize> {
        let gradings: HashSet<i64> = self.basis.iter().map(|b| b.maslov).collect();
        let mut out = BTreeMap::new();
        for g in gradings {
            let count = self.basis.iter().filter(|b| b.maslov == g).count();
            let rank_out = self.rank_from(g);
            let rank_in = self.rank_from(g + 1);
            let h = count - rank_out - rank_in;
            if h > 0 {
                out.insert(g, h);
            }
        }
        out
    }

    pub fn total_homology_rank(&self) -> usize {
        self.len() - 2 * self.differential_rank()
    }

    fn rank_from(&self, g: i64) -> usize {
        let rows = self
            .basis
            .iter()
            .zip(&self.boundary)
            .filter(|(b, _)| b.maslov == g)
            .map(|(_, r)| r);
        Echelon::from_vectors(self.len(), rows).dim()
    }

    /// Image of `U^n` on a chain, dropping translates outside the basis.
    pub(crate) fn u_power_map(&self, v: &BitVec, n: i64) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for b in v.ones() {
            let el = self.basis[b];
            if let Some(&t) = self.lookup.get(&(el.generator, el.u_power + n)) {
                out.flip(t);
            }
        }
        out
    }
}
