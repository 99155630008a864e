//! d-invariants of boundaries of definite plumbing trees.
//!
//! For a positive-definite plumbing `X` with intersection form `A` and
//! `n` vertices, `d(∂X, 𝔰) = min (α² - n) / 4` over characteristic covectors
//! `α` restricting to `𝔰`, where `α² = αᵀ A⁻¹ α`. The class of `α` is
//! `α + 2A ℤⁿ`; writing `α = A y`, the square is `yᵀ A y` with
//! `y ∈ A⁻¹α + 2ℤⁿ`, minimised here by exact Fincke–Pohst enumeration.
//! Negative-definite forms use `d(∂X) = -d(∂(-X))`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::f2::{BitVec, F2Matrix};

/// Default cap on enumeration nodes; override with `FLOERKIT_NODE_LIMIT`.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(String, String)>,
}

impl PlumbingGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FloerError::Graph(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Graph with every weight negated.
    pub fn reversed(&self) -> Self {
        PlumbingGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    name: v.name.clone(),
                    weight: -v.weight,
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }

    fn edge_indices(&self) -> Result<Vec<(usize, usize)>> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.name.as_str(), k))
            .collect();
        if index.len() != self.vertices.len() {
            return Err(FloerError::Graph("duplicate vertex name".into()));
        }
        self.edges
            .iter()
            .map(|(a, b)| {
                let ia = *index
                    .get(a.as_str())
                    .ok_or_else(|| FloerError::Graph(format!("unknown vertex `{a}`")))?;
                let ib = *index
                    .get(b.as_str())
                    .ok_or_else(|| FloerError::Graph(format!("unknown vertex `{b}`")))?;
                if ia == ib {
                    return Err(FloerError::Graph(format!("loop at `{a}`")));
                }
                Ok((ia, ib))
            })
            .collect()
    }
}

/// The graph `Γ_j`: a chain `v1 - v2 - v3 - v6 - ... - v_{2j+5}` with a
/// branch `v3 - v4 - v5`, weights `j+2` at `v1`, `j+1` at `v5`, 2 elsewhere.
pub fn gamma_j(j: i64) -> Result<PlumbingGraph> {
    if j < 1 {
        return Err(FloerError::Graph(format!("gamma_j needs j >= 1, got {j}")));
    }
    let n = 2 * j + 5;
    let name = |k: i64| format!("v{k}");
    let vertices = (1..=n)
        .map(|k| Vertex {
            name: name(k),
            weight: match k {
                1 => j + 2,
                5 => j + 1,
                _ => 2,
            },
        })
        .collect();
    let mut edges = vec![
        (name(1), name(2)),
        (name(2), name(3)),
        (name(3), name(4)),
        (name(4), name(5)),
        (name(3), name(6)),
    ];
    for k in 6..n {
        edges.push((name(k), name(k + 1)));
    }
    Ok(PlumbingGraph { vertices, edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Positive,
    Negative,
}

/// Intersection form of a plumbing tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionForm {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub definiteness: Definiteness,
    #[serde(serialize_with = "crate::display_string")]
    pub det: BigInt,
    pub bad_vertices: Vec<String>,
}

impl IntersectionForm {
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// The form `sign · A`, positive-definite.
    fn positive_matrix(&self) -> Vec<Vec<i64>> {
        let sign = match self.definiteness {
            Definiteness::Positive => 1,
            Definiteness::Negative => -1,
        };
        self.matrix
            .iter()
            .map(|r| r.iter().map(|x| sign * x).collect())
            .collect()
    }
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Leading principal minors by fraction-free elimination.
fn leading_minors(m: &[Vec<i64>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut minors = Vec::with_capacity(n);
    let mut det = BigRational::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        det *= &pivot;
        minors.push(det.clone());
        if pivot.is_zero() {
            // Later minors need pivoting; a zero leading minor already
            // rules out definiteness.
            break;
        }
        for r in k + 1..n {
            let f = &a[r][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for col in k..n {
                let t = &f * &a[k][col];
                a[r][col] -= t;
            }
        }
    }
    minors
}

/// Determinant with row pivoting.
fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a = to_rational(m);
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for r in k + 1..n {
            let f = &a[r][k] / &pivot;
            for col in k..n {
                let t = &f * &a[k][col];
                a[r][col] -= t;
            }
        }
    }
    det.to_integer()
}

/// Builds the intersection form and checks tree shape, definiteness and
/// the bad-vertex bound.
pub fn analyze(graph: &PlumbingGraph) -> Result<IntersectionForm> {
    let n = graph.vertices.len();
    if n == 0 {
        return Err(FloerError::Graph("empty graph".into()));
    }
    let edges = graph.edge_indices()?;
    if edges.len() != n - 1 {
        return Err(FloerError::Graph(format!(
            "{} edges on {n} vertices is not a tree",
            edges.len()
        )));
    }
    let mut matrix = vec![vec![0i64; n]; n];
    let mut valence = vec![0i64; n];
    let mut seen = HashSet::new();
    for &(a, b) in &edges {
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(FloerError::Graph("repeated edge".into()));
        }
        matrix[a][b] = 1;
        matrix[b][a] = 1;
        valence[a] += 1;
        valence[b] += 1;
    }
    // Connectivity by search; with n-1 edges this also rules out cycles.
    let mut reached = vec![false; n];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if matrix[v][w] == 1 && !reached[w] {
                reached[w] = true;
                stack.push(w);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(FloerError::Graph("graph is not connected".into()));
    }
    for (k, v) in graph.vertices.iter().enumerate() {
        matrix[k][k] = v.weight;
    }
    let positive = leading_minors(&matrix)
        .iter()
        .filter(|m| m.is_positive())
        .count()
        == n;
    let negated: Vec<Vec<i64>> = matrix
        .iter()
        .map(|r| r.iter().map(|x| -x).collect())
        .collect();
    let negative = !positive
        && leading_minors(&negated)
            .iter()
            .filter(|m| m.is_positive())
            .count()
            == n;
    let definiteness = match (positive, negative) {
        (true, _) => Definiteness::Positive,
        (_, true) => Definiteness::Negative,
        _ => return Err(FloerError::Indefinite),
    };
    let sign = if positive { 1 } else { -1 };
    let bad_vertices: Vec<String> = graph
        .vertices
        .iter()
        .enumerate()
        .filter(|(k, v)| sign * v.weight < valence[*k])
        .map(|(_, v)| v.name.clone())
        .collect();
    if bad_vertices.len() > 1 {
        return Err(FloerError::Graph(format!(
            "{} bad vertices: {}",
            bad_vertices.len(),
            bad_vertices.join(", ")
        )));
    }
    let det = determinant(&matrix);
    Ok(IntersectionForm {
        names: graph.vertices.iter().map(|v| v.name.clone()).collect(),
        matrix,
        definiteness,
        det,
        bad_vertices,
    })
}

/// A characteristic covector: `α(v) ≡ A(v, v) (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharCovector {
    pub alpha: Vec<i64>,
}

impl CharCovector {
    pub fn is_characteristic(&self, form: &IntersectionForm) -> bool {
        self.alpha.len() == form.rank()
            && self
                .alpha
                .iter()
                .zip(&form.matrix)
                .enumerate()
                .all(|(k, (a, row))| (a - row[k]).rem_euclid(2) == 0)
    }
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// The class of covectors `A x`, which is fixed by conjugation.
pub fn self_conjugate_class(form: &IntersectionForm) -> Result<CharCovector> {
    let n = form.rank();
    let rows = (0..n)
        .map(|r| BitVec::from_indices(n, (0..n).filter(|&c| form.matrix[r][c].rem_euclid(2) == 1)))
        .collect();
    let parity = BitVec::from_indices(n, (0..n).filter(|&k| form.matrix[k][k].rem_euclid(2) == 1));
    let x = F2Matrix::from_rows(n, rows)?
        .solve(&parity)?
        .ok_or_else(|| FloerError::Other("no characteristic covector of the form A x".into()))?;
    let xs: Vec<i64> = (0..n).map(|k| i64::from(x.get(k))).collect();
    Ok(CharCovector {
        alpha: mat_vec(&form.matrix, &xs),
    })
}

/// Exact `αᵀ A⁻¹ α`.
pub fn square(form: &IntersectionForm, alpha: &[i64]) -> Result<BigRational> {
    let y = solve_rational(&form.matrix, alpha)?;
    Ok(alpha
        .iter()
        .zip(&y)
        .map(|(a, b)| BigRational::from_integer(BigInt::from(*a)) * b)
        .sum())
}

/// Solves `A y = b` exactly.
fn solve_rational(m: &[Vec<i64>], b: &[i64]) -> Result<Vec<BigRational>> {
    let n = m.len();
    if b.len() != n {
        return Err(FloerError::DimensionMismatch(format!(
            "expected {n} entries, found {}",
            b.len()
        )));
    }
    let mut a = to_rational(m);
    let mut rhs: Vec<BigRational> = b
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(FloerError::Indefinite)?;
        a.swap(p, k);
        rhs.swap(p, k);
        for r in 0..n {
            if r == k || a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &a[k][k];
            for col in k..n {
                let t = &f * &a[k][col];
                a[r][col] -= t;
            }
            let t = &f * &rhs[k];
            rhs[r] -= t;
        }
    }
    Ok((0..n).map(|k| &rhs[k] / &a[k][k]).collect())
}

/// Whether `α` and `β` restrict to the same Spin^c structure, i.e.
/// `(α - β)/2 ∈ A ℤⁿ`.
pub fn same_class(form: &IntersectionForm, alpha: &[i64], beta: &[i64]) -> Result<bool> {
    let diff: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
    if diff.iter().any(|d| d.rem_euclid(2) != 0) {
        return Ok(false);
    }
    let half: Vec<i64> = diff.iter().map(|d| d / 2).collect();
    Ok(solve_rational(&form.matrix, &half)?
        .iter()
        .all(|x| x.is_integer()))
}

/// Minimum of `α²` over a class and a covector attaining it. For a
/// negative-definite form the square is taken in `-A`, so `value` is
/// always positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinSquare {
    #[serde(serialize_with = "crate::big_ratio_string")]
    pub value: BigRational,
    pub minimizer: CharCovector,
    pub nodes: u64,
}

pub fn node_limit_from_env() -> u64 {
    std::env::var("FLOERKIT_NODE_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_NODE_LIMIT)
}

/// `min αᵀ A⁻¹ α` over `α + 2 A ℤⁿ`, with the node limit from the
/// environment.
pub fn min_square(form: &IntersectionForm, class: &CharCovector) -> Result<MinSquare> {
    min_square_with_limit(form, class, node_limit_from_env())
}

/// Fincke–Pohst enumeration with Schnorr–Euchner child order.
///
/// With `y0 = A⁻¹ α` and `c = -y0 / 2` the target is
/// `4 (z - c)ᵀ A (z - c)` over `z ∈ ℤⁿ`. The Gram form is decomposed as
/// `A = Lᵀ D L` (unit upper `L`) so that
/// `(z - c)ᵀ A (z - c) = Σ_k D_k (z_k - c_k + Σ_{l>k} L_kl (z_l - c_l))²`
/// and coordinates are fixed from the last to the first.
pub fn min_square_with_limit(
    form: &IntersectionForm,
    class: &CharCovector,
    node_limit: u64,
) -> Result<MinSquare> {
    if !class.is_characteristic(form) {
        return Err(FloerError::Other("covector is not characteristic".into()));
    }
    let a = form.positive_matrix();
    let alpha: Vec<i64> = match form.definiteness {
        Definiteness::Positive => class.alpha.clone(),
        Definiteness::Negative => class.alpha.iter().map(|x| -x).collect(),
    };
    let n = a.len();
    let y0 = solve_rational(&a, &alpha)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let center: Vec<BigRational> = y0.iter().map(|y| -y / &two).collect();
    let (upper, diag) = ldl(&a);

    let value_at = |z: &[BigInt]| -> BigRational {
        let y: Vec<BigRational> = (0..n)
            .map(|k| &y0[k] + &two * BigRational::from_integer(z[k].clone()))
            .collect();
        let mut s = BigRational::zero();
        for r in 0..n {
            for c in 0..n {
                if a[r][c] != 0 {
                    s += &y[r] * &y[c] * BigRational::from_integer(BigInt::from(a[r][c]));
                }
            }
        }
        s
    };
    let mut best_z = vec![BigInt::zero(); n];
    // Bound on (z - c)ᵀ A (z - c); the value is four times it.
    let mut best = value_at(&best_z) / BigRational::from_integer(BigInt::from(4));

    let mut z = vec![BigInt::zero(); n];
    let mut nodes = 0u64;
    let mut search = Search {
        upper: &upper,
        diag: &diag,
        center: &center,
        nodes: &mut nodes,
        limit: node_limit,
    };
    search.descend(n, BigRational::zero(), &mut z, &mut best, &mut best_z)?;

    let y: Vec<BigRational> = (0..n)
        .map(|k| &y0[k] + &two * BigRational::from_integer(best_z[k].clone()))
        .collect();
    // α = A y is integral for y in the class.
    let minimizer: Vec<i64> = (0..n)
        .map(|r| {
            let s: BigRational = (0..n)
                .map(|c| BigRational::from_integer(BigInt::from(a[r][c])) * &y[c])
                .sum();
            let v = s.to_integer().to_i64().expect("covector entry fits");
            match form.definiteness {
                Definiteness::Positive => v,
                Definiteness::Negative => -v,
            }
        })
        .collect();
    let value = value_at(&best_z);
    debug_assert_eq!(value, best * BigRational::from_integer(BigInt::from(4)));
    Ok(MinSquare {
        value,
        minimizer: CharCovector { alpha: minimizer },
        nodes,
    })
}

/// `A = Lᵀ D L` with `L` unit upper triangular, returned as `(L, D)`.
fn ldl(a: &[Vec<i64>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = a.len();
    let mut q = to_rational(a);
    // Completing squares from the first coordinate, so the last
    // coordinate's term stands alone and is fixed first.
    let mut upper = vec![vec![BigRational::zero(); n]; n];
    let mut diag = vec![BigRational::zero(); n];
    for k in 0..n {
        diag[k] = q[k][k].clone();
        upper[k][k] = BigRational::one();
        for l in k + 1..n {
            upper[k][l] = &q[k][l] / &diag[k];
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let t = &upper[k][r] * &upper[k][c] * &diag[k];
                q[r][c] -= t;
            }
        }
    }
    (upper, diag)
}

struct Search<'s> {
    upper: &'s [Vec<BigRational>],
    diag: &'s [BigRational],
    center: &'s [BigRational],
    nodes: &'s mut u64,
    limit: u64,
}

impl Search<'_> {
    /// Fixes coordinate `level - 1` given `z[level..]` and the partial sum.
    fn descend(
        &mut self,
        level: usize,
        partial: BigRational,
        z: &mut [BigInt],
        best: &mut BigRational,
        best_z: &mut [BigInt],
    ) -> Result<()> {
        if level == 0 {
            if partial < *best {
                *best = partial;
                best_z.clone_from_slice(z);
            }
            return Ok(());
        }
        let k = level - 1;
        // Coordinate k enters as (z_k - m)² D_k with m the shifted center.
        let mut m = self.center[k].clone();
        for l in k + 1..z.len() {
            let t = &self.upper[k][l] * (BigRational::from_integer(z[l].clone()) - &self.center[l]);
            m -= t;
        }
        let cost = |v: &BigInt| {
            let d = BigRational::from_integer(v.clone()) - &m;
            &d * &d * &self.diag[k]
        };
        let start = m.round().to_integer();
        let mut down = &start - 1;
        let mut up = &start + 1;
        let mut next = Some(start);
        while let Some(v) = next.take() {
            let total = &partial + cost(&v);
            if total < *best {
                *self.nodes += 1;
                if *self.nodes > self.limit {
                    return Err(FloerError::NodeLimit(self.limit));
                }
                z[k] = v;
                self.descend(k, total, z, best, best_z)?;
                z[k] = BigInt::zero();
            }
            // Cheaper frontier first; both sides grow monotonically in cost.
            let (cd, cu) = (&partial + cost(&down), &partial + cost(&up));
            if cd >= *best && cu >= *best {
                break;
            }
            if cd <= cu {
                next = Some(down.clone());
                down -= 1;
            } else {
                next = Some(up.clone());
                up += 1;
            }
        }
        Ok(())
    }
}

/// Smith normal form `U A V = D` with `U` and `U⁻¹` tracked.
struct Smith {
    diag: Vec<BigInt>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
}

fn smith(a: &[Vec<i64>]) -> Smith {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let identity = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let mut u = identity(n);
    let mut u_inv = identity(n);
    // Row r += f * row s (on m and u); inverse column update on u_inv.
    let add_row = |m: &mut Vec<Vec<BigInt>>,
                   u: &mut Vec<Vec<BigInt>>,
                   u_inv: &mut Vec<Vec<BigInt>>,
                   r: usize,
                   s: usize,
                   f: &BigInt| {
        for c in 0..n {
            let t = &m[s][c] * f;
            m[r][c] += t;
            let t = &u[s][c] * f;
            u[r][c] += t;
        }
        for row in u_inv.iter_mut() {
            let t = &row[r] * f;
            row[s] -= t;
        }
    };
    let swap_rows = |m: &mut Vec<Vec<BigInt>>,
                     u: &mut Vec<Vec<BigInt>>,
                     u_inv: &mut Vec<Vec<BigInt>>,
                     r: usize,
                     s: usize| {
        m.swap(r, s);
        u.swap(r, s);
        for row in u_inv.iter_mut() {
            row.swap(r, s);
        }
    };
    let add_col = |m: &mut Vec<Vec<BigInt>>, r: usize, s: usize, f: &BigInt| {
        for row in m.iter_mut() {
            let t = &row[s] * f;
            row[r] += t;
        }
    };
    for k in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block as pivot.
            let mut pivot = None;
            for r in k..n {
                for c in k..n {
                    if !m[r][c].is_zero()
                        && pivot
                            .is_none_or(|(pr, pc): (usize, usize)| m[r][c].abs() < m[pr][pc].abs())
                    {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else { break };
            swap_rows(&mut m, &mut u, &mut u_inv, k, pr);
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
            let mut clean = true;
            for r in k + 1..n {
                let q = m[r][k].div_floor(&m[k][k]);
                if !q.is_zero() {
                    add_row(&mut m, &mut u, &mut u_inv, r, k, &-q);
                }
                clean &= m[r][k].is_zero();
            }
            for c in k + 1..n {
                let q = m[k][c].div_floor(&m[k][k]);
                if !q.is_zero() {
                    add_col(&mut m, c, k, &-q);
                }
                clean &= m[k][c].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let bad = (k + 1..n)
                .flat_map(|r| (k + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !(&m[r][c] % &m[k][k]).is_zero());
            match bad {
                Some((r, _)) => add_row(&mut m, &mut u, &mut u_inv, k, r, &BigInt::one()),
                None => break,
            }
        }
        if m[k][k].is_negative() {
            for c in 0..n {
                m[k][c] = -m[k][c].clone();
                u[k][c] = -u[k][c].clone();
            }
            for row in u_inv.iter_mut() {
                row[k] = -row[k].clone();
            }
        }
    }
    Smith {
        diag: (0..n).map(|k| m[k][k].clone()).collect(),
        u,
        u_inv,
    }
}

/// Spin^c structures on the boundary, indexed by Smith coordinates.
///
/// Characteristic covectors differ by `2w`; the class of `α0 + 2w` is the
/// class of `w` in `ℤⁿ / A ℤⁿ`, whose Smith coordinates `(U w)_k mod d_k`
/// are read as a mixed-radix number. Index 0 is the self-conjugate class.
pub struct SpinCClasses {
    base: CharCovector,
    smith: Smith,
}

impl SpinCClasses {
    pub fn new(form: &IntersectionForm) -> Result<Self> {
        Ok(SpinCClasses {
            base: self_conjugate_class(form)?,
            smith: smith(&form.matrix),
        })
    }

    pub fn count(&self) -> BigInt {
        self.smith.diag.iter().product::<BigInt>().abs()
    }

    /// A covector in class `index`.
    pub fn representative(&self, index: u64) -> Result<CharCovector> {
        if BigInt::from(index) >= self.count() {
            return Err(FloerError::Other(format!(
                "Spin^c index {index} out of range 0..{}",
                self.count()
            )));
        }
        let n = self.base.alpha.len();
        let mut rest = BigInt::from(index);
        let mut coords = vec![BigInt::zero(); n];
        for k in (0..n).rev() {
            let d = &self.smith.diag[k];
            if d.abs() > BigInt::one() {
                let (q, r) = rest.div_mod_floor(d);
                coords[k] = r;
                rest = q;
            }
        }
        let w: Vec<BigInt> = (0..n)
            .map(|r| (0..n).map(|c| &self.smith.u_inv[r][c] * &coords[c]).sum())
            .collect();
        let alpha = (0..n)
            .map(|k| {
                (BigInt::from(self.base.alpha[k]) + BigInt::from(2) * &w[k])
                    .to_i64()
                    .ok_or(FloerError::Other("covector overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CharCovector { alpha })
    }

    /// Index of the class of a characteristic covector.
    pub fn index_of(&self, alpha: &CharCovector) -> Result<u64> {
        let n = self.base.alpha.len();
        let w: Vec<BigInt> = (0..n)
            .map(|k| BigInt::from((alpha.alpha[k] - self.base.alpha[k]) / 2))
            .collect();
        let mut index = BigInt::zero();
        for k in 0..n {
            let d = self.smith.diag[k].abs();
            if d > BigInt::one() {
                let coord: BigInt = (0..n)
                    .map(|c| &self.smith.u[k][c] * &w[c])
                    .sum::<BigInt>()
                    .mod_floor(&d);
                index = index * &d + coord;
            }
        }
        index
            .to_u64()
            .ok_or(FloerError::Other("index overflow".into()))
    }
}

/// Which Spin^c structure to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinC {
    SelfConjugate,
    Index(u64),
}

/// d-invariant of the boundary of the plumbing. Input graphs are read as
/// positive-definite fillings; negative-definite forms use the dual formula.
pub fn d_plumbing(graph: &PlumbingGraph, spinc: SpinC) -> Result<Ratio<i64>> {
    let form = analyze(graph)?;
    let class = match spinc {
        SpinC::SelfConjugate => self_conjugate_class(&form)?,
        SpinC::Index(k) => SpinCClasses::new(&form)?.representative(k)?,
    };
    d_of_class(&form, &class)
}

pub fn d_of_class(form: &IntersectionForm, class: &CharCovector) -> Result<Ratio<i64>> {
    let best = min_square(form, class)?;
    // For negative-definite forms the enumeration ran on -A, so `value` is
    // the minimum of -α², and d = max (α² + n)/4 = -(min(-α²) - n)/4.
    let n = BigRational::from_integer(BigInt::from(form.rank()));
    let four = BigRational::from_integer(BigInt::from(4));
    let positive_d = (&best.value - n) / four;
    let d = match form.definiteness {
        Definiteness::Positive => positive_d,
        Definiteness::Negative => -positive_d,
    };
    small_ratio(&d)
}

fn small_ratio(r: &BigRational) -> Result<Ratio<i64>> {
    let p = r
        .numer()
        .to_i64()
        .ok_or(FloerError::Other("numerator overflow".into()))?;
    let q = r
        .denom()
        .to_i64()
        .ok_or(FloerError::Other("denominator overflow".into()))?;
    Ok(Ratio::new(p, q))
}

/// `(d(M_j, 𝔰₀), V₀(J_j), θ(Y_j, K_j))` for the family `Γ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub j: i64,
    #[serde(serialize_with = "crate::ratio_string")]
    pub d: Ratio<i64>,
    pub v0: i64,
    pub theta: i64,
}

/// d of the plumbed boundary in the self-conjugate structure, then
/// `V₀ = (j/2 - d)/2` and `θ = 2 V₀`.
pub fn gamma_report(j: i64) -> Result<GammaReport> {
    let d = d_plumbing(&gamma_j(j)?, SpinC::SelfConjugate)?;
    if (d * 2).denom() != &1 {
        return Err(FloerError::Other(format!("d = {d} is not a half-integer")));
    }
    let v0 = (Ratio::new(j, 2) - d) / 2;
    if !v0.is_integer() {
        return Err(FloerError::Other(format!("V0 = {v0} is not an integer")));
    }
    let v0 = v0.to_integer();
    Ok(GammaReport {
        j,
        d,
        v0,
        theta: 2 * v0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(weight: i64) -> PlumbingGraph {
        PlumbingGraph {
            vertices: vec![Vertex {
                name: "v".into(),
                weight,
            }],
            edges: vec![],
        }
    }

    /// Negative-definite E8: a chain of seven with a branch at the third.
    pub(crate) fn e8(weight: i64) -> PlumbingGraph {
        let names: Vec<String> = (1..=8).map(|k| format!("e{k}")).collect();
        let mut edges: Vec<(String, String)> = (0..6)
            .map(|k| (names[k].clone(), names[k + 1].clone()))
            .collect();
        edges.push((names[2].clone(), names[7].clone()));
        PlumbingGraph {
            vertices: names
                .iter()
                .map(|n| Vertex {
                    name: n.clone(),
                    weight,
                })
                .collect(),
            edges,
        }
    }

    #[test]
    fn gamma_one_shape() {
        let g = gamma_j(1).unwrap();
        let weights: Vec<i64> = g.vertices.iter().map(|v| v.weight).collect();
        assert_eq!(weights, vec![3, 2, 2, 2, 2, 2, 2]);
        let edges: Vec<String> = g
            .edges
            .iter()
            .map(|(a, b)| format!("{}{}", &a[1..], &b[1..]))
            .collect();
        assert_eq!(edges, vec!["12", "23", "34", "45", "36", "67"]);
        let form = analyze(&g).unwrap();
        assert_eq!(form.definiteness, Definiteness::Positive);
        assert_eq!(form.bad_vertices, vec!["v3".to_string()]);
        assert_eq!(form.det, BigInt::from(3));
    }

    #[test]
    fn gamma_j_sizes() {
        for j in 1..=6 {
            let g = gamma_j(j).unwrap();
            assert_eq!(g.vertices.len() as i64, 2 * j + 5);
            assert_eq!(g.edges.len() as i64, 2 * j + 4);
            assert_eq!(analyze(&g).unwrap().det.abs(), BigInt::from(2 * j + 1));
        }
        let g2 = gamma_j(2).unwrap();
        assert_eq!((g2.vertices[0].weight, g2.vertices[4].weight), (4, 3));
    }

    #[test]
    fn single_vertices() {
        let form = analyze(&single(1)).unwrap();
        assert_eq!(form.det, BigInt::one());
        assert_eq!(
            min_square(&form, &self_conjugate_class(&form).unwrap())
                .unwrap()
                .value,
            BigRational::one()
        );
        assert_eq!(analyze(&single(0)).unwrap_err(), FloerError::Indefinite);
        // Both 0 = A·0 and 2 = A·1 are conjugation-fixed when det is even.
        let form = analyze(&single(2)).unwrap();
        let alpha = self_conjugate_class(&form).unwrap();
        assert!(alpha.is_characteristic(&form));
        assert!(solve_rational(&form.matrix, &alpha.alpha)
            .unwrap()
            .iter()
            .all(|x| x.is_integer()));
        let negated: Vec<i64> = alpha.alpha.iter().map(|a| -a).collect();
        assert!(same_class(&form, &alpha.alpha, &negated).unwrap());
    }

    #[test]
    fn graph_errors() {
        let mut g = gamma_j(1).unwrap();
        g.edges.push(("v1".into(), "v7".into()));
        assert!(matches!(analyze(&g), Err(FloerError::Graph(_))));
        let mut g = gamma_j(1).unwrap();
        g.edges[0] = ("v1".into(), "v1".into());
        assert!(matches!(analyze(&g), Err(FloerError::Graph(_))));
        // Two bad vertices: a star with two trivalent centres of weight 2.
        let names = ["a", "b", "c", "d", "e", "f"];
        let g = PlumbingGraph {
            vertices: names
                .iter()
                .map(|n| Vertex {
                    name: n.to_string(),
                    weight: 2,
                })
                .collect(),
            edges: [("a", "b"), ("a", "c"), ("a", "d"), ("d", "e"), ("d", "f")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        };
        assert!(matches!(
            analyze(&g),
            Err(FloerError::Graph(_)) | Err(FloerError::Indefinite)
        ));
    }

    #[test]
    fn self_conjugate_classes_of_the_family() {
        for j in 1..=4 {
            let form = analyze(&gamma_j(j).unwrap()).unwrap();
            let alpha = self_conjugate_class(&form).unwrap();
            assert!(alpha.is_characteristic(&form));
            let n = form.rank();
            let mut expected = vec![0; n];
            if j % 2 == 1 {
                expected[0] = 1;
            } else {
                expected[4] = -1;
                expected[n - 1] = 2;
            }
            assert!(
                same_class(&form, &alpha.alpha, &expected).unwrap(),
                "j = {j}"
            );
        }
    }

    #[test]
    fn minimal_squares_of_the_family() {
        let form = analyze(&gamma_j(1).unwrap()).unwrap();
        let best = min_square(&form, &self_conjugate_class(&form).unwrap()).unwrap();
        assert_eq!(best.value, BigRational::one());
        assert!(best.minimizer.is_characteristic(&form));
        let form = analyze(&gamma_j(2).unwrap()).unwrap();
        let class = self_conjugate_class(&form).unwrap();
        let best = min_square(&form, &class).unwrap();
        assert_eq!(best.value, BigRational::from_integer(5.into()));
        assert!(same_class(&form, &best.minimizer.alpha, &class.alpha).unwrap());
        assert_eq!(square(&form, &best.minimizer.alpha).unwrap(), best.value);
    }

    #[test]
    fn node_limit_is_reported() {
        let form = analyze(&gamma_j(3).unwrap()).unwrap();
        let class = self_conjugate_class(&form).unwrap();
        assert_eq!(
            min_square_with_limit(&form, &class, 2).unwrap_err(),
            FloerError::NodeLimit(2)
        );
    }

    #[test]
    fn e8_orientations() {
        let g = e8(-2);
        let form = analyze(&g).unwrap();
        assert_eq!(form.definiteness, Definiteness::Negative);
        assert_eq!(form.det, BigInt::one());
        assert_eq!(
            d_plumbing(&g, SpinC::SelfConjugate).unwrap(),
            Ratio::from_integer(2)
        );
        assert_eq!(
            d_plumbing(&g.reversed(), SpinC::SelfConjugate).unwrap(),
            Ratio::from_integer(-2)
        );
    }

    #[test]
    fn family_closed_forms() {
        for j in 1..=4 {
            let r = gamma_report(j).unwrap();
            let expected = if j % 2 == 1 {
                Ratio::new(-j, 2) - 1
            } else {
                Ratio::new(-j, 2)
            };
            assert_eq!(r.d, expected, "j = {j}");
            assert_eq!(r.v0, (j + 1) / 2);
            assert_eq!(r.theta, 2 * r.v0);
        }
    }

    #[test]
    fn class_indexing_round_trips() {
        for j in 1..=3 {
            let form = analyze(&gamma_j(j).unwrap()).unwrap();
            let classes = SpinCClasses::new(&form).unwrap();
            let count = classes.count().to_u64().unwrap();
            assert_eq!(BigInt::from(count), form.det.abs());
            let reps: Vec<CharCovector> = (0..count)
                .map(|k| classes.representative(k).unwrap())
                .collect();
            assert!(same_class(
                &form,
                &reps[0].alpha,
                &self_conjugate_class(&form).unwrap().alpha
            )
            .unwrap());
            for (k, r) in reps.iter().enumerate() {
                assert!(r.is_characteristic(&form));
                assert_eq!(classes.index_of(r).unwrap(), k as u64);
                for other in &reps[k + 1..] {
                    assert!(!same_class(&form, &r.alpha, &other.alpha).unwrap());
                }
            }
        }
    }
}
