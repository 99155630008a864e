//! Shipped fixtures.
//!
//! | name     | complex                                                        |
//! |----------|----------------------------------------------------------------|
//! | `unknot` | one generator                                                  |
//! | `t23`    | staircase of the right-handed trefoil                          |
//! | `t-23`   | its dual (left-handed trefoil)                                 |
//! | `fig8`   | figure-eight knot: a box plus an isolated generator            |
//! | `cable`  | (2,3)-cable of the left-handed trefoil, with its flip map      |
//! | `table1` | reduced complex of the core of +1-surgery on the cable         |
//!
//! The cable is entered as drawn in the plane: each generator at a cell
//! `(i, j)` with the Maslov grading of that cell. [`from_drawn`] pins every
//! generator to `i = 0`. The hat column `C{i = 0}` of the cable therefore
//! uses the same letters but different translates than the drawing.

use crate::complex::{BifilteredComplex, DiffEntry, Generator};
use crate::error::{FloerError, Result};
use crate::surgery::{FlipEntry, FlipMap};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub complex: BifilteredComplex,
    pub flip: Option<FlipMap>,
}

const NAMES: [&str; 6] = ["unknot", "t23", "t-23", "fig8", "cable", "table1"];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

/// A generator drawn at cell `(i, j)` with the Maslov grading of that cell.
#[derive(Clone, Copy, Debug)]
pub struct DrawnCell {
    pub name: &'static str,
    pub i: i64,
    pub j: i64,
    pub maslov: i64,
}

const fn cell(name: &'static str, i: i64, j: i64, maslov: i64) -> DrawnCell {
    DrawnCell { name, i, j, maslov }
}

/// Builds a complex from generators drawn in the plane and arrows between
/// drawn cells. A generator drawn at `(i, j)` is `U^{-i}` times its pinned
/// representative, which has alexander `j - i` and maslov `maslov - 2i`.
pub fn from_drawn(cells: &[DrawnCell], arrows: &[(&str, &str)]) -> Result<BifilteredComplex> {
    let find = |name: &str| {
        cells
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| FloerError::DanglingEndpoint(name.to_string()))
    };
    let generators = cells
        .iter()
        .map(|c| Generator::new(c.name, c.j - c.i, c.maslov - 2 * c.i))
        .collect();
    let differential = arrows
        .iter()
        .map(|&(x, y)| Ok(DiffEntry::new(x, y, find(x)?.i - find(y)?.i)))
        .collect::<Result<Vec<_>>>()?;
    BifilteredComplex::with_computed_genus(generators, differential)
}

/// A grading-preserving map sending each drawn cell to another drawn cell.
pub fn flip_from_drawn(cells: &[DrawnCell], pairs: &[(&str, &str)]) -> Result<FlipMap> {
    let find = |name: &str| {
        cells
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| FloerError::DanglingEndpoint(name.to_string()))
    };
    let entries = pairs
        .iter()
        .map(|&(x, y)| Ok(FlipEntry::new(x, y, find(x)?.i - find(y)?.i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlipMap { entries })
}

/// A staircase with alternating horizontal and vertical step lengths
/// `[h1, v1, h2, v2, ...]`, starting at the top-left corner. Gradings are
/// shifted so the d-invariant of the ambient manifold is zero.
pub fn staircase(steps: &[i64]) -> Result<BifilteredComplex> {
    if !steps.len().is_multiple_of(2) || steps.iter().any(|&s| s < 1) {
        return Err(FloerError::Other(
            "staircase needs an even number of positive steps".into(),
        ));
    }
    let height: i64 = steps.iter().skip(1).step_by(2).sum();
    let mut generators = vec![Generator::new("x0", height, 0)];
    let mut differential = Vec::new();
    let (mut i, mut j) = (0, height);
    for (k, pair) in steps.chunks(2).enumerate() {
        let (h, v) = (pair[0], pair[1]);
        let (prev, y, x) = (
            format!("x{k}"),
            format!("y{}", k + 1),
            format!("x{}", k + 1),
        );
        // y sits `h` to the right of the previous corner, x sits `v` below y.
        i += h;
        generators.push(Generator::new(y.clone(), j - i, 1 - 2 * i));
        differential.push(DiffEntry::new(y.clone(), prev, h));
        j -= v;
        generators.push(Generator::new(x.clone(), j - i, -2 * i));
        differential.push(DiffEntry::new(y, x, 0));
    }
    let c = BifilteredComplex::with_computed_genus(generators.clone(), differential.clone())?;
    let d = crate::flavors::d_invariant(&c)?;
    let shifted = generators
        .into_iter()
        .map(|g| Generator::new(g.name, g.alexander, g.maslov - d))
        .collect();
    Ok(BifilteredComplex::with_computed_genus(shifted, differential)?.flagged_reduced(true))
}

const CABLE_CELLS: [DrawnCell; 11] = [
    cell("a", 0, 0, 0),
    cell("b", -1, 0, -1),
    cell("c", -1, 2, 0),
    cell("d", 0, 2, 1),
    cell("e", 0, 1, 0),
    cell("f", 1, 1, 1),
    cell("g", 1, 0, 0),
    cell("h", 2, 0, 1),
    cell("i", 2, -1, 0),
    cell("j", 0, -1, -1),
    cell("k", 0, 0, 0),
];

const CABLE_ARROWS: [(&str, &str); 14] = [
    ("a", "b"),
    ("c", "b"),
    ("d", "c"),
    ("d", "e"),
    ("f", "e"),
    ("f", "g"),
    ("h", "g"),
    ("h", "i"),
    ("i", "j"),
    ("k", "j"),
    ("e", "b"),
    ("f", "a"),
    ("f", "k"),
    ("g", "j"),
];

/// Fixes `f` and exchanges `a↔k`, `b↔j`, `c↔i`, `d↔h`, `e↔g`.
const CABLE_FLIP: [(&str, &str); 11] = [
    ("a", "k"),
    ("k", "a"),
    ("b", "j"),
    ("j", "b"),
    ("c", "i"),
    ("i", "c"),
    ("d", "h"),
    ("h", "d"),
    ("e", "g"),
    ("g", "e"),
    ("f", "f"),
];

fn pinned(gens: &[(&str, i64, i64)], arrows: &[(&str, &str, i64)]) -> BifilteredComplex {
    BifilteredComplex::with_computed_genus(
        gens.iter()
            .map(|&(n, a, m)| Generator::new(n, a, m))
            .collect(),
        arrows
            .iter()
            .map(|&(x, y, k)| DiffEntry::new(x, y, k))
            .collect(),
    )
    .expect("fixture is well formed")
    .flagged_reduced(true)
}

fn trefoil() -> BifilteredComplex {
    pinned(
        &[("a", 1, 0), ("b", 0, -1), ("c", -1, -2)],
        &[("b", "a", 1), ("b", "c", 0)],
    )
}

/// Exchanges the two ends of the staircase; `sign` is -1 for the dual.
fn trefoil_flip(sign: i64) -> FlipMap {
    FlipMap {
        entries: vec![
            FlipEntry::new("a", "c", -sign),
            FlipEntry::new("b", "b", 0),
            FlipEntry::new("c", "a", sign),
        ],
    }
}

pub fn get(name: &str) -> Result<Fixture> {
    let fixture = match name {
        "unknot" => Fixture {
            name: "unknot",
            description: "unknot in S^3",
            complex: pinned(&[("x", 0, 0)], &[]),
            flip: Some(FlipMap {
                entries: vec![FlipEntry::new("x", "x", 0)],
            }),
        },
        "t23" => Fixture {
            name: "t23",
            description: "right-handed trefoil T(2,3) in S^3 (staircase 1,1)",
            complex: trefoil(),
            flip: Some(trefoil_flip(1)),
        },
        "t-23" => Fixture {
            name: "t-23",
            description: "left-handed trefoil T(2,-3) in S^3 (dual staircase)",
            complex: trefoil().dualize(),
            flip: Some(trefoil_flip(-1)),
        },
        "fig8" => Fixture {
            name: "fig8",
            description: "figure-eight knot in S^3: a square plus an isolated generator",
            complex: pinned(
                &[
                    ("a", 0, 0),
                    ("B", 1, 1),
                    ("c", -1, -1),
                    ("E", 0, 0),
                    ("x", 0, 0),
                ],
                &[("a", "B", 1), ("a", "c", 0), ("B", "E", 0), ("c", "E", 1)],
            ),
            flip: None,
        },
        "cable" => Fixture {
            name: "cable",
            description: "(2,3)-cable of the left-handed trefoil in S^3, genus 3",
            complex: from_drawn(&CABLE_CELLS, &CABLE_ARROWS)
                .expect("fixture is well formed")
                .flagged_reduced(true),
            flip: Some(flip_from_drawn(&CABLE_CELLS, &CABLE_FLIP).expect("fixture is well formed")),
        },
        "table1" => Fixture {
            name: "table1",
            description: "reduced complex of the core of +1-surgery on the cable fixture",
            complex: pinned(
                &[
                    ("A", 3, 8),
                    ("B", 2, 7),
                    ("C", 1, 3),
                    ("D", 1, 2),
                    ("E", 1, 1),
                    ("F", 1, 0),
                    ("G", 0, 0),
                    ("H", -1, 1),
                    ("I", -1, 0),
                    ("J", -1, -1),
                    ("K", -1, -2),
                    ("L", -2, 3),
                    ("M", -3, 2),
                ],
                &[
                    ("A", "B", 0),
                    ("D", "C", 1),
                    ("F", "E", 1),
                    ("G", "J", 0),
                    ("G", "E", 1),
                    ("I", "H", 1),
                    ("K", "J", 1),
                    ("M", "L", 1),
                ],
            ),
            flip: None,
        },
        other => return Err(FloerError::UnknownFixture(other.to_string())),
    };
    Ok(fixture)
}

/// Every fixture, in listing order.
pub fn all() -> Vec<Fixture> {
    NAMES
        .iter()
        .map(|n| get(n).expect("listed fixture exists"))
        .collect()
}
