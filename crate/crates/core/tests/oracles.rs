#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use floerkit::catalog;
use floerkit::plumbing::{self, IntersectionForm};
use floerkit::surgery;
use num_rational::Ratio;

type Q = Ratio<i64>;

/// Inverse of a small integer matrix by Gauss–Jordan over `Ratio<i64>`.
fn inverse(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            v.extend((0..n).map(|c| Q::from_integer(i64::from(r == c))));
            v
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| a[r][k] != Q::from_integer(0))
            .expect("nonsingular");
        a.swap(p, k);
        let pivot = a[k][k];
        for c in 0..2 * n {
            a[k][c] /= pivot;
        }
        for r in 0..n {
            if r != k {
                let f = a[r][k];
                for c in 0..2 * n {
                    let t = f * a[k][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn quad(m: &[Vec<Q>], v: &[Q]) -> Q {
    let mut s = Q::from_integer(0);
    for r in 0..v.len() {
        for c in 0..v.len() {
            s += v[r] * m[r][c] * v[c];
        }
    }
    s
}

/// All vectors in `{-radius..=radius}^n`.
fn box_points(n: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as u64;
    (0..side.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % side) as i64 - radius;
                code /= side;
                d
            })
            .collect()
    })
}

/// Brute-force minimum of `(α0 + 2Az)ᵀ A⁻¹ (α0 + 2Az)` over a box of `z`.
fn brute_min(form: &IntersectionForm, alpha0: &[i64], radius: i64) -> Q {
    let inv = inverse(&form.matrix);
    let n = form.rank();
    box_points(n, radius)
        .map(|z| {
            let alpha: Vec<Q> = (0..n)
                .map(|r| {
                    Q::from_integer(
                        alpha0[r] + 2 * (0..n).map(|c| form.matrix[r][c] * z[c]).sum::<i64>(),
                    )
                })
                .collect();
            quad(&inv, &alpha)
        })
        .min()
        .unwrap()
}

#[test]
fn enumeration_matches_brute_force_on_the_family() {
    // The box holds a minimizer for j = 1, 2; for j = 3 it only bounds the
    // minimum from above.
    for (j, radius, exact) in [(1, 2, true), (2, 1, true), (3, 1, false)] {
        let form = plumbing::analyze(&plumbing::gamma_j(j).unwrap()).unwrap();
        let class = plumbing::self_conjugate_class(&form).unwrap();
        let best = plumbing::min_square(&form, &class).unwrap();
        let value: Q = best.value.to_string().parse().unwrap();
        let oracle = brute_min(&form, &class.alpha, radius);
        if exact {
            assert_eq!(value, oracle, "j = {j}");
        } else {
            assert!(value <= oracle, "j = {j}");
        }
    }
}

#[test]
fn e8_exhaustive_oracle() {
    // Negative-definite E8: d = max (α² + 8)/4 over even α, α² <= 0.
    let names: Vec<String> = (1..=8).map(|k| format!("e{k}")).collect();
    let mut edges: Vec<(String, String)> = (0..6)
        .map(|k| (names[k].clone(), names[k + 1].clone()))
        .collect();
    edges.push((names[2].clone(), names[7].clone()));
    let graph = plumbing::PlumbingGraph {
        vertices: names
            .iter()
            .map(|n| plumbing::Vertex {
                name: n.clone(),
                weight: -2,
            })
            .collect(),
        edges,
    };
    let form = plumbing::analyze(&graph).unwrap();
    let inv = inverse(&form.matrix);
    let oracle = box_points(8, 1)
        .map(|half| {
            let alpha: Vec<Q> = half.iter().map(|&h| Q::from_integer(2 * h)).collect();
            (quad(&inv, &alpha) + 8) / 4
        })
        .max()
        .unwrap();
    assert_eq!(oracle, Q::from_integer(2));
    let d = plumbing::d_plumbing(&graph, plumbing::SpinC::SelfConjugate).unwrap();
    assert_eq!(d, oracle);
    assert_eq!(
        plumbing::d_plumbing(&graph.reversed(), plumbing::SpinC::SelfConjugate).unwrap(),
        -oracle
    );
}

#[test]
fn minimizers_are_certified() {
    for j in 1..=6 {
        let form = plumbing::analyze(&plumbing::gamma_j(j).unwrap()).unwrap();
        let class = plumbing::self_conjugate_class(&form).unwrap();
        let best = plumbing::min_square(&form, &class).unwrap();
        assert!(best.minimizer.is_characteristic(&form));
        assert!(plumbing::same_class(&form, &best.minimizer.alpha, &class.alpha).unwrap());
        let inv = inverse(&form.matrix);
        let alpha: Vec<Q> = best
            .minimizer
            .alpha
            .iter()
            .map(|&a| Q::from_integer(a))
            .collect();
        assert_eq!(
            quad(&inv, &alpha).to_string(),
            best.value.to_string(),
            "j = {j}"
        );
    }
}

#[test]
fn family_closed_forms_through_six() {
    for j in 1..=6 {
        let r = plumbing::gamma_report(j).unwrap();
        let expected = if j % 2 == 1 {
            Q::new(-j, 2) - 1
        } else {
            Q::new(-j, 2)
        };
        assert_eq!(r.d, expected, "j = {j}");
        assert_eq!(r.v0, (j + 1) / 2);
        assert_eq!(r.theta, 2 * ((j + 1) / 2));
    }
}

#[test]
fn class_count_equals_determinant() {
    for j in 1..=4 {
        let form = plumbing::analyze(&plumbing::gamma_j(j).unwrap()).unwrap();
        let classes = plumbing::SpinCClasses::new(&form).unwrap();
        assert_eq!(
            classes.count().to_string(),
            form.det.to_string().trim_start_matches('-')
        );
    }
}

#[test]
fn reduction_agrees_on_the_region_grid() {
    let compared = check_reduction_grid().unwrap();
    assert!(compared >= 20 * catalog::names().len());
}

#[test]
fn computed_core_matches_fixture_on_the_region_grid() {
    let cable = catalog::get("cable").unwrap();
    let core = surgery::core_complex(&cable.complex, cable.flip.as_ref().unwrap()).unwrap();
    let fixture = catalog::get("table1").unwrap().complex;
    for (k, region) in region_grid().iter().enumerate() {
        let a = core
            .subquotient(region, GRID_WINDOW)
            .unwrap()
            .homology_ranks();
        let b = fixture
            .subquotient(region, GRID_WINDOW)
            .unwrap()
            .homology_ranks();
        assert_eq!(a, b, "region {k}");
    }
}

#[test]
fn both_cone_ranges_agree() {
    for (name, c, phi) in probed().unwrap() {
        let g = c.max_abs_alexander().max(1);
        let a = surgery::core_complex_with_range(&c, &phi, (1 - g, g)).unwrap();
        let b = surgery::core_complex_with_range(&c, &phi, (-g, g + 1)).unwrap();
        assert_eq!(report(&a).unwrap(), report(&b).unwrap(), "{name}");
        for region in region_grid() {
            assert_eq!(
                a.subquotient(&region, GRID_WINDOW)
                    .unwrap()
                    .homology_ranks(),
                b.subquotient(&region, GRID_WINDOW)
                    .unwrap()
                    .homology_ranks(),
                "{name}"
            );
        }
        surgery::check_truncation(&c, &phi).unwrap();
    }
}
