//! Checks shared by the property, oracle and acceptance targets. Each
//! returns the first counterexample as an error string.
#![allow(dead_code)]

use floerkit::catalog;
use floerkit::complex::{BifilteredComplex, ConvexRegion, HalfPlane};
use floerkit::concordance::{self, InvariantReport};
use floerkit::flavors;
use floerkit::plumbing;
use floerkit::reduction::reduce;
use floerkit::surgery::{self, FlipMap};
use num_rational::Ratio;

pub type Check = Result<(), String>;

#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn fixtures() -> Vec<(String, BifilteredComplex)> {
    catalog::all()
        .into_iter()
        .map(|f| (f.name.to_string(), f.complex))
        .collect()
}

/// Every fixture and every tensor of two fixtures (unordered, with repeats).
pub fn fixtures_and_tensors() -> Vec<(String, BifilteredComplex)> {
    let base = fixtures();
    let mut out = base.clone();
    for (k, (a, ca)) in base.iter().enumerate() {
        for (b, cb) in &base[k..] {
            out.push((
                format!("{a}#{b}"),
                ca.tensor(cb).expect("tensor of fixtures"),
            ));
        }
    }
    out
}

pub const UPSILON_DENOMINATOR: i64 = 4;

pub fn report(c: &BifilteredComplex) -> Result<InvariantReport, String> {
    concordance::invariants(c, UPSILON_DENOMINATOR).map_err(|e| e.to_string())
}

/// τ and Υ are additive under tensor product and change sign under duality.
pub fn check_tau_upsilon() -> Check {
    let base = fixtures();
    let reports: Vec<InvariantReport> = base
        .iter()
        .map(|(_, c)| report(c))
        .collect::<Result<_, _>>()?;
    for (k, (a, ca)) in base.iter().enumerate() {
        let ra = &reports[k];
        let dual = report(&ca.dualize())?;
        ensure!(
            dual.tau == -ra.tau,
            "{a}: tau(dual) = {} but tau = {}",
            dual.tau,
            ra.tau
        );
        for ((t, u), (_, v)) in ra.upsilon.iter().zip(&dual.upsilon) {
            ensure!(*v == -u, "{a}: upsilon_dual({t}) = {v}, upsilon = {u}");
        }
        let genus = Ratio::from_integer(ca.max_abs_alexander());
        for (t, u) in &ra.upsilon {
            if *t <= Ratio::from_integer(1) {
                ensure!(
                    *u <= t * genus && -u <= t * genus,
                    "{a}: |upsilon({t})| = {u} exceeds t*g"
                );
            }
            let mirror = ra
                .upsilon
                .iter()
                .find(|(s, _)| *s == Ratio::from_integer(2) - t)
                .expect("grid is symmetric");
            ensure!(mirror.1 == *u, "{a}: upsilon not symmetric about t = 1");
        }
        for (l, (b, cb)) in base.iter().enumerate().skip(k) {
            let rb = &reports[l];
            let rt = report(&ca.tensor(cb).map_err(|e| e.to_string())?)?;
            ensure!(
                rt.tau == ra.tau + rb.tau,
                "tau({a}#{b}) = {} != {} + {}",
                rt.tau,
                ra.tau,
                rb.tau
            );
            for ((t, u), ((_, x), (_, y))) in
                rt.upsilon.iter().zip(ra.upsilon.iter().zip(&rb.upsilon))
            {
                ensure!(*u == x + y, "upsilon({a}#{b})({t}) = {u} != {x} + {y}");
            }
        }
    }
    Ok(())
}

/// ε(dual) = -ε; equal signs persist under sums; ε = 0 is neutral.
pub fn check_epsilon_rules() -> Check {
    let base = fixtures();
    for (k, (a, ca)) in base.iter().enumerate() {
        let ea = concordance::epsilon(ca).map_err(|e| e.to_string())?;
        let ed = concordance::epsilon(&ca.dualize()).map_err(|e| e.to_string())?;
        ensure!(ed == -ea, "{a}: epsilon(dual) = {ed}, epsilon = {ea}");
        for (b, cb) in &base[k..] {
            let eb = concordance::epsilon(cb).map_err(|e| e.to_string())?;
            let et = concordance::epsilon(&ca.tensor(cb).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if ea == eb {
                ensure!(
                    et == ea,
                    "epsilon({a}#{b}) = {et} but both summands have {ea}"
                );
            }
            if ea == 0 {
                ensure!(
                    et == eb,
                    "epsilon({a}#{b}) = {et} but {a} has epsilon 0 and {b} has {eb}"
                );
            }
            if eb == 0 {
                ensure!(
                    et == ea,
                    "epsilon({a}#{b}) = {et} but {b} has epsilon 0 and {a} has {ea}"
                );
            }
        }
    }
    Ok(())
}

/// ν ∈ {τ, τ+1}, ν′ ∈ {τ-1, τ}, ν(dual) = -ν′, and ε = 0 forces τ = 0 when
/// the reduced part vanishes.
pub fn check_nu_rules() -> Check {
    for (name, c) in fixtures_and_tensors() {
        let r = report(&c)?;
        ensure!(
            r.nu == r.tau || r.nu == r.tau + 1,
            "{name}: nu = {}, tau = {}",
            r.nu,
            r.tau
        );
        ensure!(
            r.nu_prime == r.tau || r.nu_prime == r.tau - 1,
            "{name}: nu' = {}, tau = {}",
            r.nu_prime,
            r.tau
        );
        let nu_dual = concordance::nu(&c.dualize()).map_err(|e| e.to_string())?;
        ensure!(
            nu_dual == -r.nu_prime,
            "{name}: nu(dual) = {nu_dual}, nu' = {}",
            r.nu_prime
        );
        if r.epsilon == 0 && r.n_invariant == 0 {
            ensure!(
                r.tau == 0,
                "{name}: epsilon = 0 and N = 0 but tau = {}",
                r.tau
            );
        }
    }
    Ok(())
}

/// N of a tensor is the larger of the two N's.
pub fn check_tensor_n() -> Check {
    let base = fixtures();
    for (k, (a, ca)) in base.iter().enumerate() {
        for (b, cb) in &base[k..] {
            let na = flavors::n_invariant(ca).map_err(|e| e.to_string())?;
            let nb = flavors::n_invariant(cb).map_err(|e| e.to_string())?;
            let nt = flavors::n_invariant(&ca.tensor(cb).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure!(nt == na.max(nb), "N({a}#{b}) = {nt}, summands {na}, {nb}");
        }
    }
    Ok(())
}

/// Complexes with a flip map: the shipped ones plus those found by search.
pub fn probed() -> Result<Vec<(String, BifilteredComplex, FlipMap)>, String> {
    catalog::all()
        .into_iter()
        .map(|f| {
            let phi = match f.flip {
                Some(phi) => phi,
                None => surgery::find_flip(&f.complex).map_err(|e| format!("{}: {e}", f.name))?,
            };
            Ok((f.name.to_string(), f.complex, phi))
        })
        .collect()
}

pub const PROBE_MAX_N: i64 = 5;

/// θ vanishes in S³, θ <= 2N, and each d(Y_{1/n}) lies in
/// `[d - 2V₀ - 2N, d - 2V₀]`.
pub fn check_theta() -> Check {
    for (name, c, phi) in probed()? {
        let tower = flavors::tower_report(&c).map_err(|e| e.to_string())?;
        let v0 = concordance::v0(&c).map_err(|e| e.to_string())?;
        let probe = surgery::theta_probe(&c, &phi, PROBE_MAX_N).map_err(|e| e.to_string())?;
        let n = i64::from(tower.n_invariant);
        if tower.d == 0 && n == 0 {
            ensure!(
                probe.theta == 0,
                "{name}: theta = {} in the three-sphere",
                probe.theta
            );
        }
        ensure!(
            probe.theta <= 2 * n,
            "{name}: theta = {} > 2N = {}",
            probe.theta,
            2 * n
        );
        for (k, d) in &probe.d_values {
            let top = tower.d - 2 * v0;
            ensure!(
                top - 2 * n <= *d && *d <= top,
                "{name}: d(1/{k}) = {d} outside [{}, {top}]",
                top - 2 * n
            );
        }
    }
    Ok(())
}

/// α² ≡ 5 (mod 8) on the self-conjugate class of Γ_j for even `j`, over
/// `samples` covectors `α₀ + 2A z` with `z` in a deterministic box walk.
pub fn check_mod8(samples: usize) -> Check {
    for j in [2i64, 4, 6] {
        let form = plumbing::analyze(&plumbing::gamma_j(j).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let base = plumbing::self_conjugate_class(&form).map_err(|e| e.to_string())?;
        let n = form.rank();
        for s in 0..samples {
            // Mixed walk over z in {-1, 0, 1}ⁿ.
            let mut code = s * 7919 + 17;
            let z: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (code % 3) as i64 - 1;
                    code /= 3;
                    d
                })
                .collect();
            let alpha: Vec<i64> = (0..n)
                .map(|r| base.alpha[r] + 2 * (0..n).map(|c| form.matrix[r][c] * z[c]).sum::<i64>())
                .collect();
            let sq = plumbing::square(&form, &alpha).map_err(|e| e.to_string())?;
            ensure!(sq.is_integer(), "j = {j}: alpha^2 = {sq} is not an integer");
            let residue = sq.to_integer() % num_bigint::BigInt::from(8);
            let residue = (residue + 8) % 8;
            ensure!(
                residue == num_bigint::BigInt::from(5),
                "j = {j}: alpha^2 = {sq} is not 5 mod 8"
            );
        }
    }
    Ok(())
}

/// Twenty intervals of the plane around the origin.
pub fn region_grid() -> Vec<ConvexRegion> {
    let half = |k| Ratio::new(k, 2);
    let mut grid = vec![
        ConvexRegion::column(0),
        ConvexRegion::column(0).and(HalfPlane::JLe(0)),
        ConvexRegion::column(0).and(HalfPlane::JGe(1)),
        ConvexRegion::column(1).and(HalfPlane::JLe(-1)),
        ConvexRegion::column(-1).and(HalfPlane::JGe(-2)),
        ConvexRegion::rect(-1, 1, -1, 1),
        ConvexRegion::rect(-2, 0, -3, 2),
        ConvexRegion::rect(0, 2, -2, 0),
        ConvexRegion::rect(-3, 3, -3, 3),
        ConvexRegion::rect(-1, 0, 0, 3),
        ConvexRegion::rect(-2, 2, 1, 1),
        ConvexRegion::rect(0, 0, -4, 4),
        ConvexRegion::rect(-2, 1, -2, 1).and(HalfPlane::Slope {
            t: half(2),
            s: half(0),
        }),
        ConvexRegion::rect(-3, 3, -3, 3).and(HalfPlane::Slope {
            t: half(1),
            s: half(1),
        }),
        ConvexRegion::rect(-3, 3, -3, 3).and(HalfPlane::Slope {
            t: half(3),
            s: half(-1),
        }),
        ConvexRegion::rect(-2, 2, -3, 3).and(HalfPlane::Slope {
            t: Ratio::new(1, 3),
            s: half(2),
        }),
    ];
    for a in [-1, 1] {
        grid.push(ConvexRegion::column(a));
        grid.push(ConvexRegion::rect(a - 1, a + 1, a - 2, a + 2));
    }
    grid
}

pub const GRID_WINDOW: i64 = 5;

/// Cones built from every fixture with a flip map: the +1 cone and the
/// `1/n` cones for `n <= 3`.
pub fn built_cones() -> Result<Vec<(String, BifilteredComplex)>, String> {
    let mut out = Vec::new();
    for (name, c, phi) in probed()? {
        let cone = surgery::cone_complex(&c, &phi, surgery::default_range(&c))
            .map_err(|e| e.to_string())?;
        out.push((format!("+1 cone of {name}"), cone.flattened));
        for n in 1..=3 {
            let base = surgery::calibrate(n).map_err(|e| e.to_string())?;
            let range = surgery::one_over_n_range(c.max_abs_alexander(), n);
            let cone =
                surgery::one_over_n_cone(&c, &phi, n, range, base).map_err(|e| e.to_string())?;
            out.push((format!("1/{n} cone of {name}"), cone));
        }
    }
    Ok(out)
}

/// Subquotient homology over the region grid agrees before and after
/// reduction.
pub fn check_reduction_grid() -> Result<usize, String> {
    let mut inputs = fixtures();
    inputs.extend(built_cones()?);
    let grid = region_grid();
    let mut compared = 0;
    for (name, c) in inputs {
        let r = reduce(&c);
        for (k, region) in grid.iter().enumerate() {
            let before = c
                .subquotient(region, GRID_WINDOW)
                .map_err(|e| format!("{name}, region {k}: {e}"))?;
            let after = r
                .subquotient(region, GRID_WINDOW)
                .map_err(|e| format!("{name}, region {k}: {e}"))?;
            ensure!(
                before.homology_ranks() == after.homology_ranks(),
                "{name}, region {k}: {:?} before reduction, {:?} after",
                before.homology_ranks(),
                after.homology_ranks()
            );
            compared += 1;
        }
    }
    Ok(compared)
}
