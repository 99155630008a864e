//! `floerkit`: knot Floer invariants, surgery cones and plumbing d-invariants.
//!
//! Exit codes: 0 success, 1 a check or validation failed, 2 bad input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use floerkit::catalog;
use floerkit::concordance::{self, InvariantReport};
use floerkit::flavors::{self, WindowCertificate};
use floerkit::plumbing::{self, GammaReport, PlumbingGraph, SpinC};
use floerkit::surgery::{self, FlipMap};
use floerkit::{format_ratio, BifilteredComplex};
use num_rational::Ratio;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "floerkit",
    version,
    about = "Knot Floer complexes, concordance invariants and surgery d-invariants"
)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a complex.
    Validate { complex: String },
    /// τ, ν, ν′, ε, V₀, d, N and sampled Υ.
    Invariants {
        complex: String,
        /// Υ is sampled at k/q for k = 0..=2q.
        #[arg(long, default_value_t = 4)]
        upsilon_denominator: i64,
        /// Also run the windowed route from this window, doubling until
        /// stable, and compare with the exact route.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Tensor product of two complexes (connected sum).
    Sum {
        left: String,
        right: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dual complex (mirror).
    Mirror {
        complex: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    #[command(subcommand)]
    Surgery(SurgeryCommand),
    /// Spread of d over 1/n-surgeries.
    Theta {
        complex: String,
        #[arg(long)]
        flip: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        max_n: i64,
    },
    #[command(subcommand)]
    Plumbing(PlumbingCommand),
    /// Reproduce the reference computations and compare with their known values.
    #[command(subcommand)]
    Check(CheckCommand),
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum SurgeryCommand {
    /// Reduced complex of the core of +1-surgery.
    Core {
        complex: String,
        /// Flip map JSON; defaults to the fixture's map or a searched one.
        #[arg(long)]
        flip: Option<PathBuf>,
        /// Cone range `a,b`.
        #[arg(long, value_parser = parse_range)]
        range: Option<(i64, i64)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// d-invariant of 1/n-surgery.
    D {
        complex: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        flip: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlumbingCommand {
    /// d-invariant of the boundary of a definite plumbing tree.
    D {
        graph: PathBuf,
        /// `self-conjugate` or a class index.
        #[arg(long, default_value = "self-conjugate", value_parser = parse_spinc)]
        spinc: SpinC,
        /// Negate every weight first.
        #[arg(long)]
        reverse: bool,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// The Γ_j plumbings: d, V₀ and θ against their closed forms.
    GammaJ {
        #[arg(long, conflicts_with = "max_j")]
        j: Option<i64>,
        #[arg(long)]
        max_j: Option<i64>,
    },
    /// Cable fixture through flip, cone and reduction to the core invariants.
    Cable,
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    /// Write every fixture (and flip map) as JSON into a directory.
    Export {
        dir: PathBuf,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_spinc(s: &str) -> std::result::Result<SpinC, String> {
    if s == "self-conjugate" {
        return Ok(SpinC::SelfConjugate);
    }
    s.parse()
        .map(SpinC::Index)
        .map_err(|_| format!("expected `self-conjugate` or an index, got `{s}`"))
}

/// A complex argument: a JSON path, or `fixture:NAME`.
fn load(arg: &str) -> Result<(BifilteredComplex, Option<FlipMap>)> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        let f = catalog::get(name)?;
        return Ok((f.complex, f.flip));
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    let c = BifilteredComplex::from_json(&text).with_context(|| format!("parsing {arg}"))?;
    Ok((c, None))
}

fn load_valid(arg: &str) -> Result<(BifilteredComplex, Option<FlipMap>)> {
    let (c, flip) = load(arg)?;
    Ok((
        c.validated().with_context(|| format!("validating {arg}"))?,
        flip,
    ))
}

fn flip_for(
    c: &BifilteredComplex,
    given: Option<&Path>,
    shipped: Option<FlipMap>,
) -> Result<FlipMap> {
    match (given, shipped) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(FlipMap::from_json(&text)?)
        }
        (None, Some(phi)) => Ok(phi),
        (None, None) => Ok(surgery::find_flip(c)?),
    }
}

fn emit_complex(c: &BifilteredComplex, output: Option<&Path>) -> Result<()> {
    let text = c.to_json();
    match output {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct InvariantsOutput {
    #[serde(flatten)]
    report: InvariantReport,
    upsilon_denominator: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<WindowCertificate>,
}

fn invariants_text(r: &InvariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tau        {}", r.tau);
    let _ = writeln!(out, "nu         {}", r.nu);
    let _ = writeln!(out, "nu'        {}", r.nu_prime);
    let _ = writeln!(out, "epsilon    {}", r.epsilon);
    let _ = writeln!(out, "V0         {}", r.v0);
    let _ = writeln!(out, "d          {}", r.d);
    let _ = writeln!(out, "N          {}", r.n_invariant);
    let _ = writeln!(out, "upsilon");
    for (t, u) in &r.upsilon {
        let _ = writeln!(out, "  {:>6}  {}", format_ratio(t), format_ratio(u));
    }
    out
}

#[derive(Serialize)]
struct CheckRow {
    quantity: String,
    expected: String,
    computed: String,
    matches: bool,
}

fn row(quantity: &str, expected: impl ToString, computed: impl ToString) -> CheckRow {
    let (expected, computed) = (expected.to_string(), computed.to_string());
    CheckRow {
        quantity: quantity.into(),
        matches: expected == computed,
        expected,
        computed,
    }
}

fn print_rows(rows: &[CheckRow], json: bool) -> Result<bool> {
    let ok = rows.iter().all(|r| r.matches);
    if json {
        print_json(&serde_json::json!({ "rows": rows, "pass": ok }))?;
    } else {
        let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(8);
        let cell = rows
            .iter()
            .map(|r| r.expected.len().max(r.computed.len()))
            .max()
            .unwrap_or(8)
            .max(8);
        println!(
            "{:width$}  {:>cell$}  {:>cell$}",
            "quantity", "expected", "computed"
        );
        for r in rows {
            let mark = if r.matches { "ok" } else { "MISMATCH" };
            println!(
                "{:width$}  {:>cell$}  {:>cell$}  {mark}",
                r.quantity, r.expected, r.computed
            );
        }
        println!("{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(ok)
}

fn check_cable(json: bool) -> Result<bool> {
    let cable = catalog::get("cable")?;
    let phi = cable
        .flip
        .clone()
        .context("cable fixture has no flip map")?;
    surgery::verify_flip(&cable.complex, &phi).map_err(|v| anyhow::anyhow!("{v}"))?;
    let core = surgery::core_complex(&cable.complex, &phi)?;
    let r = concordance::invariants(&core, 2)?;
    let upsilon_one = r
        .upsilon
        .iter()
        .find(|(t, _)| *t == Ratio::from_integer(1))
        .map(|p| format_ratio(&p.1))
        .unwrap_or_default();
    let ranks: Vec<String> = surgery::hfk_hat_core(&cable.complex, &phi)?
        .iter()
        .rev()
        .map(|p| p.1.to_string())
        .collect();
    let grades = |c: &BifilteredComplex| {
        let mut v: Vec<(i64, i64)> = c
            .generators()
            .iter()
            .map(|g| (g.alexander, g.maslov))
            .collect();
        v.sort();
        format!("{v:?}")
    };
    let table = catalog::get("table1")?.complex;
    let rows = vec![
        row("cable epsilon", -1, concordance::epsilon(&cable.complex)?),
        row("core generators", 13, core.len()),
        row(
            "core gradings match table",
            true,
            grades(&core) == grades(&table),
        ),
        row("hat ranks (A = 3..-3)", "1,1,4,1,4,1,1", ranks.join(",")),
        row("tau", -1, r.tau),
        row("nu", -1, r.nu),
        row("nu'", -1, r.nu_prime),
        row("epsilon", 0, r.epsilon),
        row("upsilon(1)", 1, upsilon_one),
        row("d", -2, r.d),
    ];
    print_rows(&rows, json)
}

fn check_gamma(js: Vec<i64>, json: bool) -> Result<bool> {
    let reports: Vec<GammaReport> = js
        .iter()
        .map(|&j| plumbing::gamma_report(j))
        .collect::<floerkit::Result<_>>()?;
    let mut rows = Vec::new();
    for r in &reports {
        let j = r.j;
        let d = if j % 2 == 1 {
            Ratio::new(-j, 2) - 1
        } else {
            Ratio::new(-j, 2)
        };
        let v0 = (j + 1) / 2;
        rows.push(row(
            &format!("j={j} d"),
            format_ratio(&d),
            format_ratio(&r.d),
        ));
        rows.push(row(&format!("j={j} V0"), v0, r.v0));
        rows.push(row(&format!("j={j} theta"), 2 * v0, r.theta));
    }
    print_rows(&rows, json)
}

/// Runs a command; `Ok(false)` means a check or validation failed.
fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    match cli.command {
        Command::Validate { complex } => {
            let (c, _) = load(&complex)?;
            let report = c.validate();
            if json {
                let violations: Vec<String> =
                    report.violations.iter().map(|v| v.to_string()).collect();
                print_json(
                    &serde_json::json!({ "passes": report.passes(), "violations": violations }),
                )?;
            } else if report.passes() {
                println!(
                    "ok: {} generators, {} arrows, genus {}",
                    c.len(),
                    c.differential().len(),
                    c.genus()
                );
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
            }
            Ok(report.passes())
        }
        Command::Invariants {
            complex,
            upsilon_denominator,
            window,
        } => {
            let (c, _) = load_valid(&complex)?;
            let report = concordance::invariants(&c, upsilon_denominator)?;
            let certificate = window
                .map(|w| flavors::certify_window(&c, Some(w)))
                .transpose()?;
            let exact = flavors::tower_report(&c)?;
            let agrees = certificate.as_ref().is_none_or(|cert| cert.report == exact);
            if json {
                print_json(&InvariantsOutput {
                    report,
                    upsilon_denominator,
                    window: certificate,
                })?;
            } else {
                print!("{}", invariants_text(&report));
                if let Some(cert) = &certificate {
                    println!(
                        "window     {} ({})",
                        cert.window,
                        if agrees { "agrees" } else { "DISAGREES" }
                    );
                }
            }
            Ok(agrees)
        }
        Command::Sum {
            left,
            right,
            output,
        } => {
            let (a, _) = load_valid(&left)?;
            let (b, _) = load_valid(&right)?;
            emit_complex(&a.tensor(&b)?, output.as_deref())?;
            Ok(true)
        }
        Command::Mirror { complex, output } => {
            let (c, _) = load_valid(&complex)?;
            emit_complex(&c.dualize(), output.as_deref())?;
            Ok(true)
        }
        Command::Surgery(SurgeryCommand::Core {
            complex,
            flip,
            range,
            output,
        }) => {
            let (c, shipped) = load_valid(&complex)?;
            let phi = flip_for(&c, flip.as_deref(), shipped)?;
            let range = range.unwrap_or_else(|| surgery::default_range(&c));
            let core = surgery::core_complex_with_range(&c, &phi, range)?;
            emit_complex(&core, output.as_deref())?;
            Ok(true)
        }
        Command::Surgery(SurgeryCommand::D { complex, n, flip }) => {
            let (c, shipped) = load_valid(&complex)?;
            let phi = flip_for(&c, flip.as_deref(), shipped)?;
            let d = surgery::d_of_one_over_n(&c, &phi, n)?;
            if json {
                print_json(&serde_json::json!({ "n": n, "d": d.to_string() }))?;
            } else {
                println!("{d}");
            }
            Ok(true)
        }
        Command::Theta {
            complex,
            flip,
            max_n,
        } => {
            let (c, shipped) = load_valid(&complex)?;
            let phi = flip_for(&c, flip.as_deref(), shipped)?;
            let probe = surgery::theta_probe(&c, &phi, max_n)?;
            if json {
                print_json(&serde_json::json!({ "max_n": max_n, "probe": probe }))?;
            } else {
                for (n, d) in &probe.d_values {
                    println!("d(1/{n}) = {d}");
                }
                println!(
                    "theta = {}{}",
                    probe.theta,
                    if probe.stabilized {
                        ""
                    } else {
                        " (not stabilized)"
                    }
                );
            }
            Ok(true)
        }
        Command::Plumbing(PlumbingCommand::D {
            graph,
            spinc,
            reverse,
        }) => {
            let text = fs::read_to_string(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let mut g = PlumbingGraph::from_json(&text)?;
            if reverse {
                g = g.reversed();
            }
            let form = plumbing::analyze(&g)?;
            let d = plumbing::d_plumbing(&g, spinc)?;
            if json {
                print_json(&serde_json::json!({
                    "d": format_ratio(&d),
                    "definiteness": form.definiteness,
                    "det": form.det.to_string(),
                    "reversed": reverse,
                }))?;
            } else {
                println!("{}", format_ratio(&d));
            }
            Ok(true)
        }
        Command::Check(CheckCommand::GammaJ { j, max_j }) => {
            let js: Vec<i64> = match (j, max_j) {
                (Some(j), _) => vec![j],
                (None, Some(m)) => (1..=m).collect(),
                (None, None) => bail!("give --j or --max-j"),
            };
            check_gamma(js, json)
        }
        Command::Check(CheckCommand::Cable) => check_cable(json),
        Command::Catalog(CatalogCommand::List) => {
            for f in catalog::all() {
                if json {
                    println!(
                        "{}",
                        serde_json::json!({ "name": f.name, "generators": f.complex.len(), "flip": f.flip.is_some() })
                    );
                } else {
                    println!(
                        "{:8} {:3} generators  {}",
                        f.name,
                        f.complex.len(),
                        f.description
                    );
                }
            }
            Ok(true)
        }
        Command::Catalog(CatalogCommand::Export { dir }) => {
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for f in catalog::all() {
                fs::write(
                    dir.join(format!("{}.json", f.name)),
                    f.complex.to_json() + "\n",
                )?;
                if let Some(phi) = &f.flip {
                    fs::write(
                        dir.join(format!("{}.flip.json", f.name)),
                        phi.to_json() + "\n",
                    )?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
