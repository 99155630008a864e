//! Knot Floer chain complexes over `F[U, U^-1]` and the invariants read off
//! them: d, V₀, N, τ, ν, ν′, ε and Υ, the filtered mapping cone computing
//! the complex of the core of +1-surgery, and d-invariants of plumbed
//! three-manifolds.

// Matrix and bitset code indexes several arrays in step.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod complex;
pub mod concordance;
pub mod error;
pub mod f2;
pub mod flavors;
pub mod plumbing;
pub mod reduction;
mod slices;
pub mod surgery;

pub use complex::{
    BifilteredComplex, ConvexRegion, DiffEntry, Generator, HalfPlane, ValidationReport, Violation,
};
pub use concordance::InvariantReport;
pub use error::{FloerError, Result};
pub use flavors::TowerReport;
pub use surgery::{FlipEntry, FlipMap, FlipViolation};

use num_rational::Ratio;
use serde::ser::{SerializeSeq, Serializer};

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_ratio<T>(r: &Ratio<T>) -> String
where
    T: Clone + num_integer::Integer + std::fmt::Display,
{
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ratio_pairs<S: Serializer>(
    pairs: &[(Ratio<i64>, Ratio<i64>)],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(pairs.len()))?;
    for (t, u) in pairs {
        seq.serialize_element(&[format_ratio(t), format_ratio(u)])?;
    }
    seq.end()
}

pub(crate) fn ratio_string<S: Serializer>(
    r: &Ratio<i64>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_ratio(r))
}

pub(crate) fn big_ratio_string<S: Serializer>(
    r: &num_rational::BigRational,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_ratio(r))
}

pub(crate) fn display_string<T: std::fmt::Display, S: Serializer>(
    v: &T,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}
