//! Rigorous enclosures of the delayed logistic map `F_a(x, y) = (y, a·y·(1-x))`
//! and of its second iterate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Box2, Interval};

/// Which attracting neighborhood certifies a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Square neighborhood from the linearization at the fixed point.
    Linearized,
    /// Ellipse from the Neimark–Sacker normal form.
    NormalForm,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Linearized => "linearized",
            Regime::NormalForm => "normal-form",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linearized" | "lin" => Ok(Regime::Linearized),
            "normal-form" | "nf" => Ok(Regime::NormalForm),
            _ => Err(Error::Config(format!("unknown regime `{s}`"))),
        }
    }
}

/// A parameter range `[a⁻, a⁺] ⊆ [1.5, 2]` together with its regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSlice {
    pub a: Interval,
    pub regime: Regime,
}

pub const PARAMETER_RANGE: (f64, f64) = (1.5, 2.0);

impl ParameterSlice {
    pub fn new(a: Interval, regime: Regime) -> Result<Self> {
        if !a.subset_of(Interval::new(PARAMETER_RANGE.0, PARAMETER_RANGE.1)) {
            return Err(Error::domain("ParameterSlice", a, "[1.5, 2]"));
        }
        Ok(ParameterSlice { a, regime })
    }

    pub fn point(a: f64, regime: Regime) -> Result<Self> {
        ParameterSlice::new(Interval::point(a), regime)
    }
}

fn check_unit(b: Box2, op: &'static str) -> Result<()> {
    if b.subset_of(Box2::new(Interval::UNIT, Interval::UNIT)) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{b:?}"), "[0,1]²"))
    }
}

/// Encloses `F_a(b)` for all `a ∈ s.a`.
pub fn first_iterate(b: Box2, s: &ParameterSlice) -> Result<Box2> {
    check_unit(b, "first_iterate")?;
    Ok(first_iterate_unchecked(b, s.a))
}

pub(crate) fn first_iterate_unchecked(b: Box2, a: Interval) -> Box2 {
    Box2::new(b.y, a * b.y * (Interval::ONE - b.x))
}

/// Encloses `F_a²(b)` for all `a ∈ s.a`.
///
/// `x₂ = a·y(1-x)` uses corner products (all factors are nonnegative on the
/// unit square); `y₂ = a²·y(1-y)·(1-x)` evaluates `y(1-y)` as a single-variable
/// range so the dependency on `y` is not counted twice.
pub fn second_iterate(b: Box2, s: &ParameterSlice) -> Result<Box2> {
    check_unit(b, "second_iterate")?;
    Ok(second_iterate_unchecked(b, s.a))
}

pub(crate) fn second_iterate_unchecked(b: Box2, a: Interval) -> Box2 {
    let one_minus_x = Interval::ONE - b.x;
    let x2 = a * b.y * one_minus_x;
    let yy = b.y.x_one_minus_x().expect("box inside unit square");
    let y2 = (a * a) * yy * one_minus_x;
    Box2::new(x2, y2)
}

/// Plain floating-point evaluation of `F_a`, for sampling and diagnostics.
pub fn apply(x: f64, y: f64, a: f64) -> (f64, f64) {
    (y, a * y * (1.0 - x))
}

pub fn apply2(x: f64, y: f64, a: f64) -> (f64, f64) {
    let (x1, y1) = apply(x, y, a);
    apply(x1, y1, a)
}
