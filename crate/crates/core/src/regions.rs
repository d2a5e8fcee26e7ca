//! Region bookkeeping on the positive quadrant, the trapping square, and the
//! monotone-bracketing argument for small parameters.
//!
//! [`classify`] works on plain floats and is a diagnostic used by property
//! tests; nothing in the certified chain depends on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Box2, Interval};
use crate::map::ParameterSlice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    S,
    T0,
    T1,
    T2,
    T3,
}

/// Position inside `S` relative to the lines `x = A`, `y = A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubRegion {
    S1,
    S2,
    S3,
    S4,
    FixedPoint,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegionTag {
    pub tag: Region,
    pub sub: SubRegion,
}

/// Encloses `A = 1 - 1/a` over the slice.
pub fn fixed_point(s: &ParameterSlice) -> Result<Interval> {
    fixed_point_of(s.a)
}

/// Encloses `A = 1 - 1/a` for `a ⊆ (1, 2]`.
pub fn fixed_point_of(a: Interval) -> Result<Interval> {
    if a.lo() <= 1.0 || a.hi() > 2.0 {
        return Err(Error::domain("fixed_point", a, "(1, 2]"));
    }
    Ok(Interval::ONE - a.recip()?)
}

/// Classifies a point of the closed positive quadrant.
///
/// The curve piece `a·y(1-x) = 1` of `T0` is tested as `p == 1` with the same
/// floating-point `p` used for `S` and `T1`, which keeps the classification
/// exhaustive and exclusive in floating point (mathematically the side
/// condition `x ≤ 1 - 1/a` follows from `y < 1`).
pub fn classify(x: f64, y: f64, a: f64) -> RegionTag {
    assert!(x >= 0.0 && y >= 0.0, "classify: point outside the positive quadrant");
    let tag = if y == 0.0 || (x == 1.0 && y > 0.0) || (x < 1.0 && y == 1.0) {
        Region::T0
    } else if x > 1.0 {
        Region::T3
    } else if y > 1.0 {
        Region::T2
    } else {
        let p = a * y * (1.0 - x);
        if p < 1.0 {
            Region::S
        } else if p > 1.0 {
            Region::T1
        } else {
            Region::T0
        }
    };
    let sub = if tag == Region::S {
        sub_region(x, y, a)
    } else {
        SubRegion::None
    };
    RegionTag { tag, sub }
}

fn sub_region(x: f64, y: f64, a: f64) -> SubRegion {
    let fp = 1.0 - 1.0 / a;
    if x == fp && y == fp {
        SubRegion::FixedPoint
    } else if x <= fp && y < fp {
        SubRegion::S1
    } else if x < fp && fp <= y {
        SubRegion::S2
    } else if fp <= x && fp < y {
        SubRegion::S3
    } else {
        SubRegion::S4
    }
}

pub const TRAPPING_LO: f64 = 0.072;
pub const TRAPPING_HI: f64 = 0.8;

/// Square `[0.072, 0.8]²` that every orbit in `S` eventually visits, for `a ∈ [3/2, 2]`.
pub fn trapping_region() -> Box2 {
    Box2::square(TRAPPING_LO, TRAPPING_HI)
}

/// Evidence that the bracketing sequences of the small-parameter argument close
/// in on the fixed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceWitness {
    pub a: f64,
    /// Number of `(h_n, g_n)` pairs generated.
    pub steps: usize,
    pub lower: f64,
    pub upper: f64,
    pub fixed_point: Interval,
}

impl ConvergenceWitness {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn limit(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Iterates `s₀ = 0`, `s_{n+1} = a(a-1)(1-s_n)²` and checks that the even
/// terms increase, the odd terms decrease, and both bracket `A = 1 - 1/a`,
/// until the bracket is narrower than `tol`.
pub fn small_a_certify(a: f64, tol: f64, max_iter: usize) -> Result<ConvergenceWitness> {
    if !(a > 1.0 && a <= 1.5) {
        return Err(Error::domain("small_a_certify", a, "(1, 1.5]"));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let f = |s: f64| a * (a - 1.0) * (1.0 - s) * (1.0 - s);
    let fp = 1.0 - 1.0 / a;
    let mut h = 0.0;
    let mut g = f(h);
    for n in 0..max_iter {
        if !(h <= fp && fp <= g) {
            return Err(Error::MonotonicityViolation {
                step: n,
                detail: format!("bracket h={h} ≤ A={fp} ≤ g={g} broken"),
            });
        }
        if g - h < tol {
            let fixed = fixed_point_of(Interval::point(a))?;
            if !(h <= fixed.hi() && fixed.lo() <= g) {
                return Err(Error::MonotonicityViolation {
                    step: n,
                    detail: format!("interval re-check: A ∈ {fixed} not inside [{h}, {g}]"),
                });
            }
            return Ok(ConvergenceWitness {
                a,
                steps: n,
                lower: h,
                upper: g,
                fixed_point: fixed,
            });
        }
        let h_next = f(g);
        let g_next = f(h_next);
        if h_next < h || g_next > g {
            return Err(Error::MonotonicityViolation {
                step: n + 1,
                detail: format!("h: {h} -> {h_next}, g: {g} -> {g_next}"),
            });
        }
        h = h_next;
        g = g_next;
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        gap: g - h,
    })
}
