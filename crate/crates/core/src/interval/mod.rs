//! Outward-rounded interval arithmetic.
//!
//! Endpoints are `f64`. Each operation rounds its lower endpoint down and its
//! upper endpoint up (see [`round`]), so the exact real result of applying the
//! operation to any members of the inputs is contained in the output.

mod complex;
pub mod round;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use complex::ComplexInterval;

use crate::error::{Error, Result};

/// A closed, bounded real interval `[lo, hi]`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    /// Panics if `lo > hi` or either endpoint is not finite.
    pub fn new(lo: f64, hi: f64) -> Self {
        match Self::try_new(lo, hi) {
            Ok(x) => x,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        // -0.0 and 0.0 compare equal; normalize so serialization is stable.
        Ok(Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        })
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Encloses the real quotient `num / den` of two integers.
    pub fn ratio(num: i64, den: i64) -> Self {
        let (n, d) = (num as f64, den as f64);
        assert!(n as i64 == num && d as i64 == den && den != 0);
        Interval::point(n)
            .checked_div(Interval::point(d))
            .expect("nonzero denominator")
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Width rounded upward.
    pub fn width(self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    pub fn midpoint(self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ other`.
    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// `None` when the intervals are disjoint.
    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Splits at the midpoint.
    pub fn bisect(self) -> (Interval, Interval) {
        let m = self.midpoint();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    /// Largest absolute value of a member.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of a member.
    pub fn mig(self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn abs(self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    /// `{x² : x ∈ self}`, tighter than `self * self` when `0 ∈ self`.
    pub fn square(self) -> Interval {
        let (m, g) = (self.mig(), self.mag());
        Interval {
            lo: round::mul_down(m, m),
            hi: round::mul_up(g, g),
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::domain("sqrt", self, "[0, ∞)"));
        }
        Ok(Interval {
            lo: round::sqrt_down(self.lo),
            hi: round::sqrt_up(self.hi),
        })
    }

    pub fn recip(self) -> Result<Interval> {
        if self.contains(0.0) {
            return Err(Error::DivisionByZero(self));
        }
        Ok(Interval {
            lo: round::div_down(1.0, self.hi),
            hi: round::div_up(1.0, self.lo),
        })
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::DivisionByZero(rhs));
        }
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c
            .iter()
            .map(|&(a, b)| round::div_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = c
            .iter()
            .map(|&(a, b)| round::div_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    /// Integer power by repeated multiplication (`n = 0` gives `[1,1]`).
    pub fn powi(self, n: u32) -> Interval {
        if n % 2 == 0 && n > 0 {
            return self.square().powi(n / 2);
        }
        (0..n).fold(Interval::ONE, |acc, _| acc * self)
    }

    /// Tight enclosure of `{t(1-t) : t ∈ self}` for `self ⊆ [0,1]`.
    ///
    /// `t(1-t)` is monotone on either side of 1/2, so the range is spanned by
    /// the endpoint values, with the maximum 1/4 attained when 1/2 ∈ self.
    pub fn x_one_minus_x(self) -> Result<Interval> {
        if !self.subset_of(Interval::UNIT) {
            return Err(Error::domain("x_one_minus_x", self, "[0, 1]"));
        }
        let at = |t: f64| Interval::point(t) * (Interval::ONE - Interval::point(t));
        let (a, b) = (at(self.lo), at(self.hi));
        let lo = a.lo.min(b.lo);
        let hi = if self.contains(0.5) {
            0.25
        } else {
            a.hi.max(b.hi)
        };
        Ok(Interval { lo, hi })
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::try_new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(x: Interval) -> Self {
        [x.lo, x.hi]
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        // Nonnegative operands dominate the hot path (unit-square boxes).
        if a >= 0.0 && c >= 0.0 {
            return Interval {
                lo: round::mul_down(a, c),
                hi: round::mul_up(b, d),
            };
        }
        let lo = round::mul_down(a, c)
            .min(round::mul_down(a, d))
            .min(round::mul_down(b, c))
            .min(round::mul_down(b, d));
        let hi = round::mul_up(a, c)
            .max(round::mul_up(a, d))
            .max(round::mul_up(b, c))
            .max(round::mul_up(b, d));
        Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, rhs: f64) -> Interval {
                $tr::$m(self, Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                $tr::$m(Interval::point(self), rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul);

/// Axis-aligned rectangle `x × y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box2 {
    pub x: Interval,
    pub y: Interval,
}

impl Box2 {
    pub fn new(x: Interval, y: Interval) -> Self {
        Box2 { x, y }
    }

    pub fn point(x: f64, y: f64) -> Self {
        Box2::new(Interval::point(x), Interval::point(y))
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        let i = Interval::new(lo, hi);
        Box2::new(i, i)
    }

    pub fn width(self) -> f64 {
        self.x.width().max(self.y.width())
    }

    pub fn contains(self, x: f64, y: f64) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    pub fn subset_of(self, other: Box2) -> bool {
        self.x.subset_of(other.x) && self.y.subset_of(other.y)
    }

    pub fn hull(self, other: Box2) -> Box2 {
        Box2::new(self.x.hull(other.x), self.y.hull(other.y))
    }

    pub fn intersect(self, other: Box2) -> Option<Box2> {
        Some(Box2::new(
            self.x.intersect(other.x)?,
            self.y.intersect(other.y)?,
        ))
    }

    pub fn overlaps(self, other: Box2) -> bool {
        self.x.overlaps(other.x) && self.y.overlaps(other.y)
    }

    pub fn midpoint(self) -> (f64, f64) {
        (self.x.midpoint(), self.y.midpoint())
    }

    pub fn corners(self) -> [(f64, f64); 4] {
        [
            (self.x.lo(), self.y.lo()),
            (self.x.hi(), self.y.lo()),
            (self.x.lo(), self.y.hi()),
            (self.x.hi(), self.y.hi()),
        ]
    }
}
