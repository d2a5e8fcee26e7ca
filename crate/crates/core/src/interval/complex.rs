use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Interval;
use crate::error::Result;

/// Rectangular complex interval `re + i·im`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };
    pub const ONE: ComplexInterval = ComplexInterval {
        re: Interval::ONE,
        im: Interval::ZERO,
    };
    pub const I: ComplexInterval = ComplexInterval {
        re: Interval::ZERO,
        im: Interval::ONE,
    };

    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        ComplexInterval::new(re, Interval::ZERO)
    }

    pub fn imag(im: Interval) -> Self {
        ComplexInterval::new(Interval::ZERO, im)
    }

    pub fn point(re: f64, im: f64) -> Self {
        ComplexInterval::new(Interval::point(re), Interval::point(im))
    }

    pub fn conj(self) -> Self {
        ComplexInterval::new(self.re, -self.im)
    }

    pub fn scale(self, k: Interval) -> Self {
        ComplexInterval::new(self.re * k, self.im * k)
    }

    pub fn norm_sqr(self) -> Interval {
        self.re.square() + self.im.square()
    }

    /// Enclosure of `{|z| : z ∈ self}`.
    pub fn modulus(self) -> Interval {
        self.norm_sqr()
            .sqrt()
            .expect("sum of squares is nonnegative")
    }

    pub fn contains(self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn subset_of(self, other: ComplexInterval) -> bool {
        self.re.subset_of(other.re) && self.im.subset_of(other.im)
    }

    pub fn hull(self, other: ComplexInterval) -> Self {
        ComplexInterval::new(self.re.hull(other.re), self.im.hull(other.im))
    }

    pub fn width(self) -> f64 {
        self.re.width().max(self.im.width())
    }

    pub fn recip(self) -> Result<Self> {
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Ok(self.conj().scale(inv))
    }

    pub fn checked_div(self, rhs: ComplexInterval) -> Result<Self> {
        // Real divisors are common in the coefficient formulas and divide
        // componentwise without the |rhs|² overestimation.
        if rhs.im == Interval::ZERO {
            return Ok(ComplexInterval::new(
                self.re.checked_div(rhs.re)?,
                self.im.checked_div(rhs.re)?,
            ));
        }
        let n = rhs.norm_sqr();
        let num = self * rhs.conj();
        Ok(ComplexInterval::new(
            num.re.checked_div(n)?,
            num.im.checked_div(n)?,
        ))
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(ComplexInterval::ONE, |acc, _| acc * self)
    }
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl From<Interval> for ComplexInterval {
    fn from(x: Interval) -> Self {
        ComplexInterval::real(x)
    }
}

impl Add for ComplexInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexInterval::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexInterval::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexInterval {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexInterval::new(-self.re, -self.im)
    }
}

impl Mul for ComplexInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ComplexInterval::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<Interval> for ComplexInterval {
    type Output = Self;
    fn mul(self, rhs: Interval) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexInterval {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(Interval::point(rhs))
    }
}

impl Add<Interval> for ComplexInterval {
    type Output = Self;
    fn add(self, rhs: Interval) -> Self {
        ComplexInterval::new(self.re + rhs, self.im)
    }
}
