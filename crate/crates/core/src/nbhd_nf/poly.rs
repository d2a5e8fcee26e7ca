//! Truncated polynomials for the normal-form computation.
//!
//! [`BiPoly`] is a polynomial in `w` and `w̄` with complex-interval
//! coefficients, truncated at a fixed total degree. Substituting
//! `z = P(w, w̄)` into `Q(z, z̄)` uses `z̄ = P̄`, the polynomial with conjugated
//! coefficients and swapped exponents. [`RealPoly`] is a univariate polynomial
//! with interval coefficients, used for the real majorants.

use std::fmt;

use crate::interval::{ComplexInterval, Interval};

#[inline]
fn tri(k: usize, l: usize) -> usize {
    let t = k + l;
    t * (t + 1) / 2 + l
}

/// `Σ c_kl w^k w̄^l` over `k + l ≤ degree`.
#[derive(Clone, PartialEq)]
pub struct BiPoly {
    degree: usize,
    coeffs: Vec<ComplexInterval>,
}

impl BiPoly {
    pub fn zero(degree: usize) -> Self {
        BiPoly {
            degree,
            coeffs: vec![ComplexInterval::ZERO; tri(0, degree + 1)],
        }
    }

    /// The polynomial `w`.
    pub fn identity(degree: usize) -> Self {
        let mut p = BiPoly::zero(degree);
        if degree >= 1 {
            p.set(1, 0, ComplexInterval::ONE);
        }
        p
    }

    pub fn from_terms(degree: usize, terms: &[((usize, usize), ComplexInterval)]) -> Self {
        let mut p = BiPoly::zero(degree);
        for &((k, l), c) in terms {
            if k + l <= degree {
                p.set(k, l, p.coeff(k, l) + c);
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, k: usize, l: usize) -> ComplexInterval {
        if k + l > self.degree {
            ComplexInterval::ZERO
        } else {
            self.coeffs[tri(k, l)]
        }
    }

    pub fn set(&mut self, k: usize, l: usize, c: ComplexInterval) {
        assert!(k + l <= self.degree, "term ({k},{l}) beyond degree {}", self.degree);
        self.coeffs[tri(k, l)] = c;
    }

    /// Terms `(k, l, c)` of total degree `t`.
    pub fn homogeneous(&self, t: usize) -> impl Iterator<Item = (usize, usize, ComplexInterval)> + '_ {
        (0..=t).map(move |l| (t - l, l, self.coeff(t - l, l)))
    }

    /// Keeps only the terms of total degree `t`.
    pub fn part(&self, t: usize) -> BiPoly {
        let mut p = BiPoly::zero(self.degree);
        for (k, l, c) in self.homogeneous(t) {
            p.set(k, l, c);
        }
        p
    }

    pub fn truncate(&self, degree: usize) -> BiPoly {
        let mut p = BiPoly::zero(degree);
        for t in 0..=degree.min(self.degree) {
            for (k, l, c) in self.homogeneous(t) {
                p.set(k, l, c);
            }
        }
        p
    }

    /// `P̄(w, w̄)`: conjugate coefficients, swap exponents.
    pub fn conj(&self) -> BiPoly {
        let mut p = BiPoly::zero(self.degree);
        for t in 0..=self.degree {
            for (k, l, c) in self.homogeneous(t) {
                p.set(l, k, c.conj());
            }
        }
        p
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let d = self.degree.min(other.degree);
        let mut p = BiPoly::zero(d);
        for i in 0..p.coeffs.len() {
            p.coeffs[i] = self.coeffs[i] + other.coeffs[i];
        }
        p
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale(-ComplexInterval::ONE))
    }

    pub fn scale(&self, c: ComplexInterval) -> BiPoly {
        BiPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Product truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let d = self.degree.min(other.degree);
        let mut p = BiPoly::zero(d);
        for t1 in 0..=d {
            for (k1, l1, c1) in self.homogeneous(t1) {
                if c1 == ComplexInterval::ZERO {
                    continue;
                }
                for t2 in 0..=(d - t1) {
                    for (k2, l2, c2) in other.homogeneous(t2) {
                        if c2 == ComplexInterval::ZERO {
                            continue;
                        }
                        let i = tri(k1 + k2, l1 + l2);
                        p.coeffs[i] = p.coeffs[i] + c1 * c2;
                    }
                }
            }
        }
        p
    }

    /// `self(inner, inner̄)`, truncated at `inner`'s degree. `inner` must have
    /// no constant term for the truncation to be exact.
    pub fn compose(&self, inner: &BiPoly) -> BiPoly {
        let d = inner.degree;
        let inner_bar = inner.conj();
        let top = self.degree.min(d);
        // powers[k] = inner^k, bar_powers[l] = inner̄^l
        let mut powers = vec![BiPoly::from_terms(d, &[((0, 0), ComplexInterval::ONE)])];
        let mut bar_powers = powers.clone();
        for k in 1..=top {
            powers.push(powers[k - 1].mul(inner));
            bar_powers.push(bar_powers[k - 1].mul(&inner_bar));
        }
        let mut out = BiPoly::zero(d);
        for t in 0..=top {
            for (k, l, c) in self.homogeneous(t) {
                if c == ComplexInterval::ZERO {
                    continue;
                }
                out = out.add(&powers[k].mul(&bar_powers[l]).scale(c));
            }
        }
        out
    }

    /// `Σ_{k+l=t} |c_kl|` as an interval.
    pub fn abs_sum(&self, t: usize) -> Interval {
        self.homogeneous(t)
            .map(|(_, _, c)| c.modulus())
            .fold(Interval::ZERO, |acc, m| acc + m)
    }

    /// Midpoint evaluation at a floating-point `w`, for sampling tests.
    pub fn eval_mid(&self, w: (f64, f64)) -> (f64, f64) {
        let (wr, wi) = w;
        let mut acc = (0.0, 0.0);
        for t in 0..=self.degree {
            for (k, l, c) in self.homogeneous(t) {
                let mut term = (c.re.midpoint(), c.im.midpoint());
                for _ in 0..k {
                    term = (term.0 * wr - term.1 * wi, term.0 * wi + term.1 * wr);
                }
                for _ in 0..l {
                    term = (term.0 * wr + term.1 * wi, term.1 * wr - term.0 * wi);
                }
                acc = (acc.0 + term.0, acc.1 + term.1);
            }
        }
        acc
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in 0..=self.degree {
            for (k, l, c) in self.homogeneous(t) {
                if c == ComplexInterval::ZERO {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c:?})·w^{k}·w̄^{l}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Univariate polynomial with interval coefficients, `coeffs[j]` of `t^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    pub coeffs: Vec<Interval>,
}

impl RealPoly {
    pub fn new(coeffs: Vec<Interval>) -> Self {
        RealPoly { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        RealPoly::new(coeffs.iter().map(|&c| Interval::point(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Interval {
        self.coeffs.get(j).copied().unwrap_or(Interval::ZERO)
    }

    pub fn add(&self, other: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RealPoly::new((0..n).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn mul(&self, other: &RealPoly) -> RealPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return RealPoly::new(vec![]);
        }
        let mut out = vec![Interval::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        RealPoly::new(out)
    }

    /// `self(inner(t))`, exact (no truncation).
    pub fn compose(&self, inner: &RealPoly) -> RealPoly {
        let mut out = RealPoly::new(vec![Interval::ZERO]);
        let mut power = RealPoly::new(vec![Interval::ONE]);
        for &c in &self.coeffs {
            out = out.add(&power.mul(&RealPoly::new(vec![c])));
            power = power.mul(inner);
        }
        out
    }

    /// Horner evaluation over an interval argument.
    pub fn eval(&self, t: Interval) -> Interval {
        self.coeffs.iter().rev().fold(Interval::ZERO, |acc, &c| acc * t + c)
    }

    /// `Σ_{j ≥ from} c_j · t^(j - shift)`, used for tail bounds.
    pub fn tail_sum(&self, from: usize, t: Interval, shift: usize) -> Interval {
        self.coeffs
            .iter()
            .enumerate()
            .skip(from)
            .map(|(j, &c)| c * t.powi((j - shift) as u32))
            .fold(Interval::ZERO, |acc, x| acc + x)
    }
}
