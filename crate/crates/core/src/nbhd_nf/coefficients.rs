//! Normal-form coefficients of the map at the nontrivial fixed point.
//!
//! In the eigen-coordinate `z = d((λ-1)u + v)` the map is
//! `G(z) = λz + g20/2·z² + g11·zz̄ + g02/2·z̄²` exactly; there are no terms of
//! order three or more. The near-identity change `z = h(w)` removes every
//! quadratic and cubic term except `w²w̄`, and `h_inv` is the order-4 Taylor
//! polynomial of its inverse.

use std::collections::BTreeMap;

use super::poly::BiPoly;
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};

#[derive(Clone, Debug, PartialEq)]
pub struct NfCoefficients {
    pub a: Interval,
    pub lambda: ComplexInterval,
    pub d: ComplexInterval,
    pub g20: ComplexInterval,
    pub g11: ComplexInterval,
    pub g02: ComplexInterval,
    pub h20: ComplexInterval,
    pub h11: ComplexInterval,
    pub h02: ComplexInterval,
    pub h30: ComplexInterval,
    pub h12: ComplexInterval,
    pub h03: ComplexInterval,
    /// Coefficients of `w^k w̄^l` in `h_inv`, `2 ≤ k + l ≤ 4`.
    pub h_inv: BTreeMap<(usize, usize), ComplexInterval>,
}

fn k(x: f64) -> ComplexInterval {
    ComplexInterval::point(x, 0.0)
}

fn re(x: Interval) -> ComplexInterval {
    ComplexInterval::real(x)
}

fn div(n: ComplexInterval, d: ComplexInterval) -> Result<ComplexInterval> {
    n.checked_div(d)
}

/// Encloses every coefficient for all `a ∈ a_i`, which must lie in `(5/4, 2]`.
pub fn nf_coefficients(a_i: Interval) -> Result<NfCoefficients> {
    if a_i.lo() <= 1.25 || a_i.hi() > 2.0 {
        return Err(Error::domain("nf_coefficients", a_i, "(5/4, 2]"));
    }
    let a = a_i;
    let t = 4.0 * a - 5.0;
    let s = t.sqrt()?;
    let inv_s = s.recip()?;
    let i = ComplexInterval::I;

    let lambda = ComplexInterval::new(Interval::point(0.5), s * 0.5);
    // d = 1/(2λ - 1) = 1/(is)
    let d = ComplexInterval::new(Interval::ZERO, -inv_s);
    let a_over_s = a * inv_s;
    let g20 = ComplexInterval::new(-a, a_over_s);
    let g11 = ComplexInterval::new(Interval::ZERO, a_over_s);
    let g02 = ComplexInterval::new(a, a_over_s);

    let ac = re(a);
    let sc = re(s);
    let a2 = re(a.square());

    let h20 = div(ac * 4.0, ComplexInterval::new(t, s))?;
    // (s - i)² = (t - 1) - 2is
    let s_minus_i_sq = ComplexInterval::new(t - 1.0, s * -2.0);
    let h11 = div(i * ac * 4.0, sc * s_minus_i_sq)?;
    let h02 = div(ac * ComplexInterval::new(-inv_s, Interval::ONE), ComplexInterval::new(s, 1.0 - a))?;
    let h30_den = ComplexInterval::new(
        s * (2.0 * a.square() - a - 2.0),
        -4.0 * a.square() + 13.0 * a - 10.0,
    );
    let h30 = div(i * a2 * -12.0, h30_den)?;
    let h03_num = a2 * 96.0 * ComplexInterval::new(a - 2.0, s);
    let h03_den = sc
        * ComplexInterval::new(Interval::ONE, s)
        * ComplexInterval::new(a - 1.0, s)
        * ComplexInterval::new(s * t - 7.0 * s, 12.0 * (a - 1.0));
    let h03 = div(h03_num, h03_den)?;

    let mut c = NfCoefficients {
        a: a_i,
        lambda,
        d,
        g20,
        g11,
        g02,
        h20,
        h11,
        h02,
        h30,
        h12: ComplexInterval::ZERO,
        h03,
        h_inv: BTreeMap::new(),
    };
    // The w·w̄² coefficient of h_inv∘G∘h is affine in h12 with slope
    // (λ - λλ̄²)/2; solve for the value that cancels it.
    c.h_inv = inverse_coefficients(&c)?;
    let residual = c.composition().coeff(1, 2);
    let lb = lambda.conj();
    let slope = lambda - lambda * lb * lb;
    c.h12 = div(residual * -2.0, slope)?;
    c.h_inv = inverse_coefficients(&c)?;
    Ok(c)
}

fn inverse_coefficients(c: &NfCoefficients) -> Result<BTreeMap<(usize, usize), ComplexInterval>> {
    let (h20, h11, h02, h30, h12, h03) = (c.h20, c.h11, c.h02, c.h30, c.h12, c.h03);
    let (ch20, ch11, ch02, ch30, ch12, ch03) = (h20.conj(), h11.conj(), h02.conj(), h30.conj(), h12.conj(), h03.conj());
    let sixth = |x: ComplexInterval| div(x, k(6.0));
    let quarter = |x: ComplexInterval| x * 0.25;
    let half = |x: ComplexInterval| x * 0.5;
    let mut m = BTreeMap::new();

    m.insert((2, 0), half(-h20));
    m.insert((1, 1), -h11);
    m.insert((0, 2), half(-h02));

    m.insert((3, 0), sixth(h20 * h20 * 3.0 - h30 + h11 * ch02 * 3.0)?);
    m.insert((2, 1), half(h11 * h20 * 3.0 + h02 * ch02 + h11 * ch11 * 2.0));
    m.insert((1, 2), half(h11 * h11 * 2.0 - h12 + h02 * h20 + h02 * ch11 * 2.0 + h11 * ch20));
    m.insert((0, 3), sixth(h02 * h11 * 3.0 - h03 + h02 * ch20 * 3.0)?);

    let h40 = h20 * h20 * h20 * -15.0 + h20 * h30 * 10.0 - h11 * h20 * ch02 * 30.0 - h02 * ch02 * ch02 * 3.0
        + h11 * ch03 * 4.0
        - h11 * ch02 * ch11 * 12.0;
    m.insert((4, 0), div(h40, k(24.0))?);

    let h31 = h11 * h20 * h20 * -15.0 + h11 * h30 * 4.0 - h11 * h11 * ch02 * 12.0 + h12 * ch02 * 3.0
        - h02 * h20 * ch02 * 6.0
        + h02 * ch03
        - h11 * h20 * ch11 * 12.0
        - h02 * ch02 * ch11 * 6.0
        - h11 * ch11 * ch11 * 6.0
        + h11 * ch12 * 3.0
        - h11 * ch02 * ch20 * 3.0;
    m.insert((3, 1), sixth(h31)?);

    let h22 = h11 * h11 * h20 * -12.0 + h12 * h20 * 3.0 - h02 * h20 * h20 * 3.0 + h02 * h30 + h03 * ch02
        - h02 * h11 * ch02 * 9.0
        - h11 * h11 * ch11 * 12.0
        + h12 * ch11 * 4.0
        - h02 * h20 * ch11 * 6.0
        - h02 * ch11 * ch11 * 6.0
        + h02 * ch12 * 2.0
        - h11 * h20 * ch20 * 3.0
        - h02 * ch02 * ch20 * 3.0
        - h11 * ch11 * ch20 * 6.0;
    m.insert((2, 2), quarter(h22));

    let h13 = h11 * h11 * h11 * -6.0 + h11 * h12 * 6.0 + h03 * h20 - h02 * h11 * h20 * 9.0 - h02 * h02 * ch02 * 3.0
        + h03 * ch11 * 3.0
        - h02 * h11 * ch11 * 18.0
        - h11 * h11 * ch20 * 6.0
        + h12 * ch20 * 3.0
        - h02 * h20 * ch20 * 3.0
        - h02 * ch11 * ch20 * 12.0
        - h11 * ch20 * ch20 * 3.0
        + h11 * ch30;
    m.insert((1, 3), sixth(h13)?);

    let h04 = h03 * h11 * 4.0 - h02 * h11 * h11 * 12.0 + h02 * h12 * 6.0 - h02 * h02 * h20 * 3.0
        - h02 * h02 * ch11 * 12.0
        + h03 * ch20 * 6.0
        - h02 * h11 * ch20 * 18.0
        - h02 * ch20 * ch20 * 15.0
        + h02 * ch30 * 4.0;
    m.insert((0, 4), div(h04, k(24.0))?);
    Ok(m)
}

impl NfCoefficients {
    /// `G(z)` as a polynomial of total degree at most `degree`.
    pub fn g_poly(&self, degree: usize) -> BiPoly {
        BiPoly::from_terms(
            degree,
            &[
                ((1, 0), self.lambda),
                ((2, 0), self.g20 * 0.5),
                ((1, 1), self.g11),
                ((0, 2), self.g02 * 0.5),
            ],
        )
    }

    /// `h(w) = w + h20/2·w² + h11·ww̄ + h02/2·w̄² + h30/6·w³ + h12/2·ww̄² + h03/6·w̄³`.
    pub fn h_poly(&self, degree: usize) -> BiPoly {
        let sixth = |x: ComplexInterval| x.checked_div(k(6.0)).expect("nonzero constant");
        BiPoly::from_terms(
            degree,
            &[
                ((1, 0), ComplexInterval::ONE),
                ((2, 0), self.h20 * 0.5),
                ((1, 1), self.h11),
                ((0, 2), self.h02 * 0.5),
                ((3, 0), sixth(self.h30)),
                ((1, 2), self.h12 * 0.5),
                ((0, 3), sixth(self.h03)),
            ],
        )
    }

    /// Order-4 Taylor polynomial of `h⁻¹`.
    pub fn h_inv_poly(&self, degree: usize) -> BiPoly {
        let mut terms = vec![((1, 0), ComplexInterval::ONE)];
        terms.extend(self.h_inv.iter().map(|(&kl, &c)| (kl, c)));
        BiPoly::from_terms(degree, &terms)
    }

    /// `h_inv∘G∘h` truncated at order 4.
    pub fn composition(&self) -> BiPoly {
        let h = self.h_poly(4);
        let gh = self.g_poly(4).compose(&h);
        self.h_inv_poly(4).compose(&gh)
    }

    /// `|g20|/2 + |g11| + |g02|/2`.
    pub fn g2_sum(&self) -> Interval {
        self.g20.modulus() * 0.5 + self.g11.modulus() + self.g02.modulus() * 0.5
    }

    /// `|h20|/2 + |h11| + |h02|/2`.
    pub fn h2_sum(&self) -> Interval {
        self.h20.modulus() * 0.5 + self.h11.modulus() + self.h02.modulus() * 0.5
    }

    /// `|h30|/6 + |h12|/2 + |h03|/6`.
    pub fn h3_sum(&self) -> Interval {
        let sixth = Interval::ratio(1, 6);
        self.h30.modulus() * sixth + self.h12.modulus() * 0.5 + self.h03.modulus() * sixth
    }

    /// `Σ_{k+l=n} |h_inv^{kl}|` for `n ∈ {2, 3, 4}`.
    pub fn h_inv_sum(&self, n: usize) -> Interval {
        self.h_inv
            .iter()
            .filter(|((k, l), _)| k + l == n)
            .map(|(_, c)| c.modulus())
            .fold(Interval::ZERO, |acc, m| acc + m)
    }
}

/// Closed forms of `|r2^{kl}(a)|`, the fourth-order coefficients of
/// `h_inv∘G∘h`, in the order `40, 31, 22, 13, 04`.
pub fn r2_moduli(a: Interval) -> Result<[Interval; 5]> {
    if a.lo() <= 1.25 || a.hi() > 2.0 {
        return Err(Error::domain("r2_moduli", a, "(5/4, 2]"));
    }
    let a2 = a.square();
    let a3 = a2 * a;
    let t = 4.0 * a - 5.0;
    let am1 = a - 1.0;
    // a³ - 5a² + 12a - 9 and a² + 2a - 4, shared denominators
    let p = a * (12.0 + (a - 5.0) * a) - 9.0;
    let q = a * (2.0 + a) - 4.0;
    let poly = |coeffs: &[f64]| coeffs.iter().rev().fold(Interval::ZERO, |acc, &c| acc * a + c);

    let r40 = {
        let inner = 1.0 + a + Interval::point(4.0).checked_div(9.0 * t)?
            + (54.0 - 10.0 * a * (3.0 + a)).checked_div(9.0 * (a * (12.0 + (a - 5.0) * a) - 9.0))?;
        (a3 * inner.sqrt()?).checked_div(4.0 + a * (a * a + a - 6.0))?
    };
    let r31 = {
        let num = poly(&[4.0, -6.0, 21.0, -242.0, 741.0, -1035.0, 824.0, -426.0, 148.0, -32.0, 4.0]).sqrt()?;
        let den = am1.square() * t * (am1 * (a + 1.0) * q * p).sqrt()?;
        (a3 * num).checked_div(den)?
    };
    let r22 = {
        let num = poly(&[1.0, 2.0, 10.0, 6.0, 220.0, -434.0, 222.0, -20.0, 1.0]).sqrt()?;
        let den = t.sqrt()? * am1.powi(3) * (a + 1.0) * q;
        (a3 * num).checked_div(den)?
    };
    let r13 = {
        let num = poly(&[
            -256.0, 64.0, 1676.0, -2498.0, -95.0, 2796.0, -2219.0, 187.0, 730.0, -550.0, 200.0, -40.0, 4.0,
        ])
        .sqrt()?;
        let den = am1.square() * am1.sqrt()? * t * q * ((a + 1.0) * p).sqrt()?;
        (a3 * num).checked_div(den)?
    };
    let r04 = {
        let num = (a * (a * (a * (4.0 * a - 17.0) + 27.0) - 6.0) - 11.0).sqrt()?;
        let den = q * (am1 * t * p).sqrt()?;
        (a3 * num).checked_div(den)?
    };
    Ok([r40, r31, r22, r13, r04])
}
