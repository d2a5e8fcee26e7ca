//! Attracting neighborhoods from the normal form near `a = 2`.
//!
//! With `w = h⁻¹(z)` the map becomes `w ↦ λw + c₁w²w̄ + R₂(w)`. A budget of
//! real constants bounds the coefficients of `h`, `G` and `h⁻¹`, the radii
//! of the discs they map between, and the remainders. Each check below
//! certifies one link of that chain by interval evaluation over the
//! parameter range. When all of them pass, the disc `|z| ≤ ε_G` lies in the
//! basin of the fixed point for every `a` of the range, which in `(u, v)`
//! coordinates is an ellipse.

mod coefficients;
pub mod poly;

use serde::{Deserialize, Serialize};

pub use coefficients::{nf_coefficients, r2_moduli, NfCoefficients};
use poly::RealPoly;

use crate::error::{Error, Result};
use crate::interval::{Box2, ComplexInterval, Interval};
use crate::map::ParameterSlice;
use crate::regions::fixed_point_of;
use crate::verify::{
    bisect_verify, split, undecided_on_domain_error, Check, VerificationReport, DEFAULT_MAX_DEPTH,
};

/// Parameters below this are outside the reach of the normal-form budgets.
pub const NF_RANGE_LO: f64 = 1.95;

/// Real constants of the normal-form argument. Every value is a cap that the
/// checks certify, not an input that is trusted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NfBudget {
    pub a0: f64,
    pub beta0: f64,
    pub g2: f64,
    pub h2: f64,
    pub h3: f64,
    pub ht2: f64,
    pub ht3: f64,
    pub ht4: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub r30: f64,
    pub r24: f64,
    pub r25: f64,
    pub r20: f64,
    pub r4: f64,
    pub eps_g: f64,
    /// Caps on `|Re c̃₁|` and `|Im c̃₁|`.
    pub c1_re_cap: f64,
    pub c1_im_cap: f64,
}

impl NfBudget {
    /// Constants for `a ∈ [1.995, 2]`.
    pub fn b1() -> Self {
        NfBudget {
            a0: 2.0,
            beta0: 0.005,
            g2: 3.47,
            h2: 2.9,
            h3: 4.7,
            ht2: 2.9,
            ht3: 8.2,
            ht4: 30.0,
            rho0: 0.015,
            rho1: 0.0,
            rho2: 0.0,
            rho3: 0.018,
            delta1: 1.0 / 9.0,
            delta2: 1.0 / 16.0,
            r30: 1070.0,
            r24: 40.0,
            r25: 90.0,
            r20: 130.0,
            r4: 0.1,
            eps_g: 0.014,
            c1_re_cap: 2.1,
            c1_im_cap: 3.5,
        }
        .with_derived_radii()
    }

    /// Constants for `a ∈ [1.95, 2]`. The coefficient majorants of
    /// [`NfBudget::b1`] do not hold this far from `a = 2` (`h₂` reaches
    /// 3.0126 at 1.95), so the whole chain is re-derived.
    pub fn b0() -> Self {
        NfBudget {
            a0: 2.0,
            beta0: 0.05,
            g2: 3.47,
            h2: 3.02,
            h3: 5.1,
            ht2: 3.02,
            ht3: 8.7,
            ht4: 32.5,
            rho0: 0.014,
            rho1: 0.0,
            rho2: 0.0,
            rho3: 0.0175,
            delta1: 1.0 / 9.0,
            delta2: 1.0 / 16.0,
            r30: 1230.0,
            r24: 42.5,
            r25: 93.0,
            r20: 135.0,
            r4: 0.12,
            eps_g: 0.013,
            c1_re_cap: 2.1,
            c1_im_cap: 3.75,
        }
        .with_derived_radii()
    }

    /// The preset whose range contains `a`: [`NfBudget::b1`] on
    /// `[1.995, 2]`, [`NfBudget::b0`] on `[1.95, 2]`.
    pub fn for_range(a: Interval) -> Result<Self> {
        [NfBudget::b1(), NfBudget::b0()]
            .into_iter()
            .find(|b| a.subset_of(b.range()))
            .ok_or_else(|| Error::domain("NfBudget::for_range", a, "[1.95, 2]"))
    }

    pub fn with_eps(mut self, eps_g: f64) -> Self {
        self.eps_g = eps_g;
        self
    }

    /// Sets `ρ₁ = h^max(ρ₀)` and `ρ₂ = G^max(ρ₁)`, rounded up.
    pub fn with_derived_radii(mut self) -> Self {
        self.rho1 = self.h_max().eval(Interval::point(self.rho0)).hi();
        self.rho2 = self.g_max().eval(Interval::point(self.rho1)).hi();
        self
    }

    pub fn range(&self) -> Interval {
        Interval::new(self.a0 - self.beta0, self.a0)
    }

    /// `h^max(t) = t + h₂t² + h₃t³`.
    pub fn h_max(&self) -> RealPoly {
        RealPoly::from_f64(&[0.0, 1.0, self.h2, self.h3])
    }

    /// `G^max(t) = t + g₂t²`; `|λ| ≤ 1` and `G` has no terms above order 2.
    pub fn g_max(&self) -> RealPoly {
        RealPoly::from_f64(&[0.0, 1.0, self.g2])
    }

    /// `h̃₀^max(t) = t + h̃₂t² + h̃₃t³ + h̃₄t⁴`.
    pub fn ht0_max(&self) -> RealPoly {
        RealPoly::from_f64(&[0.0, 1.0, self.ht2, self.ht3, self.ht4])
    }

    /// `h̃^max(t) = h̃₀^max(t) + R₃₀t⁵`, valid for `t ≤ ρ₂`.
    pub fn ht_max(&self) -> RealPoly {
        RealPoly::from_f64(&[0.0, 1.0, self.ht2, self.ht3, self.ht4, self.r30])
    }

    /// `η(ρ) = 1/(1 - h₂ρ - h₃ρ²)`.
    pub fn eta(&self, rho: f64) -> Result<Interval> {
        let r = Interval::point(rho);
        let den = 1.0 - self.h2 * r - self.h3 * r.square();
        if den.lo() <= 0.0 {
            return Err(Error::domain("eta", rho, "1 - h2·ρ - h3·ρ² > 0"));
        }
        den.recip()
    }
}

/// A certified inequality `value ≤ limit` (or `<` where stated) with its
/// margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub slack: f64,
}

impl BoundCheck {
    fn upper(name: &str, value: Interval, limit: f64, strict: bool) -> Result<BoundCheck> {
        let ok = if strict { value.hi() < limit } else { value.hi() <= limit };
        if !ok {
            return Err(Error::VerificationFailed {
                check: name.to_string(),
                witness: None,
                detail: format!("{} exceeds {limit}", value.hi()),
                inconclusive: value.lo() <= limit,
            });
        }
        Ok(BoundCheck {
            name: name.to_string(),
            value: value.hi(),
            limit,
            slack: limit - value.hi(),
        })
    }

    fn lower(name: &str, value: Interval, limit: f64, strict: bool) -> Result<BoundCheck> {
        let ok = if strict { value.lo() > limit } else { value.lo() >= limit };
        if !ok {
            return Err(Error::VerificationFailed {
                check: name.to_string(),
                witness: None,
                detail: format!("{} below {limit}", value.lo()),
                inconclusive: value.hi() >= limit,
            });
        }
        Ok(BoundCheck {
            name: name.to_string(),
            value: value.lo(),
            limit,
            slack: value.lo() - limit,
        })
    }

    fn from_report(r: &VerificationReport, limit: f64) -> BoundCheck {
        BoundCheck {
            name: r.check.clone(),
            value: limit - r.min_slack,
            limit,
            slack: r.min_slack,
        }
    }
}

/// Bisection with domain failures on wide pieces counted as undecided.
fn verify_over<F>(name: &str, range: Interval, pred: F) -> Result<VerificationReport>
where
    F: Fn(Interval) -> Result<Check> + Sync,
{
    bisect_verify(name, range, DEFAULT_MAX_DEPTH, |piece| undecided_on_domain_error(pred(piece)))
}

fn check_range(op: &'static str, a: Interval) -> Result<()> {
    if a.lo() < NF_RANGE_LO || a.hi() > 2.0 {
        return Err(Error::domain(op, a, "[1.95, 2]"));
    }
    Ok(())
}

/// Certifies the six coefficient majorants of the budget on `a_i`.
pub fn verify_majorants(a_i: Interval, budget: &NfBudget) -> Result<Vec<VerificationReport>> {
    check_range("verify_majorants", a_i)?;
    type Sum = fn(&NfCoefficients) -> Interval;
    let sums: [(&str, f64, Sum); 6] = [
        ("g2", budget.g2, |c| c.g2_sum()),
        ("h2", budget.h2, |c| c.h2_sum()),
        ("h3", budget.h3, |c| c.h3_sum()),
        ("ht2", budget.ht2, |c| c.h_inv_sum(2)),
        ("ht3", budget.ht3, |c| c.h_inv_sum(3)),
        ("ht4", budget.ht4, |c| c.h_inv_sum(4)),
    ];
    sums.iter()
        .map(|&(name, cap, f)| {
            verify_over(name, a_i, |piece| {
                Ok(Check::upper_bound(f(&nf_coefficients(piece)?), cap))
            })
        })
        .collect()
}

/// Checks that `H(w) = z - (h(w) - w)` is a contraction of `B̄_{δ₁}` into
/// itself for `|z| ≤ δ₂`, which makes `h⁻¹` well defined on `B_{δ₂}`.
pub fn inversion_domain_check(budget: &NfBudget) -> Result<Vec<BoundCheck>> {
    let d1 = Interval::point(budget.delta1);
    let d2 = Interval::point(budget.delta2);
    let contraction = 2.0 * d1 * budget.h2 + 3.0 * d1.square() * budget.h3;
    let self_map = d2 + d1.square() * budget.h2 + d1.powi(3) * budget.h3;
    Ok(vec![
        BoundCheck::upper("inversion contraction factor", contraction, 1.0, true)?,
        BoundCheck::upper("inversion self-map", self_map, budget.delta1, false)?,
    ])
}

/// Checks the radii: `h(B_{ρ₀}) ⊆ B_{ρ₁}`, `G(B_{ρ₁}) ⊆ B_{ρ₂}`,
/// `h⁻¹(B_{ρ₂}) ⊆ B_{ρ₃}`, and that all of them sit inside the inversion
/// domains.
///
/// The third inclusion uses `|h(w)| ≥ φ(|w|)` with `φ(t) = t - h₂t² - h₃t³`:
/// if `φ` increases on `[0, ρ₃]` and `φ(ρ₃) > ρ₂`, no `w` with
/// `ρ₃ ≤ |w| ≤ δ₁` maps into `B_{ρ₂}`.
pub fn radii_check(budget: &NfBudget) -> Result<Vec<BoundCheck>> {
    let b = budget;
    let r0 = Interval::point(b.rho0);
    let r1 = Interval::point(b.rho1);
    let r3 = Interval::point(b.rho3);
    let phi = r3 - b.h2 * r3.square() - b.h3 * r3.powi(3);
    let dphi = 1.0 - 2.0 * b.h2 * r3 - 3.0 * b.h3 * r3.square();
    Ok(vec![
        BoundCheck::upper("rho1 >= h_max(rho0)", b.h_max().eval(r0), b.rho1, false)?,
        BoundCheck::upper("rho2 >= G_max(rho1)", b.g_max().eval(r1), b.rho2, false)?,
        BoundCheck::lower("phi(rho3) > rho2", phi, b.rho2, true)?,
        BoundCheck::lower("phi increasing on [0, rho3]", dphi, 0.0, true)?,
        BoundCheck::upper("rho0 < delta1", r0, b.delta1, true)?,
        BoundCheck::upper("rho3 < delta1", r3, b.delta1, true)?,
        BoundCheck::upper("rho1 < delta2", r1, b.delta2, true)?,
        BoundCheck::upper("rho2 < delta2", Interval::point(b.rho2), b.delta2, true)?,
    ])
}

/// `h̃₀^max∘h^max`, the polynomial whose order ≥ 5 part bounds `R₃(h(w))`.
pub fn r3_polynomial(budget: &NfBudget) -> RealPoly {
    budget.ht0_max().compose(&budget.h_max())
}

/// Bounds the order ≥ 5 part of `h⁻¹` on `B_{ρ₂}`:
/// `R₃₀ = Σ_{j=5}^{12} r₃ʲ ρ₃^{j-5} η(ρ₃)⁵`, checked against the budget.
pub fn r3_bound(budget: &NfBudget) -> Result<BoundCheck> {
    let r3 = r3_polynomial(budget);
    let rho3 = Interval::point(budget.rho3);
    let value = r3.tail_sum(5, rho3, 5) * budget.eta(budget.rho3)?.powi(5);
    BoundCheck::upper("R30", value, budget.r30, false).map_err(|e| budget_exceeded(e, "R30", Some(value.hi()), budget.r30))
}

/// `h̃^max∘G^max∘h^max`, degree 30.
pub fn r2_polynomial(budget: &NfBudget) -> RealPoly {
    budget.ht_max().compose(&budget.g_max().compose(&budget.h_max()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct R2Bound {
    pub r24: BoundCheck,
    pub r25: BoundCheck,
    pub r20: BoundCheck,
}

/// Bounds the order ≥ 4 remainder of the normal form on `B_{ρ₀}`:
/// `R₂₄` from the closed-form fourth-order moduli over `a_i`, `R₂₅` from the
/// order ≥ 5 part of [`r2_polynomial`], and `R₂₀ = R₂₄ + R₂₅`.
pub fn r2_bound(budget: &NfBudget, a_i: Interval) -> Result<R2Bound> {
    check_range("r2_bound", a_i)?;
    let report = verify_over("R24", a_i, |piece| {
        let sum = r2_moduli(piece)?.into_iter().fold(Interval::ZERO, |acc, m| acc + m);
        Ok(Check::upper_bound(sum, budget.r24))
    })
    .map_err(|e| budget_exceeded(e, "R24", None, budget.r24))?;
    let r24 = BoundCheck::from_report(&report, budget.r24);

    let poly = r2_polynomial(budget);
    let r25_value = poly.tail_sum(5, Interval::point(budget.rho0), 4);
    let r25 = BoundCheck::upper("R25", r25_value, budget.r25, false)
        .map_err(|e| budget_exceeded(e, "R25", Some(r25_value.hi()), budget.r25))?;
    let r20_value = Interval::point(r24.value) + r25_value;
    let r20 = BoundCheck::upper("R20", r20_value, budget.r20, false)
        .map_err(|e| budget_exceeded(e, "R20", Some(r20_value.hi()), budget.r20))?;
    Ok(R2Bound { r24, r25, r20 })
}

fn budget_exceeded(e: Error, bound: &'static str, value: Option<f64>, cap: f64) -> Error {
    match (e, value) {
        (Error::VerificationFailed { inconclusive: false, .. }, Some(value)) => Error::BudgetExceeded { bound, value, cap },
        (Error::VerificationFailed { inconclusive: false, detail, .. }, None) => Error::BudgetExceeded {
            bound,
            value: detail
                .strip_prefix("violated by ")
                .and_then(|v| v.parse::<f64>().ok())
                .map_or(f64::NAN, |v| cap + v),
            cap,
        },
        (other, _) => other,
    }
}

/// `c₁` and `c̃₁ = |λ|/λ · c₁` over a parameter range.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicCoefficient {
    pub c1: ComplexInterval,
    pub c1_tilde: ComplexInterval,
    pub reports: Vec<VerificationReport>,
}

/// `c̃₁ = c₁·λ̄/|λ|`, with `c₁` the `w²w̄` coefficient of `h_inv∘G∘h`.
pub fn c1_tilde(c: &NfCoefficients) -> Result<(ComplexInterval, ComplexInterval)> {
    let c1 = c.composition().coeff(2, 1);
    let ct = (c1 * c.lambda.conj()) * c.lambda.modulus().recip()?;
    Ok((c1, ct))
}

/// Closed form of `Re c̃₁ = -N(t) / (4√(t+1)·D(t))` with `t = 4a - 5`.
pub fn re_c1_tilde_closed(a: Interval) -> Result<Interval> {
    let t = 4.0 * a - 5.0;
    let (n, d) = (re_c1_numerator(t), re_c1_denominator(t));
    Ok(-n.checked_div(4.0 * (t + 1.0).sqrt()? * d)?)
}

fn re_c1_numerator(t: Interval) -> Interval {
    RealPoly::from_f64(&[-125.0, 300.0, 210.0, 44.0, 3.0]).eval(t)
}

fn re_c1_denominator(t: Interval) -> Interval {
    RealPoly::from_f64(&[1.0, 19.0, 19.0, 1.0]).eval(t)
}

/// Certifies `Re c̃₁ ≤ -2` on `a_i`.
///
/// The bound is attained at `a = 2`, so a direct enclosure of `Re c̃₁`
/// straddles `-2` there. Instead, `N² - 64(t+1)D² = (t-3)²·Q(t)`; with
/// `N, D, Q > 0` this gives `N ≥ 8√(t+1)·D`.
pub fn verify_re_c1_tilde_le_minus_two(a_i: Interval) -> Result<VerificationReport> {
    check_range("verify_re_c1_tilde_le_minus_two", a_i)?;
    let q = RealPoly::from_f64(&[1729.0, -7458.0, -4105.0, 2884.0, 2143.0, 254.0, 9.0]);
    verify_over("Re c1_tilde <= -2", a_i, |piece| {
        let t = 4.0 * piece - 5.0;
        let tiny = f64::MIN_POSITIVE;
        Ok(Check::lower_bound(q.eval(t), tiny)
            .and(Check::lower_bound(re_c1_numerator(t), tiny))
            .and(Check::lower_bound(re_c1_denominator(t), tiny)))
    })
}

/// Encloses `c₁`, `c̃₁` over `a_i` and certifies `Re c̃₁ < 0`, `Im c̃₁ < 0`,
/// `2 ≤ |Re c̃₁| ≤ re_cap` and `|Im c̃₁| ≤ im_cap`.
pub fn cubic_coefficient(a_i: Interval, re_cap: f64, im_cap: f64) -> Result<CubicCoefficient> {
    check_range("cubic_coefficient", a_i)?;
    let (c1, ct) = c1_tilde(&nf_coefficients(a_i)?)?;
    let lower = verify_re_c1_tilde_le_minus_two(a_i)?;
    let upper = verify_over("|Re c1_tilde| <= cap", a_i, |piece| {
        let (_, ct) = c1_tilde(&nf_coefficients(piece)?)?;
        Ok(Check::lower_bound(ct.re, -re_cap))
    })?;
    let im = verify_over("Im c1_tilde in [-cap, 0)", a_i, |piece| {
        let (_, ct) = c1_tilde(&nf_coefficients(piece)?)?;
        Ok(Check::strictly_below(ct.im, 0.0).and(Check::lower_bound(ct.im, -im_cap)))
    })?;
    Ok(CubicCoefficient {
        c1,
        c1_tilde: ct,
        reports: vec![lower, upper, im],
    })
}

/// Number of pieces `[0, ρ₀]` is cut into for the `|w|` direction of (rec2).
const W_PIECES: u32 = 6;

/// Certifies that `B_{ρ₀}` contracts in `w` and that `B_{ε_G}` maps into it.
///
/// 1. `0 ≤ 2R₄|λ| - (Im c̃₁)²|w| + 2R₄(Re c̃₁)|w|² + R₄²|w|³` for
///    `|w| ≤ ρ₀`, so that `||λ| + c̃₁|w|²| ≤ |λ| + Re c̃₁|w|² + R₄|w|³`;
/// 2. `ρ₀ < 2/(R₄ + R₂₀) ≤ -Re c̃₁/(R₄ + R₂₀)`, so `|w|` strictly decreases;
/// 3. `ε_G ≤ ρ₂` and `h̃^max(ε_G) < ρ₀`.
pub fn final_contraction_check(budget: &NfBudget, a_i: Interval) -> Result<Vec<BoundCheck>> {
    check_range("final_contraction_check", a_i)?;
    let b = budget;
    verify_re_c1_tilde_le_minus_two(a_i)?;
    let ws = split(Interval::new(0.0, b.rho0), W_PIECES);
    let rec2 = verify_over("rec2", a_i, |piece| {
        let c = nf_coefficients(piece)?;
        let (_, ct) = c1_tilde(&c)?;
        let lam = c.lambda.modulus();
        let (re, im2) = (ct.re, ct.im.square());
        let r4 = b.r4;
        Ok(ws
            .iter()
            .map(|&w| {
                let v = 2.0 * r4 * lam - im2 * w + 2.0 * r4 * re * w.square() + r4 * r4 * w.powi(3);
                Check::lower_bound(v, 0.0)
            })
            .reduce(Check::and)
            .expect("nonempty"))
    })?;
    let rho0_bound = Interval::point(b.rho0) * (Interval::point(b.r4) + b.r20);
    let eps = Interval::point(b.eps_g);
    Ok(vec![
        BoundCheck::from_report(&rec2, 0.0),
        BoundCheck::upper("rho0 (R4 + R20) < -Re c1_tilde", rho0_bound, 2.0, true)?,
        BoundCheck::upper("eps_G <= rho2", eps, b.rho2, false)?,
        BoundCheck::upper("ht_max(eps_G) < rho0", b.ht_max().eval(eps), b.rho0, true)?,
    ])
}

/// `λ^k ≠ 1` for `k = 1..4` on `a_i`.
pub fn non_resonance(a_i: Interval) -> Result<VerificationReport> {
    check_range("non_resonance", a_i)?;
    verify_over("non-resonance k=1..4", a_i, |piece| {
        let c = nf_coefficients(piece)?;
        let unit = c.lambda * c.lambda.modulus().recip()?;
        Ok((1..=4)
            .map(|k| Check::lower_bound((unit.powi(k) - ComplexInterval::ONE).modulus(), f64::MIN_POSITIVE))
            .reduce(Check::and)
            .expect("nonempty"))
    })
}

/// Largest `ε` (to within `1e-7`) with `ε ≤ ρ₂` and `h̃^max(ε) < ρ₀`.
pub fn max_certified_eps(budget: &NfBudget) -> f64 {
    let ok = |e: f64| e <= budget.rho2 && budget.ht_max().eval(Interval::point(e)).hi() < budget.rho0;
    let (mut lo, mut hi) = (0.0, budget.rho0);
    while hi - lo > 1e-7 {
        let m = 0.5 * (lo + hi);
        if ok(m) {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

/// Outcome of the full chain for one budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NfReport {
    pub range: Interval,
    pub eps_g: f64,
    pub checks: Vec<BoundCheck>,
}

impl NfReport {
    pub fn min_slack(&self) -> f64 {
        self.checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Runs every check of the chain over `budget.range()`.
pub fn certify(budget: &NfBudget) -> Result<NfReport> {
    let range = budget.range();
    check_range("certify", range)?;
    let mut checks = vec![BoundCheck::from_report(&non_resonance(range)?, 0.0)];
    let caps = [budget.g2, budget.h2, budget.h3, budget.ht2, budget.ht3, budget.ht4];
    for (r, cap) in verify_majorants(range, budget)?.iter().zip(caps) {
        checks.push(BoundCheck::from_report(r, cap));
    }
    checks.extend(inversion_domain_check(budget)?);
    checks.extend(radii_check(budget)?);
    checks.push(r3_bound(budget)?);
    let r2 = r2_bound(budget, range)?;
    checks.extend([r2.r24, r2.r25, r2.r20]);
    let cubic = cubic_coefficient(range, budget.c1_re_cap, budget.c1_im_cap)?;
    let limits = [2.0, budget.c1_re_cap, budget.c1_im_cap];
    for (r, limit) in cubic.reports.iter().zip(limits) {
        checks.push(BoundCheck::from_report(r, limit));
    }
    checks.extend(final_contraction_check(budget, range)?);
    Ok(NfReport {
        range,
        eps_g: budget.eps_g,
        checks,
    })
}

/// The set `{(x, y) : |c_u(x - A) + c_v(y - A)| ≤ ε_G}` for every `a` of a
/// slice, with `z = c_u·u + c_v·v` the eigen-coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipseNeighborhood {
    pub center: Interval,
    pub eps_g: f64,
    pub c_u: ComplexInterval,
    pub c_v: ComplexInterval,
}

impl EllipseNeighborhood {
    pub fn z(&self, x: Interval, y: Interval) -> ComplexInterval {
        self.c_u * (x - self.center) + self.c_v * (y - self.center)
    }

    /// True when `(x, y)` is inside for every `a` of the slice.
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        self.z(Interval::point(x), Interval::point(y)).modulus().hi() <= self.eps_g
    }

    /// Corner test; exact for each fixed `a` because the set is convex.
    pub fn contains_box(&self, b: Box2) -> bool {
        b.corners().iter().all(|&(x, y)| self.contains_point(x, y))
    }

    /// Boundary points of the ellipse at the midpoint parameter, for drawing:
    /// `u = 2 Re z`, `v = 2 Re(λz)` with `z = ε_G e^{iθ}`.
    pub fn outline(&self, a: f64, n: usize) -> Vec<(f64, f64)> {
        let s = (4.0 * a - 5.0).sqrt();
        let fp = 1.0 - 1.0 / a;
        (0..n)
            .map(|j| {
                let th = std::f64::consts::TAU * j as f64 / n as f64;
                let (zr, zi) = (self.eps_g * th.cos(), self.eps_g * th.sin());
                let u = 2.0 * zr;
                let v = 2.0 * (0.5 * zr - 0.5 * s * zi);
                (fp + u, fp + v)
            })
            .collect()
    }
}

/// The ellipse for a slice inside `[1.95, 2]`. The caller is expected to
/// have run [`certify`] on a budget whose range contains `s.a`.
pub fn ellipse_neighborhood(s: &ParameterSlice, eps_g: f64) -> Result<EllipseNeighborhood> {
    check_range("ellipse_neighborhood", s.a)?;
    if !(eps_g > 0.0) {
        return Err(Error::Config(format!("eps_G must be positive, got {eps_g}")));
    }
    let c = nf_coefficients(s.a)?;
    Ok(EllipseNeighborhood {
        center: fixed_point_of(s.a)?,
        eps_g,
        c_u: c.d * (c.lambda - ComplexInterval::ONE),
        c_v: c.d,
    })
}
