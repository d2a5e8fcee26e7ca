//! Square attracting neighborhoods from the linearization at `(A, A)`.
//!
//! With `u = x - A`, `v = y - A` and the eigen-coordinate
//! `z = d((λ-1)u + v)` the map reads `z ↦ λz + d·g_a(z)`, and
//! `|λz + d·g_a(z)| < |z|` whenever `|z| < ζ₀(a)`. Converting the disc back to
//! `(u, v)` gives the half-width
//!
//! ```text
//! ε(a) = √(4a-5)(1-√(a-1)) / (a(2√(a-1)+1)) · √(4a-5)/√(a+1)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Box2, Interval};
use crate::map::ParameterSlice;
use crate::regions::fixed_point_of;
use crate::verify::{bisect_verify, Check, VerificationReport};

pub const DEFAULT_FLOOR: f64 = 0.007;

/// Axis-aligned square `[A⁺-w, A⁻+w]²` contained in the attracting
/// neighborhood of every parameter of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectNeighborhood {
    /// Fixed-point enclosure `[A⁻, A⁺]` (same for both coordinates).
    pub center: Interval,
    /// Certified lower bound on `ε(a)` over the slice.
    pub half_width: f64,
}

impl RectNeighborhood {
    /// The conservative square, or `None` when the displacement of the fixed
    /// point eats the whole budget.
    pub fn rect(&self) -> Option<Box2> {
        let lo = self.center.hi() - self.half_width;
        let hi = self.center.lo() + self.half_width;
        // Shrink by one ulp on each side so the square stays inside the exact one.
        let (lo, hi) = (lo.next_up(), hi.next_down());
        (lo <= hi).then(|| Box2::square(lo, hi))
    }

    pub fn contains_box(&self, b: Box2) -> bool {
        self.rect().is_some_and(|r| b.subset_of(r))
    }
}

fn eps_formula(a: Interval) -> Result<Interval> {
    let s = (4.0 * a - 5.0).sqrt()?;
    let r = (a - 1.0).sqrt()?;
    let zeta = (s * (1.0 - r)).checked_div(a * (2.0 * r + 1.0))?;
    Ok(zeta * s.checked_div((a + 1.0).sqrt()?)?)
}

/// Encloses `ε(a)` over `a ∈ s.a`.
pub fn epsilon_lin(s: &ParameterSlice) -> Result<Interval> {
    epsilon_of(s.a)
}

/// Encloses `ε(a)` over `a`, which must lie in `(5/4, 2)`.
pub fn epsilon_of(a: Interval) -> Result<Interval> {
    if a.lo() <= 1.25 || a.hi() >= 2.0 {
        return Err(Error::domain("epsilon_lin", a, "(5/4, 2)"));
    }
    eps_formula(a)
}

/// Bisects `range` until `ε(I) ≥ floor` on every piece.
pub fn verify_eps_floor(range: Interval, floor: f64) -> Result<VerificationReport> {
    verify_eps_floor_with_depth(range, floor, crate::verify::DEFAULT_MAX_DEPTH)
}

pub fn verify_eps_floor_with_depth(range: Interval, floor: f64, max_depth: u32) -> Result<VerificationReport> {
    if !(floor > 0.0) {
        return Err(Error::Config(format!("floor must be positive, got {floor}")));
    }
    if range.lo() <= 1.25 || range.hi() >= 2.0 {
        return Err(Error::domain("verify_eps_floor", range, "(5/4, 2)"));
    }
    bisect_verify("eps_lin >= floor", range, max_depth, |sub| {
        let e = eps_formula(sub)?;
        Ok(Check::lower_bound(e, floor))
    })
}

/// The conservative square shared by every `a` of the slice. The caller is
/// expected to have run [`verify_eps_floor`] for `s.a` at `floor`.
pub fn rect_neighborhood(s: &ParameterSlice, floor: f64) -> Result<RectNeighborhood> {
    let center = fixed_point_of(s.a)?;
    let displacement = center.width();
    if displacement >= 2.0 * floor {
        return Err(Error::EmptyNeighborhood {
            displacement,
            half_width: floor,
        });
    }
    Ok(RectNeighborhood {
        center,
        half_width: floor,
    })
}

/// `ζ₀(a)`: radius of the disc in `z` on which `|G(z)| < |z|`.
pub fn zeta0(a: f64) -> f64 {
    let s = (4.0 * a - 5.0).sqrt();
    let r = (a - 1.0).sqrt();
    s * (1.0 - r) / (a * (2.0 * r + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Regime;

    fn lin(lo: f64, hi: f64) -> ParameterSlice {
        ParameterSlice::new(Interval::new(lo, hi), Regime::Linearized).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        // 30-digit reference values of the closed form.
        let e = epsilon_lin(&lin(1.5, 1.5)).unwrap();
        assert!((e.lo() - 0.051_153_148_288_348_06).abs() < 1e-15, "{e:?}");
        assert!(e.width() < 1e-15);
        let e = epsilon_lin(&lin(1.95, 1.95)).unwrap();
        assert!(e.lo() >= 0.007);
        assert!((e.lo() - 0.007_177_251_979_632_884).abs() < 1e-15);
        let e = epsilon_lin(&lin(1.999, 1.999)).unwrap();
        assert!(e.hi() < 0.0015);
        assert!((e.lo() - 0.000_144_325_466_916_166_8).abs() < 1e-15);
        assert!(epsilon_of(Interval::new(1.9, 2.0)).is_err());
        assert!(epsilon_of(Interval::new(1.2, 1.3)).is_err());
    }

    #[test]
    fn epsilon_isotone() {
        let outer = epsilon_of(Interval::new(1.6, 1.7)).unwrap();
        let inner = epsilon_of(Interval::new(1.62, 1.65)).unwrap();
        assert!(inner.subset_of(outer));
    }

    #[test]
    fn floor_verification() {
        let r = verify_eps_floor(Interval::new(1.5, 1.95), 0.007).unwrap();
        assert!(r.subintervals >= 1 && r.min_slack > 0.0);
        match verify_eps_floor(Interval::new(1.5, 1.95), 0.06) {
            Err(Error::VerificationFailed { witness: Some(w), .. }) => {
                // ε(1.5) ≈ 0.0511 < 0.06 already; the failure is certain, not a bisection artefact.
                assert!(w.lo() >= 1.5 && w.hi() <= 1.95);
            }
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(verify_eps_floor(Interval::point(1.6), 0.01).is_ok());
    }

    #[test]
    fn rect_examples() {
        let w = (2.0f64).powi(-10);
        let s = lin(1.75, 1.75 + w);
        let n = rect_neighborhood(&s, 0.007).unwrap();
        // A⁺ - A⁻ = 1/a⁻ - 1/a⁺ = w / (a⁻ a⁺)
        let disp = w / (1.75 * (1.75 + w));
        let r = n.rect().unwrap();
        assert!(((r.x.hi() - r.x.lo()) / 2.0 - (0.007 - disp / 2.0)).abs() < 1e-12);

        let n = rect_neighborhood(&lin(1.8, 1.8), 0.007).unwrap();
        let r = n.rect().unwrap();
        assert!(r.x.contains(4.0 / 9.0 - 0.007 + 1e-15) && r.x.contains(4.0 / 9.0 + 0.007 - 1e-15));

        // width 0.02 at a ≈ 1.6: displacement 0.02/(1.6·1.62) ≈ 0.0077 < 0.014, still nonempty
        assert!(rect_neighborhood(&lin(1.6, 1.62), 0.007).is_ok());
        // width 0.05 at a = 1.5: 0.05/(1.5·1.55) ≈ 0.0215 ≥ 0.014
        assert!(matches!(
            rect_neighborhood(&lin(1.5, 1.55), 0.007),
            Err(Error::EmptyNeighborhood { .. })
        ));
    }
}
