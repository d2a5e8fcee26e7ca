mod common;

use common::{ex, Exact};
use dlmap::interval::round;
use dlmap::interval::{ComplexInterval, Interval};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0, -60i32..60).prop_map(|(m, e)| m * (e as f64).exp2())
}

fn interval() -> impl Strategy<Value = Interval> {
    (finite(), finite()).prop_map(|(a, b)| Interval::new(a.min(b), a.max(b)))
}

/// A member of `iv` at relative position `t`.
fn member(iv: Interval, t: f64) -> f64 {
    (iv.lo() + t * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi())
}

fn below(e: &Exact, b: f64) -> bool {
    e.cmp_f64(b) != std::cmp::Ordering::Greater
}

fn above(e: &Exact, b: f64) -> bool {
    e.cmp_f64(b) != std::cmp::Ordering::Less
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn directed_rounding_brackets(a in finite(), b in finite()) {
        let (s, p) = (ex(a).add(&ex(b)), ex(a).mul(&ex(b)));
        prop_assert!(above(&s, round::add_down(a, b)) && below(&s, round::add_up(a, b)));
        prop_assert!(above(&p, round::mul_down(a, b)) && below(&p, round::mul_up(a, b)));
        let d = ex(a).sub(&ex(b));
        prop_assert!(above(&d, round::sub_down(a, b)) && below(&d, round::sub_up(a, b)));
        prop_assert!(round::add_up(a, b) - round::add_down(a, b) <= 2.0 * (a + b).abs() * f64::EPSILON + f64::MIN_POSITIVE);
    }

    #[test]
    fn directed_division_and_sqrt(a in finite(), b in finite()) {
        prop_assume!(b != 0.0);
        let (lo, hi) = (round::div_down(a, b), round::div_up(a, b));
        // lo ≤ a/b ≤ hi, checked as products with b.
        let (l, h) = (ex(lo).mul(&ex(b)), ex(hi).mul(&ex(b)));
        if b > 0.0 {
            prop_assert!(below(&l, a) && above(&h, a));
        } else {
            prop_assert!(above(&l, a) && below(&h, a));
        }
        let x = a.abs();
        let (sl, sh) = (round::sqrt_down(x), round::sqrt_up(x));
        prop_assert!(below(&ex(sl).mul(&ex(sl)), x) && above(&ex(sh).mul(&ex(sh)), x));
    }

    #[test]
    fn hull_intersect_bisect(x in interval(), y in interval()) {
        let h = x.hull(y);
        prop_assert!(x.subset_of(h) && y.subset_of(h));
        match x.intersect(y) {
            Some(i) => {
                prop_assert!(i.subset_of(x) && i.subset_of(y));
                prop_assert!(x.overlaps(y));
            }
            None => prop_assert!(!x.overlaps(y)),
        }
        let (l, r) = x.bisect();
        prop_assert_eq!(l.lo(), x.lo());
        prop_assert_eq!(r.hi(), x.hi());
        prop_assert_eq!(l.hi(), r.lo());
        prop_assert!(l.subset_of(x) && r.subset_of(x));
    }

    #[test]
    fn complex_mul_contains_exact(
        ar in interval(), ai in interval(), br in interval(), bi in interval(),
        t in proptest::array::uniform4(0.0f64..=1.0),
    ) {
        let z = ComplexInterval::new(ar, ai) * ComplexInterval::new(br, bi);
        let (p, q, r, s) = (member(ar, t[0]), member(ai, t[1]), member(br, t[2]), member(bi, t[3]));
        let re = ex(p).mul(&ex(r)).sub(&ex(q).mul(&ex(s)));
        let im = ex(p).mul(&ex(s)).add(&ex(q).mul(&ex(r)));
        prop_assert!(re.inside(z.re) && im.inside(z.im));
    }

    #[test]
    fn complex_modulus_contains_exact(ar in interval(), ai in interval(), t in 0.0f64..=1.0, u in 0.0f64..=1.0) {
        let m = ComplexInterval::new(ar, ai).modulus();
        let (p, q) = (member(ar, t), member(ai, u));
        let n2 = ex(p).mul(&ex(p)).add(&ex(q).mul(&ex(q)));
        let (lo, hi) = (m.lo().max(0.0), m.hi());
        prop_assert!(ex(lo).mul(&ex(lo)).sub(&n2).signum().is_le());
        prop_assert!(ex(hi).mul(&ex(hi)).sub(&n2).signum().is_ge());
    }
}

#[test]
fn unary_and_binary_suites_smoke() {
    // The full 10⁵-case runs live in the acceptance suite.
    for op in common::unary_ops() {
        let st = common::check_unary(&op, 2_000, 7);
        assert_eq!(st.violations(), 0, "{}: {st:?}", op.name);
    }
    for op in common::binary_ops() {
        let st = common::check_binary(&op, 2_000, 7);
        assert_eq!(st.violations(), 0, "{}: {st:?}", op.name);
    }
}

#[test]
fn oracle_detects_wrong_enclosures() {
    // The exact oracle must reject an enclosure that misses by one ulp.
    let third = Interval::point(1.0).checked_div(Interval::point(3.0)).unwrap();
    assert!(ex(1.0).sub(&ex(third.lo()).mul(&ex(3.0))).signum().is_gt());
    let too_tight = Interval::point(0.1 + 0.2);
    assert!(!ex(0.1).add(&ex(0.2)).inside(too_tight));
    assert!(ex(0.1).add(&ex(0.2)).inside(Interval::point(0.1) + Interval::point(0.2)));
}
