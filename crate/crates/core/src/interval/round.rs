//! Directed rounding without touching the FPU rounding mode.
//!
//! Every operation is evaluated once in round-to-nearest and the exact
//! rounding error is recovered with an error-free transformation (TwoSum for
//! addition, an FMA residual for products, quotients and square roots). The
//! sign of that error tells whether the nearest result lies above or below the
//! exact value, so a single `next_up`/`next_down` step yields the correctly
//! directed result. No global state is involved, which keeps the kernel safe
//! to call from any thread.

/// Below this magnitude an FMA residual may itself be rounded (gradual
/// underflow), so results are nudged unconditionally.
const TINY: f64 = 1.0e-290;

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    let aa = s - bb;
    (a - aa) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.abs() < TINY {
        if a == 0.0 || b == 0.0 {
            return p;
        }
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.abs() < TINY {
        if a == 0.0 || b == 0.0 {
            return p;
        }
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of the exact remainder `a - q*b` relative to `b`: positive when the
/// exact quotient exceeds `q`.
#[inline]
fn div_residual_sign(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.abs() < TINY {
        return if a == 0.0 { q } else { q.next_down() };
    }
    if div_residual_sign(a, b, q) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.abs() < TINY {
        return if a == 0.0 { q } else { q.next_up() };
    }
    if div_residual_sign(a, b, q) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    let r = x.sqrt();
    if r == 0.0 {
        return r;
    }
    if r.mul_add(r, -x) > 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    let r = x.sqrt();
    if x > 0.0 && x < TINY {
        return r.next_up();
    }
    if r.mul_add(r, -x) < 0.0 {
        r.next_up()
    } else {
        r
    }
}
