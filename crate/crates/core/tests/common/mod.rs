//! Shared oracles for the integration tests: exact arithmetic on
//! floating-point expansions, random intervals, and property runners.
#![allow(dead_code)]

use std::cmp::Ordering;

use dlmap::interval::{Box2, Interval};
use dlmap::map::{second_iterate, ParameterSlice, Regime};
use rand::Rng;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A real number held exactly as an unevaluated sum of doubles with
/// nonoverlapping components in increasing magnitude.
#[derive(Clone, Debug)]
pub struct Exact(Vec<f64>);

impl Exact {
    pub fn new(x: f64) -> Self {
        assert!(x.is_finite());
        Exact(if x == 0.0 { Vec::new() } else { vec![x] })
    }

    fn grow(&mut self, b: f64) {
        let mut q = b;
        let mut out = Vec::with_capacity(self.0.len() + 1);
        for &e in &self.0 {
            let (s, h) = two_sum(q, e);
            if h != 0.0 {
                out.push(h);
            }
            q = s;
        }
        if q != 0.0 {
            out.push(q);
        }
        self.0 = out;
    }

    pub fn add(&self, o: &Exact) -> Exact {
        let mut r = self.clone();
        for &c in &o.0 {
            r.grow(c);
        }
        r
    }

    pub fn neg(&self) -> Exact {
        Exact(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Exact) -> Exact {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Exact) -> Exact {
        let mut r = Exact(Vec::new());
        for &a in &self.0 {
            for &b in &o.0 {
                let (p, e) = two_prod(a, b);
                r.grow(e);
                r.grow(p);
            }
        }
        r
    }

    pub fn signum(&self) -> Ordering {
        match self.0.last() {
            None => Ordering::Equal,
            Some(&x) if x > 0.0 => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn cmp_f64(&self, b: f64) -> Ordering {
        self.sub(&Exact::new(b)).signum()
    }

    /// The exact value lies in `iv`.
    pub fn inside(&self, iv: Interval) -> bool {
        self.cmp_f64(iv.lo()) != Ordering::Less && self.cmp_f64(iv.hi()) != Ordering::Greater
    }
}

pub fn ex(x: f64) -> Exact {
    Exact::new(x)
}

/// Exact `F_a²(x, y)`.
pub fn exact_second_iterate(x: f64, y: f64, a: f64) -> (Exact, Exact) {
    let one = ex(1.0);
    let y1 = ex(a).mul(&ex(y)).mul(&one.sub(&ex(x)));
    let y2 = ex(a).mul(&y1).mul(&one.sub(&ex(y)));
    (y1, y2)
}

/// Interval endpoints spread over many binades, sometimes degenerate or
/// straddling zero.
pub fn random_interval(rng: &mut impl Rng) -> Interval {
    let scale = (rng.random_range(-30..30) as f64).exp2();
    let a = rng.random_range(-1.0..1.0) * scale;
    match rng.random_range(0..6) {
        0 => Interval::point(a),
        1 => {
            let w = rng.random_range(0.0..1.0) * scale * (rng.random_range(-40..0) as f64).exp2();
            Interval::new(a, a + w)
        }
        _ => {
            let b = rng.random_range(-1.0..1.0) * scale;
            Interval::new(a.min(b), a.max(b))
        }
    }
}

pub fn random_positive_interval(rng: &mut impl Rng) -> Interval {
    let i = random_interval(rng);
    Interval::new(i.lo().abs().min(i.hi().abs()), i.lo().abs().max(i.hi().abs()))
}

pub fn random_unit_interval(rng: &mut impl Rng) -> Interval {
    let a = rng.random_range(0.0..=1.0);
    let b = if rng.random_bool(0.2) { a } else { rng.random_range(0.0..=1.0) };
    Interval::new(f64::min(a, b), f64::max(a, b))
}

/// A member of `iv`; endpoints are drawn often since they are where
/// rounding errors show.
pub fn random_member(rng: &mut impl Rng, iv: Interval) -> f64 {
    match rng.random_range(0..4) {
        0 => iv.lo(),
        1 => iv.hi(),
        _ => {
            let t: f64 = rng.random_range(0.0..=1.0);
            (iv.lo() + t * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi())
        }
    }
}

/// A random subinterval of `iv`.
pub fn random_subinterval(rng: &mut impl Rng, iv: Interval) -> Interval {
    let a = random_member(rng, iv);
    let b = random_member(rng, iv);
    Interval::new(a.min(b), a.max(b))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropStats {
    pub cases: usize,
    pub containment: usize,
    pub isotonicity: usize,
}

impl PropStats {
    pub fn violations(&self) -> usize {
        self.containment + self.isotonicity
    }
}

type Unary = fn(Interval) -> Option<Interval>;
type Binary = fn(Interval, Interval) -> Option<Interval>;

/// Names and implementations of the unary operations under test, with the
/// generator for their domain and the exact membership test.
pub struct UnaryOp {
    pub name: &'static str,
    pub f: Unary,
    pub gen: fn(&mut rand_chacha::ChaCha8Rng) -> Interval,
    /// True when `op(x)` (exact) lies in `iv`.
    pub member: fn(f64, Interval) -> bool,
}

pub struct BinaryOp {
    pub name: &'static str,
    pub f: Binary,
    pub gen: fn(&mut rand_chacha::ChaCha8Rng) -> (Interval, Interval),
    pub member: fn(f64, f64, Interval) -> bool,
}

fn nonzero_interval(rng: &mut rand_chacha::ChaCha8Rng) -> Interval {
    loop {
        let i = random_interval(rng);
        if !i.contains(0.0) {
            return i;
        }
    }
}

/// `lo ≤ √x ≤ hi` checked as `lo² ≤ x ≤ hi²` with `lo` clamped at 0.
fn sqrt_member(x: f64, iv: Interval) -> bool {
    let lo = iv.lo().max(0.0);
    ex(lo).mul(&ex(lo)).cmp_f64(x) != Ordering::Greater
        && iv.hi() >= 0.0
        && ex(iv.hi()).mul(&ex(iv.hi())).cmp_f64(x) != Ordering::Less
}

/// `lo ≤ a/b ≤ hi` checked by multiplying through by `b`.
fn div_member(a: f64, b: f64, iv: Interval) -> bool {
    let (lo, hi) = (ex(iv.lo()).mul(&ex(b)), ex(iv.hi()).mul(&ex(b)));
    let (lo, hi) = if b > 0.0 { (lo, hi) } else { (hi, lo) };
    lo.cmp_f64(a) != Ordering::Greater && hi.cmp_f64(a) != Ordering::Less
}

pub fn unary_ops() -> Vec<UnaryOp> {
    vec![
        UnaryOp {
            name: "neg",
            f: |x| Some(-x),
            gen: |r| random_interval(r),
            member: |x, iv| ex(x).neg().inside(iv),
        },
        UnaryOp {
            name: "abs",
            f: |x| Some(x.abs()),
            gen: |r| random_interval(r),
            member: |x, iv| ex(x.abs()).inside(iv),
        },
        UnaryOp {
            name: "square",
            f: |x| Some(x.square()),
            gen: |r| random_interval(r),
            member: |x, iv| ex(x).mul(&ex(x)).inside(iv),
        },
        UnaryOp {
            name: "powi3",
            f: |x| Some(x.powi(3)),
            gen: |r| random_interval(r),
            member: |x, iv| ex(x).mul(&ex(x)).mul(&ex(x)).inside(iv),
        },
        UnaryOp {
            name: "recip",
            f: |x| x.recip().ok(),
            gen: nonzero_interval,
            member: |x, iv| div_member(1.0, x, iv),
        },
        UnaryOp {
            name: "sqrt",
            f: |x| x.sqrt().ok(),
            gen: |r| random_positive_interval(r),
            member: sqrt_member,
        },
        UnaryOp {
            name: "x_one_minus_x",
            f: |x| x.x_one_minus_x().ok(),
            gen: |r| random_unit_interval(r),
            member: |x, iv| ex(x).mul(&ex(1.0).sub(&ex(x))).inside(iv),
        },
    ]
}

pub fn binary_ops() -> Vec<BinaryOp> {
    vec![
        BinaryOp {
            name: "add",
            f: |x, y| Some(x + y),
            gen: |r| (random_interval(r), random_interval(r)),
            member: |a, b, iv| ex(a).add(&ex(b)).inside(iv),
        },
        BinaryOp {
            name: "sub",
            f: |x, y| Some(x - y),
            gen: |r| (random_interval(r), random_interval(r)),
            member: |a, b, iv| ex(a).sub(&ex(b)).inside(iv),
        },
        BinaryOp {
            name: "mul",
            f: |x, y| Some(x * y),
            gen: |r| (random_interval(r), random_interval(r)),
            member: |a, b, iv| ex(a).mul(&ex(b)).inside(iv),
        },
        BinaryOp {
            name: "div",
            f: |x, y| x.checked_div(y).ok(),
            gen: |r| (random_interval(r), nonzero_interval(r)),
            member: div_member,
        },
        BinaryOp {
            name: "hull",
            f: |x, y| Some(x.hull(y)),
            gen: |r| (random_interval(r), random_interval(r)),
            // Not an arithmetic image; both arguments' members must be inside.
            member: |a, _, iv| iv.contains(a),
        },
    ]
}

/// `cases` random checks of containment (exact image of a member lies in the
/// enclosure) and isotonicity (subinterval enclosures nest).
pub fn check_unary(op: &UnaryOp, cases: usize, seed: u64) -> PropStats {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut st = PropStats::default();
    while st.cases < cases {
        let x = (op.gen)(&mut rng);
        let Some(fx) = (op.f)(x) else { continue };
        st.cases += 1;
        let p = random_member(&mut rng, x);
        if !(op.member)(p, fx) {
            st.containment += 1;
        }
        let y = random_subinterval(&mut rng, x);
        if let Some(fy) = (op.f)(y) {
            if !fy.subset_of(fx) {
                st.isotonicity += 1;
            }
        } else {
            st.isotonicity += 1;
        }
    }
    st
}

pub fn check_binary(op: &BinaryOp, cases: usize, seed: u64) -> PropStats {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut st = PropStats::default();
    while st.cases < cases {
        let (x, y) = (op.gen)(&mut rng);
        let Some(fxy) = (op.f)(x, y) else { continue };
        st.cases += 1;
        let (p, q) = (random_member(&mut rng, x), random_member(&mut rng, y));
        if !(op.member)(p, q, fxy) {
            st.containment += 1;
        }
        let (xs, ys) = (random_subinterval(&mut rng, x), random_subinterval(&mut rng, y));
        match (op.f)(xs, ys) {
            Some(f) if f.subset_of(fxy) => {}
            _ => st.isotonicity += 1,
        }
    }
    st
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ImageStats {
    pub squares: usize,
    pub samples: usize,
    pub violations: usize,
}

/// Random grid squares inside the grid domain and random parameter slices
/// in `[1.5, 2]`; every exact `F_a²(p)` must lie in the rigorous enclosure.
pub fn check_second_iterate(squares: usize, per_square: usize, seed: u64) -> ImageStats {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut st = ImageStats::default();
    for _ in 0..squares {
        let k: u32 = rng.random_range(4..=14);
        let n = 1u32 << k;
        let (lo, hi) = (n / 16, n / 8 * 7 - 1);
        let r = (-(k as f64)).exp2();
        let (ix, iy) = (rng.random_range(lo..=hi), rng.random_range(lo..=hi));
        let b = Box2::new(
            Interval::new(ix as f64 * r, (ix + 1) as f64 * r),
            Interval::new(iy as f64 * r, (iy + 1) as f64 * r),
        );
        let w = (rng.random_range(-16..=-6) as f64).exp2();
        let a0 = rng.random_range(1.5..2.0 - w);
        let s = ParameterSlice::new(Interval::new(a0, a0 + w), Regime::Linearized).unwrap();
        let img = second_iterate(b, &s).unwrap();
        st.squares += 1;
        for _ in 0..per_square {
            let x = random_member(&mut rng, b.x);
            let y = random_member(&mut rng, b.y);
            let a = random_member(&mut rng, s.a);
            let (x2, y2) = exact_second_iterate(x, y, a);
            st.samples += 1;
            if !(x2.inside(img.x) && y2.inside(img.y)) {
                st.violations += 1;
            }
        }
    }
    st
}

/// Reachability by Floyd–Warshall closure; `u ~ v` iff each reaches the other.
pub fn brute_force_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v) in edges {
        reach[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|u| (0..n).map(|v| reach[u][v] && reach[v][u]).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SccStats {
    pub graphs: usize,
    pub mismatches: usize,
}

/// Random digraphs with at most 12 vertices; compares the partition, the
/// essential flags and the topological numbering with the oracle.
pub fn check_scc_oracle(graphs: usize, seed: u64) -> SccStats {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut st = SccStats::default();
    for _ in 0..graphs {
        let n = rng.random_range(1..=12);
        let p: f64 = rng.random_range(0.0..0.4);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v as u32);
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for a in adj {
            targets.extend(a);
            offsets.push(targets.len());
        }
        let scc = dlmap::graph::strongly_connected(&offsets, &targets);
        let same = brute_force_components(n, &edges);
        let mut ok = true;
        for u in 0..n {
            for v in 0..n {
                ok &= same[u][v] == (scc.component[u] == scc.component[v]);
            }
            let size = same[u].iter().filter(|&&b| b).count();
            let essential = size >= 2 || edges.contains(&(u, u));
            ok &= scc.is_essential_vertex(u) == essential;
        }
        for &(u, v) in &edges {
            ok &= scc.component[u] <= scc.component[v];
        }
        st.graphs += 1;
        if !ok {
            st.mismatches += 1;
        }
    }
    st
}
