//! Graph representation of the second iterate on dyadic squares, pruning, and
//! the refine-until-empty loop.
//!
//! Vertices of one level are kept sorted by `(iy, ix)`. Out-neighbors are
//! found by binary search in each row the image rectangle meets, and a square
//! is an out-neighbor when its closed geometry meets the closed image.

mod scc;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use scc::{strongly_connected, Scc};

use crate::interval::{Box2, Interval};
use crate::map::{first_iterate_unchecked, second_iterate_unchecked, ParameterSlice};
use crate::nbhd_lin::RectNeighborhood;
use crate::nbhd_nf::EllipseNeighborhood;
use crate::regions::trapping_region;

pub const GRID_LO: f64 = 1.0 / 16.0;
pub const GRID_HI: f64 = 7.0 / 8.0;
/// Finest supported level; keeps grid coordinates exact in `f64` and `u32`.
pub const MAX_LEVEL: u8 = 30;

pub fn grid_domain() -> Box2 {
    Box2::square(GRID_LO, GRID_HI)
}

/// The square `[ix·r, (ix+1)·r] × [iy·r, (iy+1)·r]` with `r = 2^-level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareId {
    pub level: u8,
    pub ix: u32,
    pub iy: u32,
}

impl SquareId {
    pub fn new(level: u8, ix: u32, iy: u32) -> Self {
        SquareId { level, ix, iy }
    }

    pub fn side(self) -> f64 {
        side(self.level)
    }

    pub fn geometry(self) -> Box2 {
        let r = self.side();
        Box2::new(
            Interval::new(self.ix as f64 * r, (self.ix + 1) as f64 * r),
            Interval::new(self.iy as f64 * r, (self.iy + 1) as f64 * r),
        )
    }

    pub fn children(self) -> [SquareId; 4] {
        let (l, x, y) = (self.level + 1, 2 * self.ix, 2 * self.iy);
        [
            SquareId::new(l, x, y),
            SquareId::new(l, x + 1, y),
            SquareId::new(l, x, y + 1),
            SquareId::new(l, x + 1, y + 1),
        ]
    }

    pub fn parent(self) -> Option<SquareId> {
        (self.level > 0).then(|| SquareId::new(self.level - 1, self.ix / 2, self.iy / 2))
    }

    /// The level-`level` square containing `(x, y)`, preferring the upper
    /// square on shared edges.
    pub fn containing(level: u8, x: f64, y: f64) -> SquareId {
        let n = (1u64 << level) as f64;
        let clamp = |t: f64| ((t * n).floor() as i64).clamp(0, (1i64 << level) - 1) as u32;
        SquareId::new(level, clamp(x), clamp(y))
    }

    fn key(self) -> u64 {
        (self.iy as u64) << 32 | self.ix as u64
    }
}

fn side(level: u8) -> f64 {
    (-(level as i32) as f64).exp2()
}

/// Index range `lo..=hi` of the level-`level` squares inside the grid domain.
fn domain_indices(level: u8) -> (u32, u32) {
    let n = 1u32 << level;
    (n / 16, n / 8 * 7 - 1)
}

/// Level-`k` squares with positive-area overlap with `[1/16, 7/8]²`. For
/// `k ≥ 4` the domain edges are grid lines, so these are exactly the squares
/// inside the domain and their union is the domain.
pub fn initial_cover(k: u8) -> Vec<SquareId> {
    assert!((4..=MAX_LEVEL).contains(&k), "initial_cover: level {k} outside 4..={MAX_LEVEL}");
    let (lo, hi) = domain_indices(k);
    (lo..=hi)
        .flat_map(|iy| (lo..=hi).map(move |ix| SquareId::new(k, ix, iy)))
        .collect()
}

/// Replaces every square by its four children, keeping the sorted order.
pub fn refine(vertices: &[SquareId]) -> Vec<SquareId> {
    let mut out: Vec<SquareId> = vertices.iter().flat_map(|s| s.children()).collect();
    out.sort_unstable_by_key(|s| s.key());
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IterateMode {
    /// `F²`, the map the argument is about.
    #[default]
    Second,
    /// `F`, for diagnostics only.
    First,
}

/// Image of a square, clipped to the grid domain.
pub fn clipped_image(sq: SquareId, a: Interval, mode: IterateMode) -> Option<Box2> {
    let b = sq.geometry();
    let img = match mode {
        IterateMode::Second => second_iterate_unchecked(b, a),
        IterateMode::First => first_iterate_unchecked(b, a),
    };
    img.intersect(grid_domain())
}

/// Grid index range of the level-`level` squares meeting `[lo, hi]`, clamped
/// to the domain.
fn index_range(level: u8, lo: f64, hi: f64) -> (u32, u32) {
    let n = (1u64 << level) as f64;
    let (dlo, dhi) = domain_indices(level);
    // Scaling by a power of two is exact.
    let first = ((lo * n).ceil() as i64 - 1).max(dlo as i64) as u32;
    let last = ((hi * n).floor() as i64).min(dhi as i64) as u32;
    (first, last)
}

/// Directed graph on one level of squares, in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionGraph {
    pub level: u8,
    /// Sorted by `(iy, ix)`.
    pub vertices: Vec<SquareId>,
    pub offsets: Vec<usize>,
    pub targets: Vec<u32>,
    pub scc: Option<Scc>,
}

impl TransitionGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn index_of(&self, s: SquareId) -> Option<usize> {
        self.vertices.binary_search_by_key(&s.key(), |v| v.key()).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&(v as u32)).is_ok()
    }
}

/// Builds the edges `u → v` for every `v` whose square meets the clipped
/// image of `u`. `vertices` must share one level.
pub fn build_edges(vertices: Vec<SquareId>, a: Interval, mode: IterateMode) -> TransitionGraph {
    let level = vertices.first().map_or(0, |v| v.level);
    let mut vertices = vertices;
    assert!(vertices.iter().all(|v| v.level == level), "build_edges: mixed levels");
    vertices.sort_unstable_by_key(|s| s.key());
    let keys: Vec<u64> = vertices.iter().map(|v| v.key()).collect();

    let adjacency: Vec<Vec<u32>> = vertices
        .par_iter()
        .map(|&u| {
            let Some(img) = clipped_image(u, a, mode) else {
                return Vec::new();
            };
            let (x0, x1) = index_range(level, img.x.lo(), img.x.hi());
            let (y0, y1) = index_range(level, img.y.lo(), img.y.hi());
            let mut out = Vec::new();
            for iy in y0..=y1 {
                let from = (iy as u64) << 32 | x0 as u64;
                let to = (iy as u64) << 32 | x1 as u64;
                let start = keys.partition_point(|&k| k < from);
                let end = keys.partition_point(|&k| k <= to);
                out.extend((start..end).map(|i| i as u32));
            }
            out
        })
        .collect();

    let mut offsets = Vec::with_capacity(vertices.len() + 1);
    offsets.push(0);
    let mut targets = Vec::with_capacity(adjacency.iter().map(Vec::len).sum());
    for adj in adjacency {
        targets.extend(adj);
        offsets.push(targets.len());
    }
    TransitionGraph {
        level,
        vertices,
        offsets,
        targets,
        scc: None,
    }
}

pub fn scc_decompose(mut g: TransitionGraph) -> TransitionGraph {
    g.scc = Some(strongly_connected(&g.offsets, &g.targets));
    g
}

/// Certified attracting set of one slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Neighborhood {
    Rect(RectNeighborhood),
    Ellipse(EllipseNeighborhood),
}

impl Neighborhood {
    /// True when the whole square lies in the neighborhood for every `a`.
    pub fn contains_box(&self, b: Box2) -> bool {
        match self {
            Neighborhood::Rect(r) => r.contains_box(b),
            Neighborhood::Ellipse(e) => e.contains_box(b),
        }
    }

    pub fn center(&self) -> Interval {
        match self {
            Neighborhood::Rect(r) => r.center,
            Neighborhood::Ellipse(e) => e.center,
        }
    }
}

/// Removes squares lying in the neighborhood (prune rule b).
pub fn remove_neighborhood(vertices: Vec<SquareId>, nbhd: &Neighborhood) -> (Vec<SquareId>, usize) {
    let before = vertices.len();
    let kept: Vec<SquareId> = vertices
        .into_par_iter()
        .filter(|s| !nbhd.contains_box(s.geometry()))
        .collect();
    let removed = before - kept.len();
    (kept, removed)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneStats {
    pub non_essential: usize,
    pub neighborhood: usize,
    pub trapping: usize,
}

/// Applies the prune rules to a decomposed graph and returns the survivors:
/// (a) vertices of non-essential components; (b) squares inside the
/// neighborhood; (c) when `trapping` is given, essential components none of
/// whose squares meets it.
pub fn prune(
    g: &TransitionGraph,
    nbhd: Option<&Neighborhood>,
    trapping: Option<Box2>,
) -> (Vec<SquareId>, PruneStats) {
    let scc = g.scc.as_ref().expect("prune: scc_decompose first");
    let mut stats = PruneStats::default();
    let mut drop_component = vec![false; scc.count()];
    for (c, &e) in scc.essential.iter().enumerate() {
        drop_component[c] = !e;
    }
    if let Some(t) = trapping {
        let mut touches = vec![false; scc.count()];
        for (v, s) in g.vertices.iter().enumerate() {
            if s.geometry().overlaps(t) {
                touches[scc.component[v] as usize] = true;
            }
        }
        for c in 0..scc.count() {
            if scc.essential[c] && !touches[c] {
                drop_component[c] = true;
            }
        }
    }
    let mut survivors = Vec::new();
    for (v, &s) in g.vertices.iter().enumerate() {
        let c = scc.component[v] as usize;
        if drop_component[c] {
            if scc.essential[c] {
                stats.trapping += 1;
            } else {
                stats.non_essential += 1;
            }
        } else if nbhd.is_some_and(|n| n.contains_box(s.geometry())) {
            stats.neighborhood += 1;
        } else {
            survivors.push(s);
        }
    }
    (survivors, stats)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k0: u8,
    pub max_refinements: u32,
    /// Remove neighborhood squares again after each refinement.
    pub reprune_neighborhood: bool,
    /// Apply prune rule (c) at the first level.
    pub prune_trapping: bool,
    pub mode: IterateMode,
    /// Record the surviving squares every this many levels (0 = never).
    pub snapshot_every: u32,
    /// Re-check the representation property on every this many vertices of
    /// each level (0 = never).
    #[serde(default)]
    pub audit_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k0: 8,
            max_refinements: 12,
            reprune_neighborhood: true,
            prune_trapping: true,
            mode: IterateMode::Second,
            snapshot_every: 0,
            audit_every: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proved,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub k: u8,
    /// Squares entering the level, after refinement.
    pub vertex_count: usize,
    pub edge_count: usize,
    pub essential_components: usize,
    pub pruned: PruneStats,
    pub survivors: usize,
    pub ms: u64,
    /// Vertices whose out-edges were re-checked, and the violations found.
    #[serde(default)]
    pub audited: usize,
    #[serde(default)]
    pub audit_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub level: u8,
    pub squares: Vec<SquareId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub levels: Vec<LevelStats>,
    pub verdict: Verdict,
    pub snapshots: Vec<Snapshot>,
    /// Surviving squares of the last level (empty when proved).
    pub remaining: Vec<SquareId>,
}

impl RunTrace {
    pub fn refinements(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn trapping_rule_fired(&self) -> bool {
        self.levels.iter().any(|l| l.pruned.trapping > 0)
    }
}

/// Runs the refine-until-empty loop for one slice.
///
/// The neighborhood squares are removed from the initial cover before the
/// first graph is built: an orbit that never enters the neighborhood is an
/// infinite path in the graph on the remaining squares, so it must end in
/// one of that graph's essential components.
pub fn run_slice(s: &ParameterSlice, cfg: &RunConfig, nbhd: Option<&Neighborhood>) -> RunTrace {
    assert!(cfg.k0 >= 4 && cfg.k0 as u32 + cfg.max_refinements <= MAX_LEVEL as u32, "run_slice: level range");
    let mut levels = Vec::new();
    let mut snapshots = Vec::new();
    let mut vertices = initial_cover(cfg.k0);
    let mut k = cfg.k0;
    loop {
        let start = Instant::now();
        let vertex_count = vertices.len();
        let first = k == cfg.k0;
        let mut pruned = PruneStats::default();
        if let Some(n) = nbhd.filter(|_| first || cfg.reprune_neighborhood) {
            let (kept, removed) = remove_neighborhood(vertices, n);
            vertices = kept;
            pruned.neighborhood = removed;
        }
        let g = scc_decompose(build_edges(vertices, s.a, cfg.mode));
        let (audited, audit_violations) = if cfg.audit_every > 0 {
            let sample: Vec<usize> = (0..g.vertex_count()).step_by(cfg.audit_every).collect();
            let bad = representation_violations(&g, s.a, cfg.mode, &sample);
            (sample.len(), bad.len())
        } else {
            (0, 0)
        };
        let trapping = (first && cfg.prune_trapping).then(trapping_region);
        let (survivors, stats) = prune(&g, None, trapping);
        pruned.non_essential = stats.non_essential;
        pruned.trapping = stats.trapping;
        let scc = g.scc.as_ref().expect("decomposed");
        levels.push(LevelStats {
            k,
            vertex_count,
            edge_count: g.edge_count(),
            essential_components: scc.essential.iter().filter(|&&e| e).count(),
            pruned,
            survivors: survivors.len(),
            ms: start.elapsed().as_millis() as u64,
            audited,
            audit_violations,
        });
        let index = (k - cfg.k0) as u32;
        if cfg.snapshot_every > 0 && index % cfg.snapshot_every == 0 {
            snapshots.push(Snapshot {
                level: k,
                squares: survivors.clone(),
            });
        }
        if survivors.is_empty() {
            return RunTrace {
                levels,
                verdict: Verdict::Proved,
                snapshots,
                remaining: survivors,
            };
        }
        if index >= cfg.max_refinements {
            return RunTrace {
                levels,
                verdict: Verdict::Inconclusive,
                snapshots,
                remaining: survivors,
            };
        }
        vertices = refine(&survivors);
        k += 1;
    }
}

/// Checks the representation property on the given vertices: every square of
/// the graph meeting the clipped image of `u` is an out-neighbor of `u`, and
/// every out-neighbor meets it. Candidates are enumerated from the squares
/// containing the image corners, widened by one, and filtered with the
/// closed overlap test, independently of the lookup in [`build_edges`].
/// Returns the offending `(u, v)` pairs.
pub fn representation_violations(
    g: &TransitionGraph,
    a: Interval,
    mode: IterateMode,
    sample: &[usize],
) -> Vec<(SquareId, SquareId)> {
    let mut bad = Vec::new();
    for &u in sample {
        let su = g.vertices[u];
        let Some(img) = clipped_image(su, a, mode) else {
            if !g.out_neighbors(u).is_empty() {
                bad.push((su, g.vertices[g.out_neighbors(u)[0] as usize]));
            }
            continue;
        };
        let lo = SquareId::containing(g.level, img.x.lo(), img.y.lo());
        let hi = SquareId::containing(g.level, img.x.hi(), img.y.hi());
        for iy in lo.iy.saturating_sub(1)..=hi.iy + 1 {
            for ix in lo.ix.saturating_sub(1)..=hi.ix + 1 {
                let sv = SquareId::new(g.level, ix, iy);
                if !sv.geometry().overlaps(img) {
                    continue;
                }
                if let Some(v) = g.index_of(sv) {
                    if !g.has_edge(u, v) {
                        bad.push((su, sv));
                    }
                }
            }
        }
        for &v in g.out_neighbors(u) {
            if !g.vertices[v as usize].geometry().overlaps(img) {
                bad.push((su, g.vertices[v as usize]));
            }
        }
    }
    bad
}

/// True when every square of `next` has its parent in `prev`.
pub fn parents_survived(prev: &[SquareId], next: &[SquareId]) -> bool {
    let mut p: Vec<u64> = prev.iter().map(|s| s.key()).collect();
    p.sort_unstable();
    next.iter()
        .all(|s| s.parent().is_some_and(|q| p.binary_search(&q.key()).is_ok()))
}
