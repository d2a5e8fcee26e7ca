//! Parameter-range partitioning, per-slice certificates, resumable sweeps and
//! SVG snapshots.

mod certificate;
mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certificate::{config_hash, Certificate, CheckSlack, SCHEMA_VERSION};
pub use svg::{render_snapshot, snapshot_svg};

use crate::error::{Error, Result};
use crate::graph::{run_slice, Neighborhood, RunConfig, Verdict};
use crate::interval::Interval;
use crate::map::{ParameterSlice, Regime, PARAMETER_RANGE};
use crate::nbhd_lin::{rect_neighborhood, verify_eps_floor};
use crate::nbhd_nf::{certify, ellipse_neighborhood, NfBudget};

/// One row of the partition: a parameter range cut into slices of `width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangePlan {
    pub range: Interval,
    pub width: f64,
    pub regime: Regime,
    /// Square half-width floor (linearized) or `ε_G` (normal form).
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub ranges: Vec<RangePlan>,
}

impl Default for SweepPlan {
    /// `[1.5, 1.95]` by `2⁻¹⁰`, `[1.95, 1.995]` by `2⁻¹³` and `[1.995, 2]` by `2⁻¹⁶`.
    fn default() -> Self {
        SweepPlan {
            ranges: vec![
                RangePlan {
                    range: Interval::new(1.5, 1.95),
                    width: (-10f64).exp2(),
                    regime: Regime::Linearized,
                    eps: crate::nbhd_lin::DEFAULT_FLOOR,
                },
                RangePlan {
                    range: Interval::new(1.95, 1.995),
                    width: (-13f64).exp2(),
                    regime: Regime::NormalForm,
                    eps: NfBudget::b0().eps_g,
                },
                RangePlan {
                    range: Interval::new(1.995, 2.0),
                    width: (-16f64).exp2(),
                    regime: Regime::NormalForm,
                    eps: NfBudget::b1().eps_g,
                },
            ],
        }
    }
}

impl SweepPlan {
    /// Checks every range and that consecutive ranges share endpoints.
    pub fn validate(&self) -> Result<()> {
        if self.ranges.is_empty() {
            return Err(Error::Config("empty sweep plan".into()));
        }
        for r in &self.ranges {
            partition_count(r)?;
            if !(r.eps > 0.0) {
                return Err(Error::Config(format!("eps must be positive, got {}", r.eps)));
            }
        }
        for w in self.ranges.windows(2) {
            if w[0].range.hi() != w[1].range.lo() {
                return Err(Error::Config(format!(
                    "ranges {} and {} leave a gap or overlap",
                    w[0].range, w[1].range
                )));
            }
        }
        Ok(())
    }

    /// True when the ranges tile the whole parameter range `[1.5, 2]`.
    pub fn covers_parameter_range(&self) -> bool {
        self.validate().is_ok()
            && self.ranges.first().map(|r| r.range.lo()) == Some(PARAMETER_RANGE.0)
            && self.ranges.last().map(|r| r.range.hi()) == Some(PARAMETER_RANGE.1)
    }

    pub fn slice_count(&self) -> Result<usize> {
        self.ranges.iter().map(partition_count).sum()
    }
}

fn partition_count(r: &RangePlan) -> Result<usize> {
    let (lo, hi) = (r.range.lo(), r.range.hi());
    if lo < PARAMETER_RANGE.0 || hi > PARAMETER_RANGE.1 {
        return Err(Error::Config(format!("range {} outside [1.5, 2]", r.range)));
    }
    if !(r.width > 0.0) || !r.width.is_finite() {
        return Err(Error::Config(format!("slice width must be positive, got {}", r.width)));
    }
    if lo == hi {
        return Ok(1);
    }
    let n = ((hi - lo) / r.width).ceil();
    if n > 1e8 {
        return Err(Error::Config(format!("{n} slices in {} is too many", r.range)));
    }
    // Correct the float estimate so that n is the least count reaching `hi`.
    let mut n = (n as usize).max(1);
    while n > 1 && lo + (n - 1) as f64 * r.width >= hi {
        n -= 1;
    }
    while lo + n as f64 * r.width < hi {
        n += 1;
    }
    Ok(n)
}

/// Slices `[e_i, e_{i+1}]` with `e_i = lo + i·w`, the last one cut at `hi`.
/// Neighbors share their endpoint, so the union is exactly the range.
pub fn partition(r: &RangePlan) -> Result<Vec<ParameterSlice>> {
    let n = partition_count(r)?;
    let (lo, hi) = (r.range.lo(), r.range.hi());
    (0..n)
        .map(|i| {
            let a = lo + i as f64 * r.width;
            let b = if i + 1 == n { hi } else { lo + (i + 1) as f64 * r.width };
            ParameterSlice::new(Interval::new(a, b), r.regime)
        })
        .collect()
}

/// `count` slice indices spread evenly over `0..n`, always including both ends.
pub fn sample_indices(n: usize, count: usize) -> Vec<usize> {
    if count == 0 || n == 0 {
        return Vec::new();
    }
    if count >= n {
        return (0..n).collect();
    }
    if count == 1 {
        return vec![0];
    }
    let mut v: Vec<usize> = (0..count).map(|j| j * (n - 1) / (count - 1)).collect();
    v.dedup();
    v
}

/// Outcome of the neighborhood verification shared by a range's slices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeVerification {
    pub range: Interval,
    pub regime: Regime,
    pub eps: f64,
    pub certified: bool,
    pub checks: Vec<CheckSlack>,
    pub error: Option<String>,
    pub ms: u64,
}

/// Certifies the attracting neighborhood over a whole range.
pub fn verify_neighborhood(range: Interval, regime: Regime, eps: f64) -> RangeVerification {
    let start = Instant::now();
    let outcome = match regime {
        Regime::Linearized => verify_eps_floor(range, eps).map(|r| vec![CheckSlack::new(&r.check, r.min_slack)]),
        Regime::NormalForm => NfBudget::for_range(range).and_then(|b| {
            let report = certify(&b.with_eps(eps))?;
            if report.min_slack() < 0.0 {
                return Err(Error::failed("normal-form chain", Some(range), "negative slack"));
            }
            Ok(report.checks.iter().map(|c| CheckSlack::new(&c.name, c.slack)).collect())
        }),
    };
    let ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(checks) => RangeVerification {
            range,
            regime,
            eps,
            certified: true,
            checks,
            error: None,
            ms,
        },
        Err(e) => RangeVerification {
            range,
            regime,
            eps,
            certified: false,
            checks: Vec::new(),
            error: Some(e.to_string()),
            ms,
        },
    }
}

/// The slice's neighborhood, assuming its range was verified at `eps`.
pub fn slice_neighborhood(s: &ParameterSlice, eps: f64) -> Result<Neighborhood> {
    Ok(match s.regime {
        Regime::Linearized => Neighborhood::Rect(rect_neighborhood(s, eps)?),
        Regime::NormalForm => Neighborhood::Ellipse(ellipse_neighborhood(s, eps)?),
    })
}

/// Runs the graph stage for one slice and wraps the trace in a certificate.
/// Nothing is computed when the range verification failed.
pub fn certify_slice(
    s: &ParameterSlice,
    verification: &RangeVerification,
    cfg: &RunConfig,
    embed_vertices: bool,
) -> Certificate {
    let mut cfg = cfg.clone();
    if embed_vertices {
        cfg.snapshot_every = 1;
    }
    let hash = config_hash(s.regime, verification.eps, &cfg);
    let mut cert = Certificate::new(*s, verification.eps, cfg.clone(), hash, verification.checks.clone());
    if !verification.certified {
        cert.note = Some(format!(
            "neighborhood not certified: {}",
            verification.error.as_deref().unwrap_or("unknown")
        ));
        return cert;
    }
    let nbhd = match slice_neighborhood(s, verification.eps) {
        Ok(n) => n,
        Err(e) => {
            cert.note = Some(format!("neighborhood unavailable: {e}"));
            return cert;
        }
    };
    let trace = run_slice(s, &cfg, Some(&nbhd));
    cert.neighborhood = Some(nbhd);
    cert.verdict = trace.verdict;
    cert.levels = trace.levels;
    cert.trapping_rule_fired = cert.levels.iter().any(|l| l.pruned.trapping > 0);
    if embed_vertices {
        cert.vertex_sets = trace.snapshots;
    }
    cert
}

#[derive(Clone, Debug, Default)]
pub struct SweepConfig {
    pub run: RunConfig,
    /// Directory for certificate files; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Reuse certificates already present in `out_dir`.
    pub resume: bool,
    /// Worker threads (0 = rayon default).
    pub threads: usize,
    /// Run only this many evenly spread slices per range.
    pub sample_per_range: Option<usize>,
    /// Run only slices meeting this parameter window.
    pub window: Option<Interval>,
    pub embed_vertices: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceOutcome {
    pub slice: ParameterSlice,
    pub verdict: Verdict,
    pub refinements: usize,
    pub final_level: Option<u8>,
    pub ms: u64,
    pub reused: bool,
    pub path: Option<PathBuf>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub ranges: Vec<RangeVerification>,
    /// Ordered by parameter.
    pub slices: Vec<SliceOutcome>,
    pub total_slices_in_plan: usize,
    pub ms: u64,
}

/// Analytic facts the machine part of the argument relies on.
pub const ASSUMPTIONS: &[&str] = &[
    "every orbit of S other than the fixed point enters the square [0.072, 0.8]^2",
    "for a <= 1.5 the fixed point attracts S (monotone-sequence argument)",
    "the square around (A, A) of half-width eps(a) is attracted (linearization)",
    "the normal-form ellipse |z| <= eps_G is attracted for a in [1.95, 2]",
];

impl SweepReport {
    pub fn all_proved(&self) -> bool {
        self.ranges.iter().all(|r| r.certified) && self.slices.iter().all(|s| s.verdict == Verdict::Proved)
    }

    pub fn inconclusive(&self) -> Vec<&SliceOutcome> {
        self.slices.iter().filter(|s| s.verdict != Verdict::Proved).collect()
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.ranges {
            out += &format!(
                "range {} ({}, eps {}): neighborhood {} in {} ms{}\n",
                r.range,
                r.regime,
                r.eps,
                if r.certified { "certified" } else { "NOT certified" },
                r.ms,
                r.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
            );
        }
        let proved = self.slices.iter().filter(|s| s.verdict == Verdict::Proved).count();
        let reused = self.slices.iter().filter(|s| s.reused).count();
        out += &format!(
            "slices: {proved}/{} proved ({reused} reused), {} in plan, {} ms\n",
            self.slices.len(),
            self.total_slices_in_plan,
            self.ms
        );
        for s in self.inconclusive() {
            out += &format!(
                "inconclusive: {}{}\n",
                s.slice.a,
                s.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
        if self.all_proved() && self.slices.len() == self.total_slices_in_plan {
            out += "every slice of the plan is proved; together with:\n";
            for a in ASSUMPTIONS {
                out += &format!("  - {a}\n");
            }
            out += "this shows the fixed point attracts S on the plan's parameter range\n";
        }
        out
    }
}

fn selected(plan: &SweepPlan, cfg: &SweepConfig) -> Result<Vec<(usize, ParameterSlice)>> {
    let mut out = Vec::new();
    for (ri, r) in plan.ranges.iter().enumerate() {
        let mut slices = partition(r)?;
        if let Some(w) = cfg.window {
            slices.retain(|s| s.a.overlaps(w));
        }
        if let Some(n) = cfg.sample_per_range {
            let idx = sample_indices(slices.len(), n);
            slices = idx.into_iter().map(|i| slices[i]).collect();
        }
        out.extend(slices.into_iter().map(|s| (ri, s)));
    }
    Ok(out)
}

/// Verifies each range's neighborhood once, then runs every selected slice
/// on a worker pool, persisting one certificate per slice.
pub fn run_sweep(plan: &SweepPlan, cfg: &SweepConfig) -> Result<SweepReport> {
    plan.validate()?;
    let start = Instant::now();
    let work = selected(plan, cfg)?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let ranges: Vec<RangeVerification> = pool.install(|| {
        plan.ranges
            .par_iter()
            .map(|r| {
                let needed = work.iter().any(|(ri, _)| plan.ranges[*ri] == *r);
                if needed {
                    verify_neighborhood(r.range, r.regime, r.eps)
                } else {
                    RangeVerification {
                        range: r.range,
                        regime: r.regime,
                        eps: r.eps,
                        certified: true,
                        checks: Vec::new(),
                        error: Some("skipped: no selected slices".into()),
                        ms: 0,
                    }
                }
            })
            .collect()
    });

    let slices: Vec<Result<SliceOutcome>> = pool.install(|| {
        work.par_iter()
            .map(|(ri, s)| run_one(s, &ranges[*ri], cfg))
            .collect()
    });
    Ok(SweepReport {
        ranges,
        slices: slices.into_iter().collect::<Result<_>>()?,
        total_slices_in_plan: plan.slice_count()?,
        ms: start.elapsed().as_millis() as u64,
    })
}

fn run_one(s: &ParameterSlice, v: &RangeVerification, cfg: &SweepConfig) -> Result<SliceOutcome> {
    let start = Instant::now();
    let mut run = cfg.run.clone();
    if cfg.embed_vertices {
        run.snapshot_every = 1;
    }
    let hash = config_hash(s.regime, v.eps, &run);
    let path = cfg.out_dir.as_ref().map(|d| d.join(Certificate::file_name(s, &hash)));
    if cfg.resume && v.certified {
        if let Some(p) = &path {
            if let Some(c) = load_matching(p, s, &hash) {
                return Ok(outcome(&c, start, true, path.clone()));
            }
        }
    }
    let cert = certify_slice(s, v, &cfg.run, cfg.embed_vertices);
    if let Some(p) = &path {
        cert.write(p)?;
    }
    Ok(outcome(&cert, start, false, path))
}

fn load_matching(path: &Path, s: &ParameterSlice, hash: &str) -> Option<Certificate> {
    let c = Certificate::read(path).ok()?;
    (c.config_hash == hash && c.slice == *s && c.is_consistent()).then_some(c)
}

fn outcome(c: &Certificate, start: Instant, reused: bool, path: Option<PathBuf>) -> SliceOutcome {
    SliceOutcome {
        slice: c.slice,
        verdict: c.verdict,
        refinements: c.levels.len().saturating_sub(1),
        final_level: c.levels.last().map(|l| l.k),
        ms: if reused {
            c.levels.iter().map(|l| l.ms).sum()
        } else {
            start.elapsed().as_millis() as u64
        },
        reused,
        path,
        note: c.note.clone(),
    }
}
