//! `dlmap`: verify neighborhoods, run single slices, sweep parameter ranges
//! and render snapshots.
//!
//! Exit codes: 0 when everything is proved, 1 when some slice is
//! inconclusive, 2 on configuration or verification errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dlmap::graph::{IterateMode, RunConfig, Verdict};
use dlmap::interval::Interval;
use dlmap::map::{ParameterSlice, Regime};
use dlmap::nbhd_lin::DEFAULT_FLOOR;
use dlmap::nbhd_nf::NfBudget;
use dlmap::sweep::{
    certify_slice, render_snapshot, run_sweep, slice_neighborhood, verify_neighborhood, Certificate, SweepConfig,
    SweepPlan,
};

#[derive(Parser)]
#[command(name = "dlmap", version, about = "Global stability certificates for the delayed logistic map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the attracting neighborhood over a parameter range.
    VerifyNeighborhood {
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Run the graph stage for one slice and write its certificate.
    RunSlice {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Directory for the certificate and snapshots.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the partition of [1.5, 2], or part of it.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Only slices meeting [a-lo, a-hi].
        #[arg(long)]
        a_lo: Option<f64>,
        #[arg(long)]
        a_hi: Option<f64>,
        /// Only this many evenly spread slices per range.
        #[arg(long)]
        sample: Option<usize>,
        /// Override the neighborhood size of every range that uses this regime.
        #[arg(long, requires = "regime")]
        eps: Option<f64>,
        #[arg(long)]
        regime: Option<Regime>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reuse certificates already in `--out`.
        #[arg(long, requires = "out")]
        resume: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Draw one level of a certificate written with `--embed-vertices`.
    Render {
        #[arg(long)]
        cert: PathBuf,
        /// Level to draw; defaults to the first recorded one.
        #[arg(long)]
        level: Option<u8>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    a_lo: f64,
    #[arg(long)]
    a_hi: f64,
    /// `linearized` or `normal-form`; inferred from the range when omitted.
    #[arg(long)]
    regime: Option<Regime>,
    /// Square half-width floor or ellipse size `eps_G`.
    #[arg(long)]
    eps: Option<f64>,
}

impl RangeArgs {
    fn resolve(&self) -> Result<(Interval, Regime, f64)> {
        if !(self.a_lo <= self.a_hi) {
            bail!("--a-lo must not exceed --a-hi");
        }
        let range = Interval::new(self.a_lo, self.a_hi);
        let regime = self.regime.unwrap_or(if self.a_lo >= 1.95 {
            Regime::NormalForm
        } else {
            Regime::Linearized
        });
        let eps = match (self.eps, regime) {
            (Some(e), _) => e,
            (None, Regime::Linearized) => DEFAULT_FLOOR,
            (None, Regime::NormalForm) => NfBudget::for_range(range)?.eps_g,
        };
        Ok((range, regime, eps))
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 8)]
    k0: u8,
    #[arg(long = "max-refine", default_value_t = 12)]
    max_refine: u32,
    /// Keep a snapshot of the surviving squares every K levels.
    #[arg(long, default_value_t = 0)]
    snapshot_every: u32,
    /// Store every level's surviving squares in the certificate.
    #[arg(long)]
    embed_vertices: bool,
    /// Build edges from the first iterate (diagnostics only).
    #[arg(long)]
    first_iterate: bool,
    /// Do not re-remove neighborhood squares after refinement.
    #[arg(long)]
    no_reprune: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        if self.k0 < 4 || self.k0 as u32 + self.max_refine > dlmap::graph::MAX_LEVEL as u32 {
            bail!("need 4 <= k0 and k0 + max-refine <= {}", dlmap::graph::MAX_LEVEL);
        }
        Ok(RunConfig {
            k0: self.k0,
            max_refinements: self.max_refine,
            reprune_neighborhood: !self.no_reprune,
            prune_trapping: true,
            mode: if self.first_iterate {
                IterateMode::First
            } else {
                IterateMode::Second
            },
            snapshot_every: self.snapshot_every,
            audit_every: 0,
        })
    }
}

/// An error that maps to exit code 2 after being reported.
fn config_error(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyNeighborhood { range } => cmd_verify(&range),
        Command::RunSlice { range, run, out } => cmd_run_slice(&range, &run, out.as_deref()),
        Command::Sweep {
            run,
            a_lo,
            a_hi,
            sample,
            eps,
            regime,
            out,
            resume,
            threads,
            json,
        } => cmd_sweep(&run, a_lo, a_hi, sample, eps.zip(regime), out, resume, threads, json),
        Command::Render { cert, level, out } => cmd_render(&cert, level, &out),
    };
    result.unwrap_or_else(config_error)
}

fn cmd_verify(args: &RangeArgs) -> Result<ExitCode> {
    let (range, regime, eps) = args.resolve()?;
    let v = verify_neighborhood(range, regime, eps);
    println!("range {range} ({regime}), eps {eps}");
    for c in &v.checks {
        match c.slack {
            Some(s) => println!("  {:<40} slack {s:.6e}", c.name),
            None => println!("  {:<40} passed", c.name),
        }
    }
    if v.certified {
        println!("certified in {} ms", v.ms);
        Ok(ExitCode::SUCCESS)
    } else {
        Err(anyhow!("not certified: {}", v.error.unwrap_or_default()))
    }
}

fn cmd_run_slice(range: &RangeArgs, run: &RunArgs, out: Option<&Path>) -> Result<ExitCode> {
    let (a, regime, eps) = range.resolve()?;
    let cfg = run.config()?;
    let slice = ParameterSlice::new(a, regime)?;
    let v = verify_neighborhood(a, regime, eps);
    if !v.certified {
        bail!("neighborhood not certified: {}", v.error.unwrap_or_default());
    }
    let embed = run.embed_vertices || (run.snapshot_every > 0 && out.is_some());
    let cert = certify_slice(&slice, &v, &cfg, embed);
    println!("slice {} ({regime}), eps {eps}, k0 {}", slice.a, cfg.k0);
    for l in &cert.levels {
        println!(
            "  k={:<2} vertices {:>9} edges {:>10} essential {:>5} pruned(a,b,c) {}/{}/{} survivors {:>9} {:>6} ms",
            l.k,
            l.vertex_count,
            l.edge_count,
            l.essential_components,
            l.pruned.non_essential,
            l.pruned.neighborhood,
            l.pruned.trapping,
            l.survivors,
            l.ms
        );
    }
    println!("verdict: {:?}", cert.verdict);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(Certificate::file_name(&slice, &cert.config_hash));
        let mut stored = cert.clone();
        if !run.embed_vertices {
            stored.vertex_sets.clear();
        }
        stored.write(&path)?;
        println!("certificate: {}", path.display());
        if run.snapshot_every > 0 {
            let nbhd = slice_neighborhood(&slice, eps)?;
            for (i, s) in cert.vertex_sets.iter().enumerate() {
                if i as u32 % run.snapshot_every != 0 {
                    continue;
                }
                let p = dir.join(format!("snapshot_{}_{}_k{}.svg", slice.a.lo(), slice.a.hi(), s.level));
                render_snapshot(&s.squares, Some(&nbhd), slice.a.midpoint(), &p)?;
                println!("snapshot: {}", p.display());
            }
        }
    }
    Ok(verdict_code(cert.verdict == Verdict::Proved))
}

fn verdict_code(proved: bool) -> ExitCode {
    if proved {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    run: &RunArgs,
    a_lo: Option<f64>,
    a_hi: Option<f64>,
    sample: Option<usize>,
    eps: Option<(f64, Regime)>,
    out: Option<PathBuf>,
    resume: bool,
    threads: usize,
    json: bool,
) -> Result<ExitCode> {
    let mut plan = SweepPlan::default();
    if let Some((e, regime)) = eps {
        for r in plan.ranges.iter_mut().filter(|r| r.regime == regime) {
            r.eps = e;
        }
    }
    let window = match (a_lo, a_hi) {
        (None, None) => None,
        (lo, hi) => Some(Interval::try_new(lo.unwrap_or(1.5), hi.unwrap_or(2.0))?),
    };
    let cfg = SweepConfig {
        run: run.config()?,
        out_dir: out,
        resume,
        threads,
        sample_per_range: sample,
        window,
        embed_vertices: run.embed_vertices,
    };
    let report = run_sweep(&plan, &cfg)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.summary());
    }
    if report.ranges.iter().any(|r| !r.certified) {
        return Ok(ExitCode::from(2));
    }
    Ok(verdict_code(report.all_proved()))
}

fn cmd_render(cert: &Path, level: Option<u8>, out: &Path) -> Result<ExitCode> {
    let c = Certificate::read(cert).with_context(|| format!("reading {}", cert.display()))?;
    let snap = match level {
        Some(k) => c.vertex_sets.iter().find(|s| s.level == k),
        None => c.vertex_sets.first(),
    }
    .ok_or_else(|| anyhow!("certificate has no vertex set for that level (write it with --embed-vertices)"))?;
    render_snapshot(&snap.squares, c.neighborhood.as_ref(), c.slice.a.midpoint(), out)?;
    println!("wrote {} ({} squares at level {})", out.display(), snap.squares.len(), snap.level);
    Ok(ExitCode::SUCCESS)
}
