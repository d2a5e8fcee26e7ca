//! Adaptive bisection of a parameter interval for inequality verification.
//!
//! A predicate is evaluated with interval arithmetic on a subinterval and
//! returns a [`Check`]. Undecided pieces are halved until every piece passes,
//! one piece certainly fails, or the depth cap is reached. Pieces of one depth
//! are evaluated in parallel and merged in order, so the outcome does not
//! depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_MAX_DEPTH: u32 = 20;

/// Outcome of one interval evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Check {
    /// Holds on the whole piece with the given nonnegative margin.
    Pass(f64),
    /// Fails on the whole piece; the value is the (positive) violation.
    Fail(f64),
    /// Interval overestimation prevents a decision.
    Unknown,
}

impl Check {
    /// `value ≥ floor` on the whole piece.
    pub fn lower_bound(value: Interval, floor: f64) -> Check {
        if value.lo() >= floor {
            Check::Pass(value.lo() - floor)
        } else if value.hi() < floor {
            Check::Fail(floor - value.hi())
        } else {
            Check::Unknown
        }
    }

    /// `value ≤ cap` on the whole piece.
    pub fn upper_bound(value: Interval, cap: f64) -> Check {
        if value.hi() <= cap {
            Check::Pass(cap - value.hi())
        } else if value.lo() > cap {
            Check::Fail(value.lo() - cap)
        } else {
            Check::Unknown
        }
    }

    /// `value < cap` strictly.
    pub fn strictly_below(value: Interval, cap: f64) -> Check {
        if value.hi() < cap {
            Check::Pass(cap - value.hi())
        } else if value.lo() >= cap {
            Check::Fail(value.lo() - cap)
        } else {
            Check::Unknown
        }
    }

    /// Conjunction: passes with the smaller margin, fails if either fails.
    pub fn and(self, other: Check) -> Check {
        match (self, other) {
            (Check::Fail(x), Check::Fail(y)) => Check::Fail(x.max(y)),
            (Check::Fail(x), _) | (_, Check::Fail(x)) => Check::Fail(x),
            (Check::Pass(x), Check::Pass(y)) => Check::Pass(x.min(y)),
            _ => Check::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub range: Interval,
    /// Number of pieces in the final cover of `range`.
    pub subintervals: usize,
    /// Deepest bisection level used.
    pub depth: u32,
    /// Smallest margin over all pieces.
    pub min_slack: f64,
    /// The piece attaining `min_slack`.
    pub tightest: Interval,
}

/// Verifies `pred` on all of `range`, bisecting at most `max_depth` times.
///
/// On failure the witness is the piece with the largest certain violation, or
/// an undecided piece when the depth cap is hit (reported as inconclusive).
pub fn bisect_verify<F>(name: &str, range: Interval, max_depth: u32, pred: F) -> Result<VerificationReport>
where
    F: Fn(Interval) -> Result<Check> + Sync,
{
    let mut frontier = vec![range];
    let mut passed = 0usize;
    let mut min_slack = f64::INFINITY;
    let mut tightest = range;
    let mut depth = 0u32;
    loop {
        let results: Vec<(Interval, Check)> = frontier
            .par_iter()
            .map(|&piece| pred(piece).map(|c| (piece, c)))
            .collect::<Result<_>>()?;

        let worst_fail = results
            .iter()
            .filter_map(|&(p, c)| match c {
                Check::Fail(v) => Some((p, v)),
                _ => None,
            })
            .fold(None, |acc: Option<(Interval, f64)>, (p, v)| match acc {
                Some((_, w)) if w >= v => acc,
                _ => Some((p, v)),
            });
        if let Some((piece, violation)) = worst_fail {
            return Err(Error::failed(
                name,
                Some(piece),
                format!("violated by {violation:e}"),
            ));
        }

        let mut next = Vec::new();
        for (piece, c) in results {
            match c {
                Check::Pass(slack) => {
                    passed += 1;
                    if slack < min_slack {
                        min_slack = slack;
                        tightest = piece;
                    }
                }
                Check::Unknown => {
                    if depth >= max_depth || piece.is_point() {
                        return Err(Error::VerificationFailed {
                            check: name.to_string(),
                            witness: Some(piece),
                            detail: format!("undecided after {depth} bisections"),
                            inconclusive: true,
                        });
                    }
                    let (l, r) = piece.bisect();
                    next.push(l);
                    next.push(r);
                }
                Check::Fail(_) => unreachable!(),
            }
        }
        if next.is_empty() {
            return Ok(VerificationReport {
                check: name.to_string(),
                range,
                subintervals: passed,
                depth,
                min_slack,
                tightest,
            });
        }
        frontier = next;
        depth += 1;
    }
}

/// Treats a domain or division failure of an interval evaluation as
/// undecided: on a wide piece an enclosure of a positive quantity may reach
/// below zero, and bisection is the cure.
pub fn undecided_on_domain_error(r: Result<Check>) -> Result<Check> {
    match r {
        Err(Error::Domain { .. } | Error::DivisionByZero(_)) => Ok(Check::Unknown),
        other => other,
    }
}

/// Evaluates `f` on a cover of `range` by `2^depth` equal pieces and returns
/// the hull, an enclosure of the range of `f` tighter than one evaluation.
pub fn hull_over<F>(range: Interval, depth: u32, f: F) -> Result<Interval>
where
    F: Fn(Interval) -> Result<Interval> + Sync,
{
    let pieces = split(range, depth);
    let vals: Vec<Interval> = pieces.par_iter().map(|&p| f(p)).collect::<Result<_>>()?;
    Ok(vals.into_iter().reduce(Interval::hull).expect("at least one piece"))
}

/// Uniform cover of `range` by `2^depth` closed pieces sharing endpoints.
pub fn split(range: Interval, depth: u32) -> Vec<Interval> {
    let mut pieces = vec![range];
    for _ in 0..depth {
        pieces = pieces
            .into_iter()
            .flat_map(|p| {
                let (l, r) = p.bisect();
                [l, r]
            })
            .collect();
    }
    pieces
}
