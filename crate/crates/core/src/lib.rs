//! Validated numerics for the global stability of the delayed logistic map
//! `x_{n+1} = a·x_n·(1 - x_{n-1})` on `a ∈ (1, 2]`.
//!
//! The crate combines:
//! - an outward-rounded interval kernel ([`interval`]),
//! - rigorous enclosures of the map and its second iterate ([`map`]),
//! - region bookkeeping and the small-parameter argument ([`regions`]),
//! - two attracting-neighborhood constructions ([`nbhd_lin`], [`nbhd_nf`]),
//! - the refine-until-empty graph engine ([`graph`]),
//! - parameter sweeps, certificates and SVG snapshots ([`sweep`]).

pub mod error;
pub mod graph;
pub mod interval;
pub mod map;
pub mod nbhd_nf;
pub mod nbhd_lin;
pub mod regions;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
