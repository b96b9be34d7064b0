//! Exact solvers for the l1-anisotropic total variation on images that are
//! piecewise constant on rectangles.
//!
//! * [`rof::solve_rof`] computes the exact minimiser of
//!   `1/2 ||u - u0||^2 + lambda * TV_1(u)` and [`rof::verify_certificate`]
//!   checks it independently.
//! * [`flow::flow_evolve`] runs the TV_1 gradient flow event by event, with
//!   exact merging times and breaking flags.
//! * [`oracle::graph_tv_solve`] is a floating-point solver of the same
//!   minimisation used for cross-checking.
//!
//! All quantities are exact rationals. Both a bounded rectangular domain
//! (Neumann boundary) and the whole plane (compactly supported nonnegative data)
//! are supported.

pub mod cutsolve;
pub mod energy;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod frame;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod rof;
mod stage;

pub use error::{Error, Result};
pub use frame::Mode;
pub use geometry::{CellSet, Grid, GridEdge, PcrFunction, Rect, Signature};
pub use rational::Rational;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
