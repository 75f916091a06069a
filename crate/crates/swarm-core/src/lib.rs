//! Deterministic 2D swarm pattern formation and transformation engine.
//!
//! The crate models a swarm as agents placed on the vertices of a polygon
//! inscribed in an ellipse, parametrized by group-level ("macroscopic")
//! quantities: agent count, formation radius, elongation and phase. On top of
//! the formation model sit two pattern transformation methods:
//!
//! * [`flatten`] — drives the shaping radii of the ellipse through a keyframed
//!   rotation / deflation / corrective-phase sequence, collapsing a polygon
//!   to a line and back, using only group-level parameters.
//! * [`moebius`] — computes per-agent destinations through linear fractional
//!   (Moebius) maps between circles and lines, then plans straight-line
//!   waypoint paths to them.
//!
//! [`classify`] provides the four-way transformation taxonomy (elementary vs
//! geometric, with or without fixed agents) and [`sim`] a fixed-step particle
//! world with repulsive obstacles and a force-threshold trigger that runs the
//! transformations in closed loop.
//!
//! The crate is `no_std` (with `alloc`); all floating point math goes through
//! `libm` so results are identical across targets.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod flatten;
pub mod formation;
pub mod geom;
pub mod moebius;
pub mod sim;

pub use error::Error;
pub use geom::{Point2, PolarComplex};

use flatten::MacroPlan;
use moebius::WaypointPlan;

/// A time-ordered transformation plan: either keyframed shape-parameter
/// values or per-agent waypoint lists.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformPlan {
    Macro(MacroPlan),
    Moebius(WaypointPlan),
}
