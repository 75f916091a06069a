//! Pattern formation model: complex-plane root placement, group-level
//! shape parameters, shaping radii and inter-agent distances.
//!
//! Agents sit on the vertices of a polygon inscribed in the ellipse
//!
//! ```text
//! x = h + s_x cos θ,   y = k + s_y sin θ
//! ```
//!
//! where (h, k) is the centroid, s_x = r·e and s_y = r/e are the shaping
//! radii, r the formation radius and e the elongation ratio. With e = 1 the
//! vertices coincide with the n-th roots of a complex number of modulus rⁿ.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geom::{normalize_angle, Point2, PolarComplex};

pub use crate::geom::linear_distance;

/// Independent inputs of the formation model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimaryPrimitives {
    /// Total number of agents (polygon vertices).
    pub n: usize,
    /// Formation radius: radius of the circumscribing circle.
    pub r: f64,
    /// Elongation ratio: major/minor axis ratio, dimensionless.
    pub e: f64,
    /// Global phase offset in radians; angular separation is 2π/n on top.
    pub phase: f64,
    /// Pattern centroid (h, k).
    pub centroid: Point2,
}

impl PrimaryPrimitives {
    pub fn new(n: usize, r: f64, e: f64, phase: f64, centroid: Point2) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("agent count must be >= 3"));
        }
        if !(r > 0.0) {
            return Err(Error::InvalidArgument("formation radius must be > 0"));
        }
        if !(e > 0.0) {
            return Err(Error::InvalidArgument("elongation must be > 0"));
        }
        if !phase.is_finite() || !centroid.is_finite() {
            return Err(Error::InvalidArgument("phase and centroid must be finite"));
        }
        Ok(PrimaryPrimitives { n, r, e, phase, centroid })
    }

    /// A regular n-gon of radius `r` centred at the origin.
    pub fn regular(n: usize, r: f64) -> Result<Self> {
        Self::new(n, r, 1.0, 0.0, Point2::ZERO)
    }

    pub fn shaping_radii(&self) -> ShapingRadii {
        shaping_radii(self.r, self.e).expect("validated at construction")
    }
}

/// Derived lateral/longitudinal semi-axes of the pattern ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapingRadii {
    pub s_x: f64,
    pub s_y: f64,
}

/// s_x = r·e, s_y = r/e. Their product is r² by construction.
pub fn shaping_radii(r: f64, e: f64) -> Result<ShapingRadii> {
    if !(r > 0.0) || !(e > 0.0) {
        return Err(Error::InvalidArgument("shaping radii need r > 0 and e > 0"));
    }
    Ok(ShapingRadii { s_x: r * e, s_y: r / e })
}

/// The instantaneous swarm pattern: one labeled position and phase per agent.
///
/// Agent ids are implicit indexes 0..n-1. The centroid is always the
/// arithmetic mean of the positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternState {
    positions: Vec<Point2>,
    phases: Vec<f64>,
    centroid: Point2,
}

impl PatternState {
    /// Builds a state from explicit positions and phases. Phases are
    /// normalized to [0, 2π); the centroid is computed as the mean.
    pub fn from_parts(positions: Vec<Point2>, phases: Vec<f64>) -> Result<Self> {
        if positions.is_empty() || positions.len() != phases.len() {
            return Err(Error::InvalidArgument(
                "positions and phases must be non-empty and equal length",
            ));
        }
        if positions.iter().any(|p| !p.is_finite()) || phases.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("positions and phases must be finite"));
        }
        let phases = phases.into_iter().map(normalize_angle).collect();
        let centroid = mean(&positions);
        Ok(PatternState { positions, phases, centroid })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn centroid(&self) -> Point2 {
        self.centroid
    }

    /// (agent_id, position) pairs in id order.
    pub fn agents(&self) -> impl Iterator<Item = (usize, Point2)> + '_ {
        self.positions.iter().copied().enumerate()
    }

    /// The same pattern translated by `offset`.
    pub fn translated(&self, offset: Point2) -> PatternState {
        PatternState {
            positions: self.positions.iter().map(|&p| p + offset).collect(),
            phases: self.phases.clone(),
            centroid: self.centroid + offset,
        }
    }
}

fn mean(points: &[Point2]) -> Point2 {
    let mut sum = Point2::ZERO;
    for &p in points {
        sum = sum + p;
    }
    sum.scaled(1.0 / points.len() as f64)
}

/// The n-th roots of a complex number by De Moivre's formula: n points of
/// modulus ⁿ√|z| at arguments (arg z + 2kπ)/n, k = 0..n-1, in k-order.
pub fn nth_roots(z: PolarComplex, n: usize) -> Result<Vec<Point2>> {
    if n < 1 {
        return Err(Error::InvalidArgument("root order must be >= 1"));
    }
    if z.modulus() == 0.0 {
        return Err(Error::DegenerateInput("all roots of zero coincide at the origin"));
    }
    let radius = libm::pow(z.modulus(), 1.0 / n as f64);
    (0..n)
        .map(|k| {
            let arg = (z.argument() + TAU * k as f64) / n as f64;
            Ok(PolarComplex::new(radius, arg)?.to_cartesian())
        })
        .collect()
}

/// Places agent i at (h + s_x cos θᵢ, k + s_y sin θᵢ) with θᵢ = phase + 2πi/n.
pub fn formation_positions(prims: &PrimaryPrimitives, radii: &ShapingRadii) -> PatternState {
    let n = prims.n;
    let phases: Vec<f64> = (0..n)
        .map(|i| normalize_angle(prims.phase + TAU * i as f64 / n as f64))
        .collect();
    let positions = phases
        .iter()
        .map(|&a| {
            prims.centroid
                + Point2::new(radii.s_x * libm::cos(a), radii.s_y * libm::sin(a))
        })
        .collect();
    PatternState::from_parts(positions, phases).expect("finite by construction")
}

/// True iff adjacent distances (in phase order, wrapping) and distances to
/// the centroid all agree within `tol` relative.
pub fn is_regular(p: &PatternState, tol: f64) -> bool {
    let n = p.n();
    if n < 3 {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p.phases[a].partial_cmp(&p.phases[b]).unwrap());

    let sides: Vec<f64> = (0..n)
        .map(|i| linear_distance(p.positions[order[i]], p.positions[order[(i + 1) % n]]))
        .collect();
    let radii: Vec<f64> = p
        .positions
        .iter()
        .map(|&q| linear_distance(q, p.centroid))
        .collect();
    all_close_relative(&sides, tol) && all_close_relative(&radii, tol)
}

fn all_close_relative(values: &[f64], tol: f64) -> bool {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max == 0.0 || max - min <= tol * max.abs()
}
