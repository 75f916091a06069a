//! Per-agent transformation method built on linear fractional maps:
//! frame transfer, discrete circle<->line mappings, magnification, and
//! straight-line path discretization.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formation::PatternState;
use crate::geom::{linear_distance, normalize_angle, Point2};

const POLE_EPS: f64 = 1e-9;

fn to_complex(p: Point2) -> Complex64 {
    Complex64::new(p.x, p.y)
}

fn to_point(z: Complex64) -> Point2 {
    Point2::new(z.re, z.im)
}

/// A linear fractional map w = (az + b)/(cz + d) with ad - bc != 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if (a * d - b * c).norm() <= 1e-12 {
            return Err(Error::InvalidArgument("moebius map requires ad - bc != 0"));
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// The Cayley-style map w = i(1 - z)/(1 + z) taking the unit circle to
    /// the real axis.
    pub fn circle_to_line() -> MoebiusMap {
        MoebiusMap {
            a: Complex64::new(0.0, -1.0),
            b: Complex64::new(0.0, 1.0),
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn apply(&self, p: Point2) -> Result<Point2> {
        let z = to_complex(p);
        let den = self.c * z + self.d;
        if den.norm() <= 1e-12 {
            return Err(Error::Pole { agent: None });
        }
        Ok(to_point((self.a * z + self.b) / den))
    }
}

/// Which printed form of the circle-to-line map to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineMapVariant {
    /// The true complex evaluation of i(1 - z)/(1 + z):
    /// (2y, 1 - x² - y²) / ((1 + x)² + y²).
    Exact,
    /// The same map with denominator 1 + x² + y², kept for fidelity
    /// experiments. Non-injective on the circle: φ and π - φ collide.
    PaperLiteral,
}

/// Maps a point of the unit circle onto the real axis.
pub fn circle_to_line(p: Point2, variant: LineMapVariant) -> Result<Point2> {
    let (x, y) = (p.x, p.y);
    match variant {
        LineMapVariant::Exact => {
            let den = (1.0 + x) * (1.0 + x) + y * y;
            if den <= POLE_EPS * POLE_EPS {
                return Err(Error::Pole { agent: None });
            }
            Ok(Point2::new(2.0 * y / den, (1.0 - x * x - y * y) / den))
        }
        LineMapVariant::PaperLiteral => {
            let den = 1.0 + x * x + y * y;
            Ok(Point2::new(2.0 * y / den, (1.0 - x * x - y * y) / den))
        }
    }
}

/// Inversion in the unit circle: p -> p / |p|². An involution mapping
/// off-origin lines to circles through the origin.
pub fn line_to_circle(p: Point2) -> Result<Point2> {
    let n2 = p.norm_sq();
    if n2 <= 1e-24 {
        return Err(Error::Pole { agent: None });
    }
    Ok(p.scaled(1.0 / n2))
}

/// Data needed to undo a global-to-local frame transfer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRecord {
    /// Global coordinates of the local origin.
    pub origin: Point2,
    /// Local-to-global scale factor.
    pub magnification: f64,
}

/// Translates by minus the centroid and scales so the circumcircle becomes
/// the unit circle. The returned frame restores the original coordinates.
pub fn to_local(p: &PatternState) -> Result<(Vec<Point2>, FrameRecord)> {
    let c = p.centroid();
    let r = p
        .positions()
        .iter()
        .map(|&q| linear_distance(q, c))
        .fold(0.0, f64::max);
    if r <= 0.0 {
        return Err(Error::DegenerateInput("pattern has zero extent"));
    }
    let local = p.positions().iter().map(|&q| (q - c).scaled(1.0 / r)).collect();
    Ok((local, FrameRecord { origin: c, magnification: r }))
}

/// Scales each point by the frame's magnification and translates by its
/// origin.
pub fn to_global(points: &[Point2], frame: &FrameRecord) -> Vec<Point2> {
    points
        .iter()
        .map(|&q| frame.origin + q.scaled(frame.magnification))
        .collect()
}

/// Magnification bringing the images' max pairwise distance to
/// `target_span`.
pub fn auto_magnification(local_images: &[Point2], target_span: f64) -> Result<f64> {
    if !(target_span > 0.0) {
        return Err(Error::InvalidArgument("target span must be > 0"));
    }
    let mut span = 0.0_f64;
    for i in 0..local_images.len() {
        for j in i + 1..local_images.len() {
            span = span.max(linear_distance(local_images[i], local_images[j]));
        }
    }
    if span <= 1e-12 {
        return Err(Error::DegenerateInput("images are coincident"));
    }
    Ok(target_span / span)
}

/// Equally spaced waypoints on the segment from `start` to `dest`, both
/// endpoints included; spacing never exceeds `step_length`.
pub fn discretize_path(start: Point2, dest: Point2, step_length: f64) -> Vec<Point2> {
    let len = linear_distance(start, dest);
    if len == 0.0 {
        return alloc::vec![start];
    }
    let segments = libm::ceil(len / step_length) as usize;
    (0..=segments)
        .map(|k| {
            let t = k as f64 / segments as f64;
            start + (dest - start).scaled(t)
        })
        .collect()
}

/// Which discrete transformation to plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapDirection {
    CircleToLine,
    LineToCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusConfig {
    pub variant: LineMapVariant,
    /// Desired max pairwise distance of the destinations; `None` restores
    /// the pattern's original diameter.
    pub target_span: Option<f64>,
    /// Waypoint spacing; one waypoint per tick at the default agent speed.
    pub step_length: f64,
    /// Start delay for odd-indexed agents, in ticks.
    pub stagger_ticks: usize,
    /// For line-to-circle: perpendicular offset of the fitted line from the
    /// local origin, yielding an image circle of radius 1/(2·offset).
    pub line_offset: f64,
}

impl Default for MoebiusConfig {
    fn default() -> Self {
        MoebiusConfig {
            variant: LineMapVariant::Exact,
            target_span: None,
            step_length: 0.01,
            stagger_ticks: 25,
            line_offset: 0.5,
        }
    }
}

/// Per-agent straight-line waypoint lists toward the mapped destinations.
#[derive(Debug, Clone, PartialEq)]
pub struct WaypointPlan {
    pub per_agent: Vec<(usize, Vec<Point2>)>,
    pub step_length: f64,
    /// Tick delay before each agent starts moving.
    pub stagger: Vec<usize>,
}

impl WaypointPlan {
    pub fn destinations(&self) -> Vec<Point2> {
        self.per_agent
            .iter()
            .map(|(_, w)| *w.last().expect("waypoint lists are non-empty"))
            .collect()
    }

    /// Ticks until the last agent reaches its destination.
    pub fn duration_ticks(&self) -> usize {
        self.per_agent
            .iter()
            .zip(&self.stagger)
            .map(|((_, w), &s)| s + w.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Position of each agent at tick `t` (waypoint index clamped at the
    /// destination, offset by the agent's stagger delay).
    pub fn positions_at(&self, t: usize) -> Vec<Point2> {
        self.per_agent
            .iter()
            .zip(&self.stagger)
            .map(|((_, w), &s)| {
                let idx = t.saturating_sub(s).min(w.len() - 1);
                w[idx]
            })
            .collect()
    }
}

/// Plans the full sequence: frame transfer, discrete map, magnification,
/// frame restore, and path discretization with staggered starts.
pub fn plan_moebius_transform(
    p: &PatternState,
    direction: MapDirection,
    cfg: &MoebiusConfig,
) -> Result<WaypointPlan> {
    if !(cfg.step_length > 0.0) {
        return Err(Error::InvalidArgument("step length must be > 0"));
    }
    let (dests, _frame) = match direction {
        MapDirection::CircleToLine => circle_to_line_destinations(p, cfg)?,
        MapDirection::LineToCircle => line_to_circle_destinations(p, cfg)?,
    };
    let per_agent: Vec<(usize, Vec<Point2>)> = p
        .agents()
        .zip(&dests)
        .map(|((id, start), &dest)| (id, discretize_path(start, dest, cfg.step_length)))
        .collect();
    let stagger = (0..p.n())
        .map(|i| if i % 2 == 1 { cfg.stagger_ticks } else { 0 })
        .collect();
    Ok(WaypointPlan { per_agent, step_length: cfg.step_length, stagger })
}

fn circle_to_line_destinations(
    p: &PatternState,
    cfg: &MoebiusConfig,
) -> Result<(Vec<Point2>, FrameRecord)> {
    let (local, frame) = to_local(p)?;
    let rotation = anti_pole_rotation(&local)?;
    let images: Vec<Point2> = local
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            circle_to_line(q.rotated(rotation), cfg.variant).map_err(|e| match e {
                Error::Pole { .. } => Error::Pole { agent: Some(i) },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let target = cfg.target_span.unwrap_or(2.0 * frame.magnification);
    let magnification = auto_magnification(&images, target)?;
    let out_frame = FrameRecord { origin: frame.origin, magnification };
    Ok((to_global(&images, &out_frame), out_frame))
}

/// Smallest rotation aligning the pole at angle π with the midpoint of some
/// inter-agent gap, so every agent stays at least half the minimum angular
/// gap away from it. Returns 0 when the agents are already clear.
fn anti_pole_rotation(local: &[Point2]) -> Result<f64> {
    let mut angles: Vec<f64> = local.iter().map(|q| q.angle()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = angles.len();
    let gaps: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let next = angles[(i + 1) % n] + if i + 1 == n { 2.0 * PI } else { 0.0 };
            (angles[i] + (next - angles[i]) / 2.0, next - angles[i])
        })
        .collect();
    let half_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min) / 2.0;
    if half_gap <= 1e-9 {
        return Err(Error::Pole { agent: None });
    }
    if angles.iter().all(|&a| dist_to_pi(a) >= half_gap - 1e-12) {
        return Ok(0.0);
    }
    // Centre the gap whose midpoint needs the least rotation.
    let delta = gaps
        .iter()
        .map(|&(mid, _)| crate::geom::angle_diff(PI, mid))
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .expect("patterns are non-empty");
    Ok(delta)
}

fn dist_to_pi(angle: f64) -> f64 {
    let a = normalize_angle(angle);
    (a - PI).abs()
}

fn line_to_circle_destinations(
    p: &PatternState,
    cfg: &MoebiusConfig,
) -> Result<(Vec<Point2>, FrameRecord)> {
    if !(cfg.line_offset > 0.0) {
        return Err(Error::InvalidArgument("line offset must be > 0"));
    }
    let (local, frame) = to_local(p)?;
    // Shift the local origin perpendicular to the fitted line so the line
    // sits at distance `line_offset`; its inversion image is then a genuine
    // circle of radius 1/(2·offset) through the origin.
    let normal = fitted_line_normal(&local);
    let shifted: Vec<Point2> = local
        .iter()
        .map(|&q| q + normal.scaled(cfg.line_offset))
        .collect();
    let images: Vec<Point2> = shifted
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            line_to_circle(q).map_err(|e| match e {
                Error::Pole { .. } => Error::Pole { agent: Some(i) },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let target = cfg.target_span.unwrap_or(2.0 * frame.magnification);
    let magnification = auto_magnification(&images, target)?;
    let origin = frame.origin - normal.scaled(cfg.line_offset * frame.magnification);
    let out_frame = FrameRecord { origin, magnification: magnification * frame.magnification };
    let dests = images
        .iter()
        .map(|&q| frame.origin + q.scaled(magnification * frame.magnification))
        .collect();
    Ok((dests, out_frame))
}

/// Unit normal of the best-fit line through the local points.
fn fitted_line_normal(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let mut mean = Point2::ZERO;
    for &p in points {
        mean = mean + p;
    }
    mean = mean.scaled(1.0 / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &p in points {
        let d = p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let lambda = tr / 2.0 + libm::sqrt((tr * tr / 4.0 - det).max(0.0));
    let dir = if sxy.abs() > 1e-300 {
        Point2::new(lambda - syy, sxy)
    } else if sxx >= syy {
        Point2::new(1.0, 0.0)
    } else {
        Point2::new(0.0, 1.0)
    };
    let dir = dir.scaled(1.0 / dir.norm());
    Point2::new(-dir.y, dir.x)
}
