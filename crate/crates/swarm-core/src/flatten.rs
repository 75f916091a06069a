//! Group-parameter transformation method: rotate, deflate one shaping
//! radius to zero (optionally inflating the other), then reassign phases so
//! the flattened agents end up loosely equidistant. The whole sequence is
//! expressed as keyframed shape parameters and is exactly invertible.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formation::PatternState;
use crate::geom::{angle_diff, linear_distance, normalize_angle, Point2};

/// Tuning knobs for a flatten plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroConfig {
    /// Shaping radii of the pattern the plan starts from.
    pub s_x: f64,
    pub s_y: f64,
    /// Rotation applied before deflation, for collision avoidance.
    pub angle_offset: f64,
    /// Number of equal deflation decrements.
    pub steps: usize,
    /// Agent body radius; drives the auto-inflation rule.
    pub agent_radius: f64,
    /// Force x-inflation on or off; `None` lets the spacing rule decide.
    pub inflate_x: Option<bool>,
    /// Final x shaping radius when inflating; `None` derives one from the
    /// agent radius.
    pub s_x_target: Option<f64>,
    /// Simulated seconds between keyframes.
    pub dt: f64,
}

impl MacroConfig {
    pub fn new(s_x: f64, s_y: f64) -> Self {
        MacroConfig {
            s_x,
            s_y,
            angle_offset: 15.0_f64.to_radians(),
            steps: 100,
            agent_radius: 0.08,
            inflate_x: None,
            s_x_target: None,
            dt: 0.01,
        }
    }

    /// Defaults for a regular pattern of formation radius `r`.
    pub fn for_radius(r: f64) -> Self {
        Self::new(r, r)
    }
}

/// One sampled set of shape parameters along a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroKeyframe {
    pub time_offset: f64,
    pub phase: f64,
    pub s_x: f64,
    pub s_y: f64,
}

/// A keyframed flatten (or restore) sequence.
///
/// Forward execution order: rotate by `angle_offset`, run `keyframes`,
/// then slide phases to `corrective_phases`. An inverted plan runs the same
/// stages backwards.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroPlan {
    pub angle_offset: f64,
    pub keyframes: Vec<MacroKeyframe>,
    /// Per-agent phase targets making x-projections uniform; present for
    /// n >= 5 only.
    pub corrective_phases: Option<Vec<f64>>,
    /// Phases right after the initial rotation; the state the corrective
    /// stage starts from (and the inverse restores to).
    pub restore_phases: Vec<f64>,
    /// Interpolation steps for the corrective stage.
    pub corrective_steps: usize,
    /// False for flatten, true for the restore direction.
    pub inverted: bool,
}

/// Rigidly rotates the pattern about its centroid; phases are incremented
/// to match. The result is congruent to the input.
pub fn rotate_pattern(p: &PatternState, angle: f64) -> PatternState {
    let c = p.centroid();
    let positions = p
        .positions()
        .iter()
        .map(|&q| c + (q - c).rotated(angle))
        .collect();
    let phases = p.phases().iter().map(|&a| a + angle).collect();
    PatternState::from_parts(positions, phases).expect("rotation keeps values finite")
}

/// Recomputes positions from the pattern's centroid and phases under the
/// keyframe's shape parameters.
pub fn apply_keyframe(p: &PatternState, kf: &MacroKeyframe) -> PatternState {
    let c = p.centroid();
    let phases: Vec<f64> = p.phases().iter().map(|&a| a + kf.phase).collect();
    let positions = phases
        .iter()
        .map(|&a| c + Point2::new(kf.s_x * libm::cos(a), kf.s_y * libm::sin(a)))
        .collect();
    PatternState::from_parts(positions, phases).expect("keyframe keeps values finite")
}

/// Plans the rotation -> deflation -> corrective-phase sequence taking the
/// pattern to a line along the x-axis.
pub fn plan_flatten(p: &PatternState, cfg: &MacroConfig) -> Result<MacroPlan> {
    let n = p.n();
    if n < 3 {
        return Err(Error::InvalidArgument("flatten needs >= 3 agents"));
    }
    if cfg.steps == 0 || !(cfg.dt > 0.0) || !(cfg.agent_radius > 0.0) {
        return Err(Error::InvalidArgument("steps, dt and agent_radius must be positive"));
    }

    let rotated: Vec<f64> = p
        .phases()
        .iter()
        .map(|&a| normalize_angle(a + cfg.angle_offset))
        .collect();

    // Inflate along x when the projected uniform spacing would crowd the
    // agents; always wide enough to keep them 3 radii apart.
    let projected_spacing = 2.0 * cfg.s_x / (n as f64 - 1.0);
    let inflate = cfg
        .inflate_x
        .unwrap_or(projected_spacing < 3.0 * cfg.agent_radius);
    let s_x_target = if inflate {
        cfg.s_x_target
            .unwrap_or_else(|| cfg.s_x.max(1.5 * n as f64 * cfg.agent_radius))
    } else {
        cfg.s_x
    };

    let steps = cfg.steps;
    let keyframes = (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            MacroKeyframe {
                time_offset: k as f64 * cfg.dt,
                phase: 0.0,
                s_x: cfg.s_x + (s_x_target - cfg.s_x) * t,
                s_y: cfg.s_y * (1.0 - t),
            }
        })
        .collect();

    // Equidistance is near enough for n = 3 and 4; beyond that, reassign
    // phases so cosines land on a uniform grid.
    let corrective_phases = if n >= 5 {
        Some(corrective_targets(&rotated))
    } else {
        None
    };

    Ok(MacroPlan {
        angle_offset: cfg.angle_offset,
        keyframes,
        corrective_phases,
        restore_phases: rotated,
        corrective_steps: steps,
        inverted: false,
    })
}

/// Sorted matching of current phases onto the grid cos θ = 1 - 2j/(n-1),
/// picking for each agent the representative angle (θ or 2π-θ) closest to
/// where it already is.
fn corrective_targets(phases: &[f64]) -> Vec<f64> {
    let n = phases.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Largest cosine first; ties broken by index for determinism.
    order.sort_by(|&i, &j| {
        libm::cos(phases[j])
            .partial_cmp(&libm::cos(phases[i]))
            .unwrap()
            .then(i.cmp(&j))
    });
    let mut targets = alloc::vec![0.0; n];
    for (rank, &i) in order.iter().enumerate() {
        let grid = 1.0 - 2.0 * rank as f64 / (n as f64 - 1.0);
        let theta = libm::acos(grid.clamp(-1.0, 1.0));
        let alt = normalize_angle(-theta);
        let cur = phases[i];
        targets[i] = if angle_diff(theta, cur).abs() <= angle_diff(alt, cur).abs() {
            theta
        } else {
            alt
        };
    }
    targets
}

/// The plan that runs the same stages backwards, inflating back to the
/// original pattern. An involution: inverting twice returns the original
/// plan keyframe-for-keyframe.
pub fn plan_inverse(plan: &MacroPlan) -> MacroPlan {
    let steps = plan.keyframes.len();
    let dt = if steps > 1 {
        plan.keyframes[1].time_offset - plan.keyframes[0].time_offset
    } else {
        0.0
    };
    let keyframes = plan
        .keyframes
        .iter()
        .rev()
        .enumerate()
        .map(|(k, kf)| MacroKeyframe {
            time_offset: k as f64 * dt,
            ..*kf
        })
        .collect();
    MacroPlan {
        angle_offset: plan.angle_offset,
        keyframes,
        corrective_phases: plan.corrective_phases.clone(),
        restore_phases: plan.restore_phases.clone(),
        corrective_steps: plan.corrective_steps,
        inverted: !plan.inverted,
    }
}

/// Runs a plan from `p`, returning the full state trajectory including the
/// starting state.
pub fn execute_plan(p: &PatternState, plan: &MacroPlan) -> Vec<PatternState> {
    let mut traj = Vec::with_capacity(plan.keyframes.len() + plan.corrective_steps + 3);
    traj.push(p.clone());
    let mut state = p.clone();
    if !plan.inverted {
        state = rotate_pattern(&state, plan.angle_offset);
        traj.push(state.clone());
        for kf in plan.keyframes.iter().skip(1) {
            state = apply_keyframe(&state, kf);
            traj.push(state.clone());
        }
        if let Some(targets) = &plan.corrective_phases {
            slide_phases(&mut state, targets, plan, &mut traj);
        }
    } else {
        if plan.corrective_phases.is_some() {
            let targets = plan.restore_phases.clone();
            slide_phases(&mut state, &targets, plan, &mut traj);
        }
        for kf in plan.keyframes.iter().skip(1) {
            state = apply_keyframe(&state, kf);
            traj.push(state.clone());
        }
        state = rotate_pattern(&state, -plan.angle_offset);
        traj.push(state);
    }
    traj
}

/// Interpolates phases toward `targets` under the plan's final shape
/// parameters, appending each intermediate state.
fn slide_phases(
    state: &mut PatternState,
    targets: &[f64],
    plan: &MacroPlan,
    traj: &mut Vec<PatternState>,
) {
    let last = plan
        .keyframes
        .last()
        .copied()
        .unwrap_or(MacroKeyframe { time_offset: 0.0, phase: 0.0, s_x: 0.0, s_y: 0.0 });
    let (s_x, s_y) = if plan.inverted {
        // Reverse direction starts from the flattened shape, which is the
        // *first* stored keyframe of an inverted plan.
        let first = plan.keyframes.first().copied().unwrap_or(last);
        (first.s_x, first.s_y)
    } else {
        (last.s_x, last.s_y)
    };
    let from: Vec<f64> = state.phases().to_vec();
    let diffs: Vec<f64> = targets
        .iter()
        .zip(&from)
        .map(|(&to, &f)| angle_diff(to, f))
        .collect();
    let steps = plan.corrective_steps.max(1);
    // Anchor every interpolated frame at the centroid where the slide
    // started; re-anchoring at the drifting mean would accumulate a
    // translation that the reverse slide cannot undo.
    let c = state.centroid();
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let phases: Vec<f64> = from.iter().zip(&diffs).map(|(&f, &d)| f + d * t).collect();
        let positions = phases
            .iter()
            .map(|&a| c + Point2::new(s_x * libm::cos(a), s_y * libm::sin(a)))
            .collect();
        *state = PatternState::from_parts(positions, phases).expect("finite");
        traj.push(state.clone());
    }
}

/// Number of unordered agent pairs whose separation falls below twice the
/// agent radius anywhere along the trajectory, counting each pair at most
/// once. Agents move linearly between consecutive states, so the minimum
/// over each interval is checked in closed form.
pub fn count_collisions(trajectory: &[PatternState], agent_radius: f64) -> usize {
    if trajectory.is_empty() {
        return 0;
    }
    let n = trajectory[0].n();
    let threshold = 2.0 * agent_radius;
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let collided = trajectory.windows(2).any(|w| {
                let d0 = w[0].positions()[i] - w[0].positions()[j];
                let d1 = w[1].positions()[i] - w[1].positions()[j];
                min_separation(d0, d1) < threshold
            }) || {
                let last = trajectory.last().unwrap();
                linear_distance(last.positions()[i], last.positions()[j]) < threshold
            };
            if collided {
                count += 1;
            }
        }
    }
    count
}

/// Minimum of |d0 + t (d1 - d0)| over t in [0, 1].
fn min_separation(d0: Point2, d1: Point2) -> f64 {
    let v = d1 - d0;
    let vv = v.norm_sq();
    if vv == 0.0 {
        return d0.norm();
    }
    let t = (-d0.dot(v) / vv).clamp(0.0, 1.0);
    (d0 + v.scaled(t)).norm()
}

/// Maximum perpendicular deviation of the points from their best-fit line
/// (principal axis through the mean).
pub fn collinearity_deviation(points: &[Point2]) -> f64 {
    let (dir, mean) = principal_axis(points);
    let normal = Point2::new(-dir.y, dir.x);
    points
        .iter()
        .map(|&p| (p - mean).dot(normal).abs())
        .fold(0.0, f64::max)
}

/// Coefficient of variation of adjacent spacings after projecting the
/// points on their best-fit line.
pub fn spacing_cv(points: &[Point2]) -> f64 {
    let (dir, mean) = principal_axis(points);
    let mut proj: Vec<f64> = points.iter().map(|&p| (p - mean).dot(dir)).collect();
    proj.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let gaps: Vec<f64> = proj.windows(2).map(|w| w[1] - w[0]).collect();
    let m = gaps.iter().sum::<f64>() / gaps.len() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let var = gaps.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / gaps.len() as f64;
    libm::sqrt(var) / m
}

fn principal_axis(points: &[Point2]) -> (Point2, Point2) {
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
    // Leading eigenvector of the 2x2 covariance matrix.
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
    let norm = dir.norm();
    (dir.scaled(1.0 / norm), mean)
}
