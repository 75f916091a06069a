//! Experiment sweeps: collision counts over pre-deflation rotation angles,
//! and transformation time plus displacement metrics over pattern sizes.

use serde::{Deserialize, Serialize};
use swarm_core::flatten::{count_collisions, execute_plan, plan_flatten, MacroConfig};
use swarm_core::formation::{formation_positions, linear_distance, PatternState, PrimaryPrimitives};
use swarm_core::moebius::{plan_moebius_transform, MapDirection, MoebiusConfig};
use swarm_core::sim::PlannerKind;

use crate::Result;

/// One cell of the rotation-angle collision table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionCell {
    pub angle_deg: f64,
    pub n: usize,
    pub collisions: usize,
}

/// One row of a transformation-time sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub method: String,
    pub n: usize,
    /// Simulated seconds from plan start to plan completion.
    pub transform_time: f64,
    pub collisions: usize,
    pub max_displacement: f64,
    pub mean_displacement: f64,
}

/// The rotation angles of the published collision table, in degrees.
pub const TABLE_ANGLES_DEG: [f64; 4] = [15.0, 30.0, 45.0, 60.0];
/// The pattern sizes of the published collision table.
pub const TABLE_NS: [usize; 4] = [3, 4, 5, 6];

fn regular(n: usize, r: f64) -> Result<PatternState> {
    let prims = PrimaryPrimitives::regular(n, r)?;
    Ok(formation_positions(&prims, &prims.shaping_radii()))
}

/// Regular pattern phased so an inter-agent gap faces the line map's pole;
/// otherwise even sizes need an extra rotation that skews the size sweep.
fn pole_clear(n: usize, r: f64) -> Result<PatternState> {
    let phase = if n % 2 == 0 { std::f64::consts::PI / n as f64 } else { 0.0 };
    let prims = PrimaryPrimitives::new(n, r, 1.0, phase, swarm_core::Point2::ZERO)?;
    Ok(formation_positions(&prims, &prims.shaping_radii()))
}

/// For each (angle, n), plans a flatten with that pre-rotation and counts
/// pairwise collisions along the trajectory.
pub fn sweep_rotation_collisions(
    angles_deg: &[f64],
    ns: &[usize],
    r: f64,
    agent_radius: f64,
) -> Result<Vec<CollisionCell>> {
    let mut table = Vec::with_capacity(angles_deg.len() * ns.len());
    for &angle_deg in angles_deg {
        for &n in ns {
            let pattern = regular(n, r)?;
            let cfg = MacroConfig {
                angle_offset: angle_deg.to_radians(),
                agent_radius,
                ..MacroConfig::for_radius(r)
            };
            let plan = plan_flatten(&pattern, &cfg)?;
            let trajectory = execute_plan(&pattern, &plan);
            table.push(CollisionCell {
                angle_deg,
                n,
                collisions: count_collisions(&trajectory, agent_radius),
            });
        }
    }
    Ok(table)
}

fn displacement_metrics(before: &[swarm_core::Point2], after: &[swarm_core::Point2]) -> (f64, f64) {
    let dists: Vec<f64> = before
        .iter()
        .zip(after)
        .map(|(&a, &b)| linear_distance(a, b))
        .collect();
    let max = dists.iter().fold(0.0_f64, |m, &d| m.max(d));
    let mean = dists.iter().sum::<f64>() / dists.len() as f64;
    (max, mean)
}

/// Per n: simulated transformation duration, collision count, and start-to-
/// destination displacement metrics for the chosen method.
pub fn sweep_transform_time(
    method: PlannerKind,
    ns: &[usize],
    r: f64,
) -> Result<Vec<SweepSummary>> {
    if ns.is_empty() {
        return Err(crate::HarnessError::InvalidConfig("sweep needs at least one n".into()));
    }
    if !(r > 0.0) {
        return Err(crate::HarnessError::InvalidConfig("sweep needs r > 0".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let pattern = pole_clear(n, r)?;
        let row = match method {
            PlannerKind::Macro => {
                let cfg = MacroConfig::for_radius(r);
                let plan = plan_flatten(&pattern, &cfg)?;
                let trajectory = execute_plan(&pattern, &plan);
                let (max_d, mean_d) = displacement_metrics(
                    pattern.positions(),
                    trajectory.last().unwrap().positions(),
                );
                SweepSummary {
                    method: "macro".into(),
                    n,
                    transform_time: (trajectory.len() - 1) as f64 * cfg.dt,
                    collisions: count_collisions(&trajectory, cfg.agent_radius),
                    max_displacement: max_d,
                    mean_displacement: mean_d,
                }
            }
            PlannerKind::Moebius => {
                let cfg = MoebiusConfig::default();
                let plan = plan_moebius_transform(&pattern, MapDirection::CircleToLine, &cfg)?;
                let ticks = plan.duration_ticks();
                let frames: Vec<PatternState> = (0..=ticks)
                    .map(|t| {
                        PatternState::from_parts(plan.positions_at(t), pattern.phases().to_vec())
                    })
                    .collect::<swarm_core::error::Result<_>>()?;
                let (max_d, mean_d) =
                    displacement_metrics(pattern.positions(), &plan.destinations());
                // One waypoint per tick at the shared tick length.
                let tick_seconds = 0.01;
                SweepSummary {
                    method: "moebius".into(),
                    n,
                    transform_time: ticks as f64 * tick_seconds,
                    collisions: count_collisions(&frames, 0.08),
                    max_displacement: max_d,
                    mean_displacement: mean_d,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_15_degrees_is_collision_free() {
        let table = sweep_rotation_collisions(&[15.0], &TABLE_NS, 1.0, 0.08).unwrap();
        assert!(table.iter().all(|c| c.collisions == 0), "{table:?}");
    }

    #[test]
    fn unrotated_square_collides() {
        let table = sweep_rotation_collisions(&[0.0], &[4], 1.0, 0.08).unwrap();
        assert!(table[0].collisions >= 1);
    }

    #[test]
    fn some_wide_angle_collides() {
        let table =
            sweep_rotation_collisions(&TABLE_ANGLES_DEG, &TABLE_NS, 1.0, 0.08).unwrap();
        assert!(table
            .iter()
            .any(|c| c.angle_deg >= 30.0 && c.collisions >= 1));
    }

    #[test]
    fn sweeps_are_reproducible() {
        let a = sweep_transform_time(PlannerKind::Macro, &[3, 5, 8], 1.0).unwrap();
        let b = sweep_transform_time(PlannerKind::Macro, &[3, 5, 8], 1.0).unwrap();
        assert_eq!(a, b);
        let a = sweep_transform_time(PlannerKind::Moebius, &[3, 5, 8], 1.0).unwrap();
        let b = sweep_transform_time(PlannerKind::Moebius, &[3, 5, 8], 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transform_time_is_positive() {
        for method in [PlannerKind::Macro, PlannerKind::Moebius] {
            let rows = sweep_transform_time(method, &[3], 1.0).unwrap();
            assert!(rows[0].transform_time > 0.0);
        }
    }

    #[test]
    fn moebius_mean_displacement_decreases() {
        let ns: Vec<usize> = (3..=11).collect();
        let rows = sweep_transform_time(PlannerKind::Moebius, &ns, 1.0).unwrap();
        for w in rows.windows(2) {
            assert!(
                w[1].mean_displacement < w[0].mean_displacement,
                "mean displacement not decreasing at n={}",
                w[1].n
            );
        }
    }

    #[test]
    fn empty_ns_rejected() {
        assert!(sweep_transform_time(PlannerKind::Macro, &[], 1.0).is_err());
    }
}
