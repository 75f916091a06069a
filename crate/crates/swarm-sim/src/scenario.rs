//! Scenario construction and execution: a pattern, a set of obstacle
//! walls, a goal, and the planner that fires when the walls push back.

use swarm_core::flatten::MacroConfig;
use swarm_core::formation::{formation_positions, PatternState, PrimaryPrimitives};
use swarm_core::moebius::MoebiusConfig;
use swarm_core::sim::{Obstacle, PlannerKind, SimConfig, TraceRecord, World};
use swarm_core::Point2;

use crate::config::{ScenarioConfig, DEFAULT_WALL_MIN_DISTANCE, DEFAULT_WALL_STRENGTH};
use crate::{HarnessError, Result};

/// Obstacles plus the goal they guard; the reusable part of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFragment {
    pub obstacles: Vec<Obstacle>,
    pub goal: Point2,
}

/// How far beyond an obstacle course the goal sits; far enough that the
/// walls' trailing forward kick decays before the run ends.
const GOAL_CLEARANCE: f64 = 6.0;

/// Two parallel horizontal walls at y = ±width/2 spanning
/// [entry_x, entry_x + length], goal beyond the right end.
pub fn build_tunnel(width: f64, length: f64, entry_x: f64) -> Result<ScenarioFragment> {
    build_tunnel_with(width, length, entry_x, DEFAULT_WALL_STRENGTH, DEFAULT_WALL_MIN_DISTANCE)
}

pub fn build_tunnel_with(
    width: f64,
    length: f64,
    entry_x: f64,
    wall_strength: f64,
    wall_min_distance: f64,
) -> Result<ScenarioFragment> {
    if !(width > 0.0 && length > 0.0) {
        return Err(HarnessError::InvalidConfig(
            "tunnel needs width > 0 and length > 0".into(),
        ));
    }
    let h = width / 2.0;
    let obstacles = vec![
        Obstacle::wall(
            Point2::new(entry_x, h),
            Point2::new(entry_x + length, h),
            wall_strength,
            wall_min_distance,
        ),
        Obstacle::wall(
            Point2::new(entry_x, -h),
            Point2::new(entry_x + length, -h),
            wall_strength,
            wall_min_distance,
        ),
    ];
    Ok(ScenarioFragment { obstacles, goal: Point2::new(entry_x + length + GOAL_CLEARANCE, 0.0) })
}

/// Two converging walls narrowing from entry_width to exit_width over
/// `length`, goal beyond the narrow end.
pub fn build_funnel(entry_width: f64, exit_width: f64, length: f64) -> Result<ScenarioFragment> {
    build_funnel_with(
        entry_width,
        exit_width,
        length,
        0.0,
        DEFAULT_WALL_STRENGTH,
        DEFAULT_WALL_MIN_DISTANCE,
    )
}

pub fn build_funnel_with(
    entry_width: f64,
    exit_width: f64,
    length: f64,
    entry_x: f64,
    wall_strength: f64,
    wall_min_distance: f64,
) -> Result<ScenarioFragment> {
    if !(entry_width > exit_width && exit_width > 0.0) {
        return Err(HarnessError::InvalidConfig(
            "funnel needs entry_width > exit_width > 0".into(),
        ));
    }
    if !(length > 0.0) {
        return Err(HarnessError::InvalidConfig("funnel needs length > 0".into()));
    }
    let obstacles = vec![
        Obstacle::wall(
            Point2::new(entry_x, entry_width / 2.0),
            Point2::new(entry_x + length, exit_width / 2.0),
            wall_strength,
            wall_min_distance,
        ),
        Obstacle::wall(
            Point2::new(entry_x, -entry_width / 2.0),
            Point2::new(entry_x + length, -exit_width / 2.0),
            wall_strength,
            wall_min_distance,
        ),
    ];
    Ok(ScenarioFragment { obstacles, goal: Point2::new(entry_x + length + GOAL_CLEARANCE, 0.0) })
}

/// A fully specified deterministic run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub pattern: PatternState,
    pub obstacles: Vec<Obstacle>,
    pub sim: SimConfig,
    pub planner: PlannerKind,
    pub macro_cfg: MacroConfig,
    pub moebius_cfg: MoebiusConfig,
    pub max_ticks: u64,
}

impl Scenario {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let p = &cfg.primitives;
        let prims = PrimaryPrimitives::new(p.n, p.r, p.e, p.phase, Point2::new(p.cx, p.cy))?;
        let pattern = formation_positions(&prims, &prims.shaping_radii());
        let (obstacles, fragment_goal) = if let Some(t) = &cfg.tunnel {
            let f = build_tunnel_with(
                t.width,
                t.length,
                t.entry_x,
                t.wall_strength,
                t.wall_min_distance,
            )?;
            (f.obstacles, Some(f.goal))
        } else if let Some(f) = &cfg.funnel {
            let f = build_funnel_with(
                f.entry_width,
                f.exit_width,
                f.length,
                f.entry_x,
                f.wall_strength,
                f.wall_min_distance,
            )?;
            (f.obstacles, Some(f.goal))
        } else {
            (Vec::new(), None)
        };
        let mut sim = cfg.sim_config();
        // The explicit goal wins only when it differs from the default.
        if sim.goal == default_goal() {
            if let Some(goal) = fragment_goal {
                sim.goal = goal;
            }
        }
        let name = cfg.name.clone().unwrap_or_else(|| {
            if cfg.tunnel.is_some() {
                "tunnel".into()
            } else if cfg.funnel.is_some() {
                "funnel".into()
            } else {
                "field".into()
            }
        });
        Ok(Scenario {
            name,
            pattern,
            obstacles,
            sim,
            planner: cfg.planner.method.kind(),
            macro_cfg: cfg.macro_config(),
            moebius_cfg: cfg.moebius_config(),
            max_ticks: cfg.sim.max_ticks,
        })
    }

    /// The built-in narrow-tunnel run: five agents, radius 1, tunnel width
    /// 0.6, so the pattern must flatten to pass.
    pub fn tunnel_default() -> Scenario {
        let cfg = ScenarioConfig {
            tunnel: Some(crate::config::TunnelSection::default()),
            ..Default::default()
        };
        Scenario::from_config(&cfg).expect("built-in scenario is valid")
    }

    /// The built-in funnel run: converging walls narrowing from 3 to 0.8.
    pub fn funnel_default() -> Scenario {
        let cfg = ScenarioConfig {
            funnel: Some(crate::config::FunnelSection::default()),
            ..Default::default()
        };
        Scenario::from_config(&cfg).expect("built-in scenario is valid")
    }

    pub fn build_world(&self) -> Result<World> {
        Ok(World::new(
            &self.pattern,
            self.obstacles.clone(),
            self.sim,
            self.planner,
            self.macro_cfg,
            self.moebius_cfg,
        )?)
    }

    /// Runs to the goal (or max_ticks), returning the trace and the final
    /// world state.
    pub fn run(&self) -> Result<(Vec<TraceRecord>, World)> {
        let mut world = self.build_world()?;
        let records = world.run(self.max_ticks)?;
        Ok((records, world))
    }

    /// Runs the formation phase: agents start collapsed at the centroid and
    /// spring out to their slots.
    pub fn run_formation(&self, ticks: u64) -> Result<(Vec<TraceRecord>, World)> {
        let mut world = self.build_world()?;
        let c = self.pattern.centroid();
        for particle in &mut world.particles {
            particle.position = c;
        }
        let records = world.run(ticks)?;
        Ok((records, world))
    }
}

fn default_goal() -> Point2 {
    let d = crate::config::SimSection::default();
    Point2::new(d.goal_x, d.goal_y)
}

/// Ratio of the longest to the shortest principal extent of a point set;
/// 1 for a regular pattern, growing without bound as it flattens.
pub fn aspect_ratio(points: &[Point2]) -> f64 {
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
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let hi = tr / 2.0 + disc;
    let lo = (tr / 2.0 - disc).max(0.0);
    if lo <= 1e-300 {
        return f64::INFINITY;
    }
    (hi / lo).sqrt()
}
