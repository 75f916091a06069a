//! Fixed-step particle environment: agents as particles pulled toward the
//! slots of a virtual-structure pattern, obstacle walls as repulsive force
//! emitters acting on the centroid, and a force-threshold state machine
//! that flattens the pattern when the net centroid force grows too large
//! and restores it once the force falls off.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::flatten::{execute_plan, plan_flatten, MacroConfig};
use crate::formation::PatternState;
use crate::geom::{linear_distance, Point2};
use crate::moebius::{plan_moebius_transform, MapDirection, MoebiusConfig};
use crate::TransformPlan;

/// A point mass with the four particle properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub mass: f64,
    pub position: Point2,
    pub velocity: Point2,
    pub age: f64,
}

impl Particle {
    pub fn at(position: Point2) -> Self {
        Particle { mass: 1.0, position, velocity: Point2::ZERO, age: 0.0 }
    }
}

/// A point force emitter. Positive strength attracts, negative repels;
/// the inverse-square law is clamped below `min_distance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSource {
    pub anchor: Point2,
    pub strength: f64,
    pub min_distance: f64,
}

impl ForceSource {
    /// Force exerted on a particle at `pos`.
    pub fn force_at(&self, pos: Point2) -> Point2 {
        let d = self.anchor - pos;
        let dist = d.norm().max(self.min_distance);
        // Toward the anchor when attractive, away when repulsive.
        d.scaled(self.strength / (dist * dist * dist.max(1e-12)))
    }
}

/// A wall segment realized as a row of repulsive emitters.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub segment: (Point2, Point2),
    pub emitters: Vec<ForceSource>,
}

impl Obstacle {
    /// Emitter sampling interval along a wall, in world units.
    pub const EMITTER_SPACING: f64 = 0.5;

    /// A wall from `a` to `b` whose emitters repel with the given strength
    /// magnitude.
    pub fn wall(a: Point2, b: Point2, strength: f64, min_distance: f64) -> Self {
        let len = linear_distance(a, b);
        let count = libm::ceil(len / Self::EMITTER_SPACING).max(1.0) as usize;
        let emitters = (0..=count)
            .map(|i| {
                let t = i as f64 / count as f64;
                ForceSource {
                    anchor: a + (b - a).scaled(t),
                    strength: -strength.abs(),
                    min_distance,
                }
            })
            .collect();
        Obstacle { segment: (a, b), emitters }
    }
}

/// Simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    /// Net centroid force above which a flattening transformation starts.
    pub f_max: f64,
    /// Net centroid force below which the pattern restores; must be < f_max.
    pub f_min: f64,
    /// Constant propulsive force magnitude toward the goal.
    pub propulsion: f64,
    pub goal: Point2,
    pub agent_radius: f64,
    pub max_speed: f64,
    /// Per-step velocity damping factor in [0, 1].
    pub damping: f64,
    /// Stiffness of the spring pulling each agent to its pattern slot.
    pub slot_stiffness: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument("dt must be > 0"));
        }
        if !(self.f_min < self.f_max) || !(self.f_min > 0.0) {
            return Err(Error::InvalidArgument("thresholds need 0 < f_min < f_max"));
        }
        if !(self.agent_radius > 0.0) || !(self.max_speed > 0.0) {
            return Err(Error::InvalidArgument("agent_radius and max_speed must be > 0"));
        }
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(Error::InvalidArgument("damping must lie in [0, 1]"));
        }
        Ok(())
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 0.01,
            f_max: 1.0,
            f_min: 0.2,
            propulsion: 1.0,
            goal: Point2::ZERO,
            agent_radius: 0.08,
            max_speed: 1.0,
            damping: 0.05,
            slot_stiffness: 400.0,
        }
    }
}

/// Transformation state machine phase. Transitions only along the cycle
/// Normal -> Flattening -> Flattened -> Restoring -> Normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Normal,
    Flattening,
    Flattened,
    Restoring,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Normal => "normal",
            Mode::Flattening => "flattening",
            Mode::Flattened => "flattened",
            Mode::Restoring => "restoring",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which transformation method the trigger launches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlannerKind {
    Macro,
    Moebius,
}

/// One simulation tick's observable state for one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub tick: u64,
    pub sim_time: f64,
    pub mode: Mode,
    pub agent_id: usize,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

/// The whole simulated world.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub particles: Vec<Particle>,
    pub centroid_particle: Particle,
    pub obstacles: Vec<Obstacle>,
    pub config: SimConfig,
    pub mode: Mode,
    pub active_plan: Option<TransformPlan>,
    pub tick: u64,
    pub planner: PlannerKind,
    pub macro_cfg: MacroConfig,
    pub moebius_cfg: MoebiusConfig,
    /// Slot offsets (relative to the centroid) of the undeformed pattern.
    base_offsets: Vec<Point2>,
    base_phases: Vec<f64>,
    /// Per-tick slot offsets of the running transformation.
    frames: Vec<Vec<Point2>>,
    cursor: usize,
}

impl World {
    /// Builds a world with one particle per agent, parked on its slot.
    pub fn new(
        pattern: &PatternState,
        obstacles: Vec<Obstacle>,
        config: SimConfig,
        planner: PlannerKind,
        macro_cfg: MacroConfig,
        moebius_cfg: MoebiusConfig,
    ) -> Result<Self> {
        config.validate()?;
        let c = pattern.centroid();
        let base_offsets: Vec<Point2> =
            pattern.positions().iter().map(|&p| p - c).collect();
        Ok(World {
            particles: pattern.positions().iter().map(|&p| Particle::at(p)).collect(),
            centroid_particle: Particle::at(c),
            obstacles,
            config,
            mode: Mode::Normal,
            active_plan: None,
            tick: 0,
            planner,
            macro_cfg,
            moebius_cfg,
            base_phases: pattern.phases().to_vec(),
            base_offsets,
            frames: Vec::new(),
            cursor: 0,
        })
    }

    /// Vector sum of all obstacle emitter forces at the centroid plus the
    /// constant propulsion toward the goal.
    pub fn net_centroid_force(&self) -> Point2 {
        let pos = self.centroid_particle.position;
        let mut f = Point2::ZERO;
        for obstacle in &self.obstacles {
            for emitter in &obstacle.emitters {
                f = f + emitter.force_at(pos);
            }
        }
        let to_goal = self.config.goal - pos;
        let d = to_goal.norm();
        if d > 1e-12 {
            f = f + to_goal.scaled(self.config.propulsion / d);
        }
        f
    }

    /// The pattern the agents are currently asked to hold, as positions
    /// around the live centroid.
    fn current_offsets(&self) -> &[Point2] {
        match self.mode {
            Mode::Normal => &self.base_offsets,
            Mode::Flattening | Mode::Restoring => &self.frames[self.cursor],
            Mode::Flattened => self.frames.last().expect("flattened implies frames"),
        }
    }

    /// Advances the transformation state machine one decision.
    pub fn update_mode(&mut self, planner: PlannerKind) -> Result<()> {
        let force = self.net_centroid_force().norm();
        match self.mode {
            Mode::Normal => {
                if force > self.config.f_max {
                    self.start_transformation(planner)?;
                    self.mode = Mode::Flattening;
                }
            }
            Mode::Flattening => {
                if self.cursor + 1 >= self.frames.len() {
                    self.mode = Mode::Flattened;
                }
            }
            Mode::Flattened => {
                if force < self.config.f_min {
                    // Retrace the recorded forward frames; exact restoration
                    // by construction.
                    self.frames.reverse();
                    self.cursor = 0;
                    self.mode = Mode::Restoring;
                }
            }
            Mode::Restoring => {
                if self.cursor + 1 >= self.frames.len() {
                    self.mode = Mode::Normal;
                    self.frames.clear();
                    self.cursor = 0;
                    self.active_plan = None;
                }
            }
        }
        Ok(())
    }

    fn start_transformation(&mut self, planner: PlannerKind) -> Result<()> {
        let c = self.centroid_particle.position;
        let positions: Vec<Point2> = self.base_offsets.iter().map(|&o| c + o).collect();
        let pattern = PatternState::from_parts(positions, self.base_phases.clone())?;
        let centroid = pattern.centroid();
        match planner {
            PlannerKind::Macro => {
                let plan = plan_flatten(&pattern, &self.macro_cfg)?;
                let traj = execute_plan(&pattern, &plan);
                self.frames = traj
                    .iter()
                    .map(|s| {
                        let sc = s.centroid();
                        s.positions().iter().map(|&p| p - sc).collect()
                    })
                    .collect();
                self.active_plan = Some(TransformPlan::Macro(plan));
            }
            PlannerKind::Moebius => {
                let plan =
                    plan_moebius_transform(&pattern, MapDirection::CircleToLine, &self.moebius_cfg)?;
                let ticks = plan.duration_ticks();
                self.frames = (0..=ticks)
                    .map(|t| {
                        plan.positions_at(t)
                            .into_iter()
                            .map(|p| p - centroid)
                            .collect()
                    })
                    .collect();
                self.active_plan = Some(TransformPlan::Moebius(plan));
            }
        }
        self.cursor = 0;
        Ok(())
    }

    /// One semi-implicit Euler step.
    pub fn step(&mut self) {
        let cfg = self.config;

        let f = self.net_centroid_force();
        integrate(&mut self.centroid_particle, f, &cfg);

        // Micro forces: spring pull toward the slot each agent should hold.
        let centroid = self.centroid_particle.position;
        let offsets: Vec<Point2> = self.current_offsets().to_vec();
        for (particle, offset) in self.particles.iter_mut().zip(offsets) {
            let slot = centroid + offset;
            let force = (slot - particle.position).scaled(cfg.slot_stiffness);
            integrate(particle, force, &cfg);
        }

        if matches!(self.mode, Mode::Flattening | Mode::Restoring)
            && self.cursor + 1 < self.frames.len()
        {
            self.cursor += 1;
        }
        self.tick += 1;
    }

    fn is_finite(&self) -> bool {
        self.centroid_particle.position.is_finite()
            && self.centroid_particle.velocity.is_finite()
            && self
                .particles
                .iter()
                .all(|p| p.position.is_finite() && p.velocity.is_finite())
    }

    /// Runs the world until `max_ticks` or until the centroid reaches the
    /// goal, recording one row per agent per tick.
    pub fn run(&mut self, max_ticks: u64) -> Result<Vec<TraceRecord>> {
        if max_ticks < 1 {
            return Err(Error::InvalidArgument("max_ticks must be >= 1"));
        }
        let mut records = Vec::new();
        for t in 0..max_ticks {
            self.update_mode(self.planner)?;
            self.step();
            if !self.is_finite() {
                return Err(Error::NumericDivergence { tick: self.tick });
            }
            let sim_time = t as f64 * self.config.dt;
            for (id, particle) in self.particles.iter().enumerate() {
                records.push(TraceRecord {
                    tick: t,
                    sim_time,
                    mode: self.mode,
                    agent_id: id,
                    x: particle.position.x,
                    y: particle.position.y,
                    vx: particle.velocity.x,
                    vy: particle.velocity.y,
                });
            }
            let reached = linear_distance(self.centroid_particle.position, self.config.goal)
                < self.config.agent_radius;
            if reached {
                break;
            }
        }
        Ok(records)
    }
}

fn integrate(p: &mut Particle, force: Point2, cfg: &SimConfig) {
    let mut v = p.velocity + force.scaled(cfg.dt / p.mass);
    v = v.scaled(1.0 - cfg.damping);
    let speed = v.norm();
    if speed > cfg.max_speed {
        v = v.scaled(cfg.max_speed / speed);
    }
    p.velocity = v;
    p.position = p.position + v.scaled(cfg.dt);
    p.age += cfg.dt;
}
