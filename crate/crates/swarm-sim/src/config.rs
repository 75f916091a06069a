//! Plain-text scenario configuration: TOML sections `[primitives]`,
//! `[sim]`, `[tunnel]` or `[funnel]`, and `[planner]`, each with documented
//! defaults matching the built-in tunnel scenario.

use std::path::Path;

use serde::{Deserialize, Serialize};
use swarm_core::flatten::MacroConfig;
use swarm_core::moebius::{LineMapVariant, MoebiusConfig};
use swarm_core::sim::{PlannerKind, SimConfig};
use swarm_core::Point2;

use crate::{HarnessError, Result};

/// Default repulsion strength of one wall emitter.
pub const DEFAULT_WALL_STRENGTH: f64 = 0.05;
/// Default inverse-square clamp distance of one wall emitter.
pub const DEFAULT_WALL_MIN_DISTANCE: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PrimitivesSection {
    pub n: usize,
    pub r: f64,
    pub e: f64,
    /// Global phase in radians.
    pub phase: f64,
    pub cx: f64,
    pub cy: f64,
}

impl Default for PrimitivesSection {
    fn default() -> Self {
        PrimitivesSection { n: 5, r: 1.0, e: 1.0, phase: 0.0, cx: -3.0, cy: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub f_max: f64,
    pub f_min: f64,
    pub propulsion: f64,
    pub goal_x: f64,
    pub goal_y: f64,
    pub agent_radius: f64,
    pub max_speed: f64,
    pub damping: f64,
    pub slot_stiffness: f64,
    pub max_ticks: u64,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            dt: 0.01,
            f_max: 1.0,
            // Above propulsion, so the pattern restores once the walls'
            // forward kick has decayed past the exit.
            f_min: 0.85,
            propulsion: 0.8,
            goal_x: 8.0,
            goal_y: 0.0,
            agent_radius: 0.08,
            max_speed: 1.0,
            damping: 0.05,
            slot_stiffness: 400.0,
            max_ticks: 40_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TunnelSection {
    pub width: f64,
    pub length: f64,
    pub entry_x: f64,
    pub wall_strength: f64,
    pub wall_min_distance: f64,
}

impl Default for TunnelSection {
    fn default() -> Self {
        TunnelSection {
            width: 0.6,
            length: 2.0,
            entry_x: 0.0,
            wall_strength: DEFAULT_WALL_STRENGTH,
            wall_min_distance: DEFAULT_WALL_MIN_DISTANCE,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct FunnelSection {
    pub entry_width: f64,
    pub exit_width: f64,
    pub length: f64,
    pub entry_x: f64,
    pub wall_strength: f64,
    pub wall_min_distance: f64,
}

impl Default for FunnelSection {
    fn default() -> Self {
        FunnelSection {
            entry_width: 3.0,
            exit_width: 0.8,
            length: 6.0,
            entry_x: 0.0,
            wall_strength: DEFAULT_WALL_STRENGTH,
            wall_min_distance: DEFAULT_WALL_MIN_DISTANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Macro,
    Moebius,
}

impl MethodName {
    pub fn kind(self) -> PlannerKind {
        match self {
            MethodName::Macro => PlannerKind::Macro,
            MethodName::Moebius => PlannerKind::Moebius,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Macro => "macro",
            MethodName::Moebius => "moebius",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantName {
    Exact,
    PaperLiteral,
}

impl VariantName {
    pub fn variant(self) -> LineMapVariant {
        match self {
            VariantName::Exact => LineMapVariant::Exact,
            VariantName::PaperLiteral => LineMapVariant::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerSection {
    pub method: MethodName,
    /// Pre-deflation rotation in degrees.
    pub angle_deg: f64,
    pub steps: usize,
    pub variant: VariantName,
    pub step_length: f64,
    pub stagger_ticks: usize,
    pub line_offset: f64,
    pub target_span: Option<f64>,
}

impl Default for PlannerSection {
    fn default() -> Self {
        PlannerSection {
            method: MethodName::Macro,
            angle_deg: 15.0,
            steps: 100,
            variant: VariantName::Exact,
            step_length: 0.01,
            stagger_ticks: 25,
            line_offset: 0.5,
            target_span: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub primitives: PrimitivesSection,
    pub sim: SimSection,
    pub tunnel: Option<TunnelSection>,
    pub funnel: Option<FunnelSection>,
    pub planner: PlannerSection,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cfg: ScenarioConfig = toml::from_str(&text).map_err(|e| HarnessError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tunnel.is_some() && self.funnel.is_some() {
            return Err(HarnessError::InvalidConfig(
                "choose one of [tunnel] and [funnel]".into(),
            ));
        }
        if self.primitives.n < 3 {
            return Err(HarnessError::InvalidConfig("primitives.n must be >= 3".into()));
        }
        if !(self.primitives.r > 0.0) || !(self.primitives.e > 0.0) {
            return Err(HarnessError::InvalidConfig("primitives.r and .e must be > 0".into()));
        }
        if let Some(f) = &self.funnel {
            if !(f.entry_width > f.exit_width && f.exit_width > 0.0) {
                return Err(HarnessError::InvalidConfig(
                    "funnel needs entry_width > exit_width > 0".into(),
                ));
            }
        }
        if let Some(t) = &self.tunnel {
            if !(t.width > 0.0 && t.length > 0.0) {
                return Err(HarnessError::InvalidConfig(
                    "tunnel needs width > 0 and length > 0".into(),
                ));
            }
        }
        self.sim_config()
            .validate()
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        Ok(())
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            dt: self.sim.dt,
            f_max: self.sim.f_max,
            f_min: self.sim.f_min,
            propulsion: self.sim.propulsion,
            goal: Point2::new(self.sim.goal_x, self.sim.goal_y),
            agent_radius: self.sim.agent_radius,
            max_speed: self.sim.max_speed,
            damping: self.sim.damping,
            slot_stiffness: self.sim.slot_stiffness,
        }
    }

    pub fn macro_config(&self) -> MacroConfig {
        let s_x = self.primitives.r * self.primitives.e;
        let s_y = self.primitives.r / self.primitives.e;
        MacroConfig {
            angle_offset: self.planner.angle_deg.to_radians(),
            steps: self.planner.steps,
            agent_radius: self.sim.agent_radius,
            dt: self.sim.dt,
            ..MacroConfig::new(s_x, s_y)
        }
    }

    pub fn moebius_config(&self) -> MoebiusConfig {
        MoebiusConfig {
            variant: self.planner.variant.variant(),
            target_span: self.planner.target_span,
            step_length: self.planner.step_length,
            stagger_ticks: self.planner.stagger_ticks,
            line_offset: self.planner.line_offset,
        }
    }
}
