//! Command-line experiment harness.
//!
//! Exit codes: 0 on success, 1 on invalid configuration or I/O failure,
//! 2 on numeric divergence during a run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use swarm_sim::config::{MethodName, ScenarioConfig, VariantName};
use swarm_sim::io::{emit_summary, emit_svg_frames, emit_trace, read_trace};
use swarm_sim::scenario::Scenario;
use swarm_sim::sweep::{
    sweep_rotation_collisions, sweep_transform_time, TABLE_ANGLES_DEG, TABLE_NS,
};
use swarm_sim::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Macro,
    Moebius,
}

impl MethodArg {
    fn name(self) -> MethodName {
        match self {
            MethodArg::Macro => MethodName::Macro,
            MethodArg::Moebius => MethodName::Moebius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Exact,
    PaperLiteral,
}

impl VariantArg {
    fn name(self) -> VariantName {
        match self {
            VariantArg::Exact => VariantName::Exact,
            VariantArg::PaperLiteral => VariantName::PaperLiteral,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "swarm-sim",
    about = "Deterministic swarm pattern formation and transformation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a formation scenario and write its trace.
    Form {
        /// Scenario file; the built-in tunnel scenario when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Override the number of agents.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run one transformation method on one pattern size.
    Transform {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "macro")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "exact")]
        variant: VariantArg,
        #[arg(long)]
        n: Option<usize>,
        /// Pre-deflation rotation in degrees.
        #[arg(long)]
        angle: Option<f64>,
    },
    /// Collision counts over rotation angles and pattern sizes.
    SweepCollisions {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Restrict the sweep to one angle in degrees.
        #[arg(long)]
        angle: Option<f64>,
        /// Restrict the sweep to one pattern size.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Transformation time and displacement metrics over pattern sizes.
    SweepTime {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "macro")]
        method: MethodArg,
    },
    /// Render an emitted trace as SVG frames.
    Render {
        /// Trace CSV produced by `form` or `transform`.
        trace: PathBuf,
        /// Scenario file supplying the obstacles to draw.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Ticks between rendered frames.
        #[arg(long, default_value_t = 100)]
        stride: u64,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig {
            tunnel: Some(Default::default()),
            ..Default::default()
        }),
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| HarnessError::io(path, e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Form { config, out, n } => {
            let mut cfg = load_config(&config)?;
            if let Some(n) = n {
                cfg.primitives.n = n;
            }
            let scenario = Scenario::from_config(&cfg)?;
            let (records, _) = scenario.run()?;
            ensure_dir(&out)?;
            let trace = out.join(format!("{}_trace.csv", scenario.name));
            emit_trace(&records, &trace)?;
            println!("wrote {}", trace.display());
        }
        Command::Transform { config, out, method, variant, n, angle } => {
            let mut cfg = load_config(&config)?;
            cfg.planner.method = method.name();
            cfg.planner.variant = variant.name();
            if let Some(n) = n {
                cfg.primitives.n = n;
            }
            if let Some(angle) = angle {
                cfg.planner.angle_deg = angle;
            }
            cfg.validate()?;
            let rows = sweep_transform_time(
                cfg.planner.method.kind(),
                &[cfg.primitives.n],
                cfg.primitives.r,
            )?;
            ensure_dir(&out)?;
            let path = out.join(format!(
                "transform_{}_n{}.json",
                cfg.planner.method.as_str(),
                cfg.primitives.n
            ));
            emit_summary(&rows[0], &path)?;
            println!("wrote {}", path.display());
        }
        Command::SweepCollisions { config, out, angle, n } => {
            let cfg = load_config(&config)?;
            let angles: Vec<f64> = match angle {
                Some(a) => vec![a],
                None => TABLE_ANGLES_DEG.to_vec(),
            };
            let ns: Vec<usize> = match n {
                Some(n) => vec![n],
                None => TABLE_NS.to_vec(),
            };
            let table = sweep_rotation_collisions(
                &angles,
                &ns,
                cfg.primitives.r,
                cfg.sim.agent_radius,
            )?;
            ensure_dir(&out)?;
            let path = out.join("collisions.json");
            emit_summary(&table, &path)?;
            println!("wrote {}", path.display());
        }
        Command::SweepTime { config, out, method } => {
            let cfg = load_config(&config)?;
            let ns: Vec<usize> = (3..=25).collect();
            let rows = sweep_transform_time(method.name().kind(), &ns, cfg.primitives.r)?;
            ensure_dir(&out)?;
            let path = out.join(format!("sweep_time_{}.json", method.name().as_str()));
            emit_summary(&rows, &path)?;
            println!("wrote {}", path.display());
        }
        Command::Render { trace, config, out, stride } => {
            let records = read_trace(&trace)?;
            let (obstacles, agent_radius) = match &config {
                Some(_) => {
                    let cfg = load_config(&config)?;
                    let scenario = Scenario::from_config(&cfg)?;
                    (scenario.obstacles, cfg.sim.agent_radius)
                }
                None => (Vec::new(), 0.08),
            };
            let frames = emit_svg_frames(&records, &obstacles, agent_radius, &out, stride)?;
            println!("wrote {} frames to {}", frames.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
