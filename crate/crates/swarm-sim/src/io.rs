//! File emission and ingestion: CSV traces with full-precision decimals,
//! JSON summaries, and static SVG frame plots.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use swarm_core::sim::{Mode, Obstacle, TraceRecord};
use swarm_core::Point2;

use crate::{HarnessError, Result};

pub const TRACE_HEADER: &str = "tick,sim_time,mode,agent_id,x,y,vx,vy";

fn mode_from_str(s: &str) -> Option<Mode> {
    match s {
        "normal" => Some(Mode::Normal),
        "flattening" => Some(Mode::Flattening),
        "flattened" => Some(Mode::Flattened),
        "restoring" => Some(Mode::Restoring),
        _ => None,
    }
}

/// Writes the trace as CSV with LF line endings. The default float
/// formatting is the shortest representation that parses back to the same
/// value, so emitted traces round-trip exactly.
pub fn emit_trace(records: &[TraceRecord], path: &Path) -> Result<()> {
    let mut out = String::with_capacity(records.len() * 64 + 64);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.tick, r.sim_time, r.mode, r.agent_id, r.x, r.y, r.vx, r.vy
        ));
    }
    fs::write(path, out).map_err(|e| HarnessError::io(path, e))
}

/// Parses a trace emitted by `emit_trace`.
pub fn read_trace(path: &Path) -> Result<Vec<TraceRecord>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let parse_err = |message: &str| HarnessError::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        _ => return Err(parse_err("missing trace header")),
    }
    let mut records = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(parse_err("expected 8 fields per row"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| parse_err("bad number"));
        records.push(TraceRecord {
            tick: fields[0].parse().map_err(|_| parse_err("bad tick"))?,
            sim_time: num(fields[1])?,
            mode: mode_from_str(fields[2]).ok_or_else(|| parse_err("bad mode"))?,
            agent_id: fields[3].parse().map_err(|_| parse_err("bad agent_id"))?,
            x: num(fields[4])?,
            y: num(fields[5])?,
            vx: num(fields[6])?,
            vy: num(fields[7])?,
        });
    }
    Ok(records)
}

/// Writes any serializable summary as pretty JSON plus a trailing newline.
pub fn emit_summary<T: Serialize>(summary: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary)
        .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// One SVG per sampled tick: agents as circles of `agent_radius`, obstacles
/// as line segments. Returns the written paths.
pub fn emit_svg_frames(
    records: &[TraceRecord],
    obstacles: &[Obstacle],
    agent_radius: f64,
    out_dir: &Path,
    tick_stride: u64,
) -> Result<Vec<PathBuf>> {
    if tick_stride == 0 {
        return Err(HarnessError::InvalidConfig("tick stride must be >= 1".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;

    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Point2| {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    };
    for r in records {
        grow(Point2::new(r.x, r.y));
    }
    for o in obstacles {
        grow(o.segment.0);
        grow(o.segment.1);
    }
    if !min.is_finite() || !max.is_finite() {
        return Ok(Vec::new());
    }
    let pad = (4.0 * agent_radius).max(0.2);
    let (x0, y0) = (min.x - pad, min.y - pad);
    let (w, h) = (max.x - min.x + 2.0 * pad, max.y - min.y + 2.0 * pad);

    let mut paths = Vec::new();
    let mut frame: Vec<&TraceRecord> = Vec::new();
    let mut write_frame = |tick: u64, frame: &[&TraceRecord]| -> Result<()> {
        let path = out_dir.join(format!("frame_{tick:06}.svg"));
        let mut svg = String::new();
        // The y-flip puts the world's +y up.
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" \
             viewBox=\"{x0} {y0} {w} {h}\">\n\
             <g transform=\"translate(0 {flip}) scale(1 -1)\">\n",
            flip = y0 * 2.0 + h
        ));
        for o in obstacles {
            let (a, b) = o.segment;
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                 stroke=\"black\" stroke-width=\"{}\"/>\n",
                a.x,
                a.y,
                b.x,
                b.y,
                agent_radius * 0.5
            ));
        }
        for r in frame {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{agent_radius}\" \
                 fill=\"steelblue\"/>\n",
                r.x, r.y
            ));
        }
        svg.push_str("</g>\n</svg>\n");
        let mut file = fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
        file.write_all(svg.as_bytes()).map_err(|e| HarnessError::io(&path, e))?;
        paths.push(path);
        Ok(())
    };

    let mut current_tick: Option<u64> = None;
    for r in records {
        if current_tick != Some(r.tick) {
            if let Some(t) = current_tick {
                if t % tick_stride == 0 {
                    write_frame(t, &frame)?;
                }
            }
            frame.clear();
            current_tick = Some(r.tick);
        }
        frame.push(r);
    }
    if let Some(t) = current_tick {
        // The final tick is always rendered so the end state is visible.
        write_frame(t, &frame)?;
    }
    Ok(paths)
}
