//! Acceptance suite: ten numbered criteria, one pass/fail line each.
//!
//! Criterion 8 is knowingly red: it demands a strictly decreasing maximum
//! per-agent displacement over n = 3..11 for the per-agent map method, but
//! under the method's own destination definition the maximum is attained by
//! the agent crossing the whole pattern and grows with n toward the span
//! bound. The companion test `moebius_displacement_oracle_lock` pins the
//! actual values and verifies the decreasing trend that does hold (the mean
//! displacement).

use std::f64::consts::{PI, TAU};

use swarm_core::classify::{classify, TransformationCase};
use swarm_core::flatten::{
    collinearity_deviation, execute_plan, plan_flatten, plan_inverse, rotate_pattern, spacing_cv,
    MacroConfig,
};
use swarm_core::classify::verify_inverse;
use swarm_core::formation::{
    formation_positions, linear_distance, nth_roots, shaping_radii, PatternState,
    PrimaryPrimitives,
};
use swarm_core::geom::{Point2, PolarComplex};
use swarm_core::moebius::{circle_to_line, line_to_circle, LineMapVariant, MoebiusMap};
use swarm_core::sim::{Mode, PlannerKind};
use swarm_sim::scenario::Scenario;
use swarm_sim::sweep::{sweep_rotation_collisions, sweep_transform_time, TABLE_NS};

fn report(num: u32, label: &str, failures: Vec<String>) {
    let ok = failures.is_empty();
    println!("criterion {num} ({label}): {}", if ok { "pass" } else { "fail" });
    assert!(ok, "criterion {num} ({label}):\n{}", failures.join("\n"));
}

fn regular(n: usize, r: f64) -> PatternState {
    let prims = PrimaryPrimitives::regular(n, r).unwrap();
    formation_positions(&prims, &prims.shaping_radii())
}

/// Deterministic scrambles in [0, 1).
fn frac(x: f64) -> f64 {
    x - x.floor()
}

#[test]
fn criterion_01_formation_math() {
    let mut failures = Vec::new();
    for n in 3..=25 {
        for r in [0.5, 1.0, 7.25] {
            let p = regular(n, r);
            for (i, &q) in p.positions().iter().enumerate() {
                let d = linear_distance(q, p.centroid());
                if (d - r).abs() > 1e-12 * r {
                    failures.push(format!("n={n} r={r} agent {i}: |d - r| = {:e}", (d - r).abs()));
                }
            }
        }
    }
    for n in 1..=12usize {
        let z = PolarComplex::new(1.0, 0.0).unwrap();
        let roots = nth_roots(z, n).unwrap();
        for (k, root) in roots.iter().enumerate() {
            let want = Point2::new((TAU * k as f64 / n as f64).cos(), (TAU * k as f64 / n as f64).sin());
            if linear_distance(*root, want) > 1e-12 {
                failures.push(format!("root {k} of unity, n={n}: off by {:e}", linear_distance(*root, want)));
            }
        }
    }
    report(1, "formation math", failures);
}

#[test]
fn criterion_02_shaping_radii_identity() {
    let mut failures = Vec::new();
    for i in 0..40 {
        let r = 0.05 + 0.35 * i as f64;
        for j in 0..25 {
            let e = 0.1 + 0.4 * j as f64;
            let s = shaping_radii(r, e).unwrap();
            if (s.s_x * s.s_y - r * r).abs() > 1e-12 * r * r {
                failures.push(format!("r={r} e={e}: product off by {:e}", (s.s_x * s.s_y - r * r).abs()));
            }
        }
    }
    report(2, "shaping radii identity", failures);
}

#[test]
fn criterion_03_moebius_exactness() {
    let mut failures = Vec::new();
    let cayley = MoebiusMap::circle_to_line();
    // Exclude a small arc around the pole at angle pi; image magnitudes
    // blow up there and absolute tolerances stop being meaningful.
    let gap = 0.05;
    for k in 0..10_000 {
        let theta = -PI + gap + (TAU - 2.0 * gap) * (k as f64 + 0.5) / 10_000.0;
        let z = Point2::new(theta.cos(), theta.sin());
        let w = circle_to_line(z, LineMapVariant::Exact).unwrap();
        if w.y.abs() > 1e-12 {
            failures.push(format!("theta={theta}: image off the axis by {:e}", w.y.abs()));
        }
        let general = cayley.apply(z).unwrap();
        if linear_distance(w, general) > 1e-12 {
            failures.push(format!("theta={theta}: closed form vs general map {:e}", linear_distance(w, general)));
        }
    }
    for i in 0..100 {
        let modulus = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
        let angle = TAU * frac(i as f64 * 0.618_033_988_749_894_9);
        let p = Point2::new(modulus * angle.cos(), modulus * angle.sin());
        let back = line_to_circle(line_to_circle(p).unwrap()).unwrap();
        if linear_distance(p, back) > 1e-12 {
            failures.push(format!("|p|={modulus}: involution residual {:e}", linear_distance(p, back)));
        }
    }
    report(3, "discrete line map exactness", failures);
}

#[test]
fn criterion_04_line_to_circle_geometry() {
    let mut failures = Vec::new();
    for c in [0.25, 0.5, 1.0, 2.0] {
        let centre = Point2::new(0.0, 1.0 / (2.0 * c));
        let radius = 1.0 / (2.0 * c);
        for k in 0..25 {
            let x = -4.0 + 8.0 * k as f64 / 24.0;
            let image = line_to_circle(Point2::new(x, c)).unwrap();
            let residual = (linear_distance(image, centre) - radius).abs();
            if residual > 1e-9 {
                failures.push(format!("c={c} x={x}: residual {residual:e}"));
            }
        }
    }
    report(4, "inversion line-to-circle geometry", failures);
}

#[test]
fn criterion_05_case_taxonomy() {
    let mut failures = Vec::new();
    let mut check = |label: String, got: TransformationCase, want: TransformationCase| {
        if got != want {
            failures.push(format!("{label}: got {got:?}, want {want:?}"));
        }
    };
    for k in 0..120u32 {
        let n = 3 + (k % 11) as usize;
        let phase = TAU * frac(k as f64 * 0.618_033_988_749_894_9);
        let prims = PrimaryPrimitives::new(n, 1.0 + (k % 5) as f64 * 0.5, 1.0, phase, Point2::ZERO)
            .unwrap();
        let p = formation_positions(&prims, &prims.shaping_radii());
        let angle = 0.3 + 5.0 * frac(k as f64 * 0.414_213_562_373_095);
        let shift = Point2::new(
            -5.0 + 10.0 * frac(k as f64 * 0.732_050_807_568_877),
            -5.0 + 10.0 * frac(k as f64 * 0.236_067_977_499_79),
        );

        // Rigid motion moving everyone.
        let q = rotate_pattern(&p, angle).translated(shift + Point2::new(3.0, 0.0));
        let rec = classify(&p, &q, 1e-6).unwrap();
        if rec.per_agent_displacement.iter().all(|&d| d > 1e-6) {
            check(format!("k={k} rigid"), rec.case, TransformationCase::Case1);
        }

        // Rotation about one agent keeps it fixed.
        let pivot = p.positions()[0];
        let fixed = PatternState::from_parts(
            p.positions().iter().map(|&x| pivot + (x - pivot).rotated(angle)).collect(),
            p.phases().to_vec(),
        )
        .unwrap();
        check(format!("k={k} pivot"), classify(&p, &fixed, 1e-6).unwrap().case, TransformationCase::Case2);

        // Uniform scaling about the centroid.
        let c = p.centroid();
        let scale = 1.5 + frac(k as f64 * 0.301);
        let scaled = PatternState::from_parts(
            p.positions().iter().map(|&x| c + (x - c).scaled(scale)).collect(),
            p.phases().to_vec(),
        )
        .unwrap();
        check(format!("k={k} scaled"), classify(&p, &scaled, 1e-6).unwrap().case, TransformationCase::Case3);

        // Flatten onto a horizontal line keeping agent 0 in place.
        let y0 = p.positions()[0].y;
        let squashed = PatternState::from_parts(
            p.positions()
                .iter()
                .enumerate()
                .map(|(i, &x)| Point2::new(x.x + 0.05 * i as f64, y0))
                .collect(),
            p.phases().to_vec(),
        )
        .unwrap();
        check(format!("k={k} squash"), classify(&p, &squashed, 1e-6).unwrap().case, TransformationCase::Case4);
    }
    report(5, "transformation case taxonomy", failures);
}

#[test]
fn criterion_06_flatten_end_to_end() {
    let mut failures = Vec::new();
    for n in 3..=25 {
        let p = regular(n, 1.0);
        let cfg = MacroConfig::for_radius(1.0);
        let plan = plan_flatten(&p, &cfg).unwrap();
        let traj = execute_plan(&p, &plan);
        let flat = traj.last().unwrap();
        let s_x = plan.keyframes.last().unwrap().s_x;
        let dev = collinearity_deviation(flat.positions());
        if dev > 1e-6 * s_x {
            failures.push(format!("n={n}: collinearity deviation {dev:e}"));
        }
        if n >= 5 {
            let cv = spacing_cv(flat.positions());
            if cv > 0.10 {
                failures.push(format!("n={n}: spacing CV {cv}"));
            }
        }
        let back = execute_plan(flat, &plan_inverse(&plan));
        if !verify_inverse(&p, back.last().unwrap(), 1e-6) {
            failures.push(format!("n={n}: inverse roundtrip missed 1e-6"));
        }
    }
    report(6, "flatten end to end", failures);
}

#[test]
fn criterion_07_rotation_collision_table() {
    let mut failures = Vec::new();
    let quiet = sweep_rotation_collisions(&[15.0], &TABLE_NS, 1.0, 0.08).unwrap();
    for cell in &quiet {
        if cell.collisions != 0 {
            failures.push(format!("15 degrees, n={}: {} collisions", cell.n, cell.collisions));
        }
    }
    let wide = sweep_rotation_collisions(&[30.0, 45.0, 60.0], &TABLE_NS, 1.0, 0.08).unwrap();
    if !wide.iter().any(|c| c.collisions >= 1) {
        failures.push("no wide-angle cell produced a collision".into());
    }
    report(7, "rotation collision table", failures);
}

#[test]
fn criterion_08_moebius_displacement_trend() {
    let ns: Vec<usize> = (3..=11).collect();
    let rows = sweep_transform_time(PlannerKind::Moebius, &ns, 1.0).unwrap();
    let mut failures = Vec::new();
    for w in rows.windows(2) {
        if !(w[1].max_displacement < w[0].max_displacement) {
            failures.push(format!(
                "max displacement does not decrease from n={} ({}) to n={} ({})",
                w[0].n, w[0].max_displacement, w[1].n, w[1].max_displacement
            ));
        }
    }
    report(8, "per-agent map displacement trend", failures);
}

/// The locked values behind criterion 8: the maximum displacement grows with
/// n (the pole-adjacent agent crosses the pattern), while the mean
/// displacement does decrease strictly over the same range.
#[test]
fn moebius_displacement_oracle_lock() {
    let ns: Vec<usize> = (3..=11).collect();
    let rows = sweep_transform_time(PlannerKind::Moebius, &ns, 1.0).unwrap();
    let max_expected = [
        1.732050807568877,
        1.847759065022573,
        1.902113032590307,
        1.931851652578136,
        1.949855824363647,
        1.961570560806461,
        1.969615506024416,
        1.975376681190275,
        1.979642883761865,
    ];
    let mean_expected = [
        1.244016935856292,
        1.157001448489282,
        1.114036845630852,
        1.086889229091300,
        1.068426657858006,
        1.055274310619228,
        1.045558524415857,
        1.038175976965745,
        1.032436440947739,
    ];
    for ((row, &max_want), &mean_want) in rows.iter().zip(&max_expected).zip(&mean_expected) {
        assert!(
            (row.max_displacement - max_want).abs() < 1e-12,
            "n={}: max {} vs locked {}",
            row.n,
            row.max_displacement,
            max_want
        );
        assert!(
            (row.mean_displacement - mean_want).abs() < 1e-12,
            "n={}: mean {} vs locked {}",
            row.n,
            row.mean_displacement,
            mean_want
        );
    }
    for w in rows.windows(2) {
        assert!(w[1].mean_displacement < w[0].mean_displacement);
        assert!(w[1].max_displacement > w[0].max_displacement);
    }
}

#[test]
fn criterion_09_tunnel_regression() {
    let mut failures = Vec::new();
    let scenario = Scenario::tunnel_default();
    let (records, world) = scenario.run().unwrap();
    let n = scenario.pattern.n();

    let modes: Vec<Mode> = {
        let mut seq = Vec::new();
        for chunk in records.chunks(n) {
            if seq.last() != Some(&chunk[0].mode) {
                seq.push(chunk[0].mode);
            }
        }
        seq
    };
    let want = [Mode::Normal, Mode::Flattening, Mode::Flattened, Mode::Restoring, Mode::Normal];
    if modes != want {
        failures.push(format!("mode sequence {modes:?}"));
    }

    let trigger = records
        .chunks(n)
        .find(|c| c[0].mode == Mode::Flattening)
        .map(|c| c[0].tick);
    if trigger != Some(4673) {
        failures.push(format!("trigger tick {trigger:?}, locked 4673"));
    }

    let exit_x = 2.0;
    if !(world.centroid_particle.position.x > exit_x) {
        failures.push(format!("final centroid x {}", world.centroid_particle.position.x));
    }

    let final_state = PatternState::from_parts(
        world.particles.iter().map(|p| p.position).collect(),
        scenario.pattern.phases().to_vec(),
    )
    .unwrap();
    match swarm_core::classify::congruent(&scenario.pattern, &final_state, 1e-3) {
        Ok(true) => {}
        other => failures.push(format!("restored congruence: {other:?}")),
    }

    let locked = [
        (8.920714213942114, -2.225108109459294e-17),
        (8.229731208317057, 0.9510565162951535),
        (7.111697219567167, 0.5877852522924732),
        (7.111697219567167, -0.587785252292473),
        (8.229731208317057, -0.9510565162951536),
    ];
    for (i, (particle, &(x, y))) in world.particles.iter().zip(&locked).enumerate() {
        let d = linear_distance(particle.position, Point2::new(x, y));
        if d > 1e-9 {
            failures.push(format!("agent {i} final position off lock by {d:e}"));
        }
    }
    report(9, "tunnel scenario regression", failures);
}

#[test]
fn criterion_10_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();

    let emit_scenario = |scenario: &Scenario, path: &std::path::Path| {
        let (records, _) = scenario.run().unwrap();
        swarm_sim::io::emit_trace(&records, path).unwrap();
    };
    for (name, scenario) in [
        ("tunnel", Scenario::tunnel_default()),
        ("funnel", Scenario::funnel_default()),
    ] {
        let a = dir.path().join(format!("{name}_a.csv"));
        let b = dir.path().join(format!("{name}_b.csv"));
        emit_scenario(&scenario, &a);
        emit_scenario(&scenario, &b);
        if std::fs::read(&a).unwrap() != std::fs::read(&b).unwrap() {
            failures.push(format!("{name} traces differ between runs"));
        }
    }

    let ns: Vec<usize> = (3..=25).collect();
    for method in [PlannerKind::Macro, PlannerKind::Moebius] {
        let a = dir.path().join("sweep_a.json");
        let b = dir.path().join("sweep_b.json");
        swarm_sim::io::emit_summary(&sweep_transform_time(method, &ns, 1.0).unwrap(), &a).unwrap();
        swarm_sim::io::emit_summary(&sweep_transform_time(method, &ns, 1.0).unwrap(), &b).unwrap();
        if std::fs::read(&a).unwrap() != std::fs::read(&b).unwrap() {
            failures.push(format!("{method:?} sweep summaries differ between runs"));
        }
    }
    let angles = [0.0, 15.0, 30.0, 45.0, 60.0];
    let a = dir.path().join("coll_a.json");
    let b = dir.path().join("coll_b.json");
    swarm_sim::io::emit_summary(&sweep_rotation_collisions(&angles, &TABLE_NS, 1.0, 0.08).unwrap(), &a)
        .unwrap();
    swarm_sim::io::emit_summary(&sweep_rotation_collisions(&angles, &TABLE_NS, 1.0, 0.08).unwrap(), &b)
        .unwrap();
    if std::fs::read(&a).unwrap() != std::fs::read(&b).unwrap() {
        failures.push("collision tables differ between runs".into());
    }
    report(10, "determinism", failures);
}
