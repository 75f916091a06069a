//! Transformation taxonomy: geometric-relationship equality, the four
//! transformation cases, and inverse-transformation verification.
//!
//! Two patterns are considered geometrically equal when one can be mapped
//! onto the other by a rotation plus translation (no scaling, no
//! reflection). Combined with whether every labeled agent moved, this gives
//! four cases:
//!
//! | geometry  | all agents moved | case  |                        |
//! |-----------|------------------|-------|------------------------|
//! | equal     | yes              | Case1 | elementary             |
//! | equal     | no               | Case2 | elementary, fixed agent|
//! | changed   | yes              | Case3 | geometric              |
//! | changed   | no               | Case4 | geometric, fixed agent |

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formation::{linear_distance, PatternState};
use crate::geom::Point2;

/// Shape descriptor of a pattern, invariant under translation and rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSignature {
    /// All pairwise distances, sorted ascending.
    pub sorted_pairwise_distances: Vec<f64>,
    /// Centroid-removed coordinates, rotated so agent 0 lies on the
    /// positive x-axis.
    pub canonical_coordinates: Vec<Point2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformationCase {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl TransformationCase {
    /// Cases 1 and 2 preserve the pattern's geometric relationships.
    pub fn is_elementary(self) -> bool {
        matches!(self, TransformationCase::Case1 | TransformationCase::Case2)
    }
}

/// The observable effect of one transformation f(P) = Q.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformRecord {
    pub before: PatternState,
    pub after: PatternState,
    pub case: TransformationCase,
    pub per_agent_displacement: Vec<f64>,
}

/// Computes the shape descriptor of a pattern.
pub fn signature(p: &PatternState) -> Result<GeometricSignature> {
    let n = p.n();
    if n < 3 {
        return Err(Error::InvalidArgument("signature needs >= 3 agents"));
    }
    let c = p.centroid();
    let centered: Vec<Point2> = p.positions().iter().map(|&q| q - c).collect();
    if centered.iter().all(|q| q.norm() < 1e-12) {
        return Err(Error::DegenerateInput("all agents coincident"));
    }
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            dists.push(linear_distance(p.positions()[i], p.positions()[j]));
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rot = -centered[0].angle();
    let canonical = centered.iter().map(|&q| q.rotated(rot)).collect();
    Ok(GeometricSignature {
        sorted_pairwise_distances: dists,
        canonical_coordinates: canonical,
    })
}

/// True iff some rotation + translation maps the unlabeled point set of `p`
/// onto that of `q` with max residual <= tol. Scaling and reflection do not
/// count as equal.
pub fn congruent(p: &PatternState, q: &PatternState, tol: f64) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::InvalidArgument("patterns have different agent counts"));
    }
    let n = p.n();
    let cp = p.centroid();
    let cq = q.centroid();
    let a: Vec<Point2> = p.positions().iter().map(|&x| x - cp).collect();
    let b: Vec<Point2> = q.positions().iter().map(|&x| x - cq).collect();

    // Cheap reject on the distance multiset before trying alignments.
    let scale = a.iter().chain(&b).map(|x| x.norm()).fold(1.0_f64, f64::max);
    if !distance_multisets_match(p, q, 4.0 * tol * scale.max(1.0)) {
        return Ok(false);
    }

    let degenerate_a = a.iter().all(|x| x.norm() <= tol);
    let degenerate_b = b.iter().all(|x| x.norm() <= tol);
    if degenerate_a || degenerate_b {
        return Ok(degenerate_a && degenerate_b);
    }

    // Anchor the farthest point of p; each point of q at a compatible radius
    // proposes one candidate rotation.
    let anchor = (0..n)
        .max_by(|&i, &j| a[i].norm().partial_cmp(&a[j].norm()).unwrap())
        .unwrap();
    let ra = a[anchor].norm();
    for j in 0..n {
        if (b[j].norm() - ra).abs() > 2.0 * tol {
            continue;
        }
        let rot = b[j].angle() - a[anchor].angle();
        if aligned_residual(&a, &b, rot) <= tol {
            return Ok(true);
        }
    }
    Ok(false)
}

fn distance_multisets_match(p: &PatternState, q: &PatternState, tol: f64) -> bool {
    let sp = match signature(p) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let sq = match signature(q) {
        Ok(s) => s,
        Err(_) => return false,
    };
    sp.sorted_pairwise_distances
        .iter()
        .zip(&sq.sorted_pairwise_distances)
        .all(|(x, y)| (x - y).abs() <= tol)
}

/// Max distance from each rotated point of `a` to its greedily matched
/// nearest unused point of `b`.
fn aligned_residual(a: &[Point2], b: &[Point2], rot: f64) -> f64 {
    let n = a.len();
    let mut used = alloc::vec![false; n];
    let mut worst = 0.0_f64;
    for &pa in a {
        let pa = pa.rotated(rot);
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, &pb) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = linear_distance(pa, pb);
            if d < best {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// Classifies the transformation taking `before` to `after`.
pub fn classify(before: &PatternState, after: &PatternState, tol: f64) -> Result<TransformRecord> {
    if before.n() != after.n() {
        return Err(Error::MismatchedAgents);
    }
    let displacement: Vec<f64> = before
        .positions()
        .iter()
        .zip(after.positions())
        .map(|(&a, &b)| linear_distance(a, b))
        .collect();
    let all_moved = displacement.iter().all(|&d| d > tol);
    let case = match (congruent(before, after, tol)?, all_moved) {
        (true, true) => TransformationCase::Case1,
        (true, false) => TransformationCase::Case2,
        (false, true) => TransformationCase::Case3,
        (false, false) => TransformationCase::Case4,
    };
    Ok(TransformRecord {
        before: before.clone(),
        after: after.clone(),
        case,
        per_agent_displacement: displacement,
    })
}

/// True iff every labeled agent's roundtrip position is within `tol` of its
/// original position.
pub fn verify_inverse(before: &PatternState, after_roundtrip: &PatternState, tol: f64) -> bool {
    before.n() == after_roundtrip.n()
        && before
            .positions()
            .iter()
            .zip(after_roundtrip.positions())
            .all(|(&a, &b)| linear_distance(a, b) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formation::{formation_positions, PrimaryPrimitives};
    use crate::geom::Point2;

    fn square() -> PatternState {
        let prims = PrimaryPrimitives::regular(4, 1.0).unwrap();
        formation_positions(&prims, &prims.shaping_radii())
    }

    fn rotated_about(p: &PatternState, pivot: Point2, angle: f64) -> PatternState {
        let positions = p
            .positions()
            .iter()
            .map(|&q| pivot + (q - pivot).rotated(angle))
            .collect();
        PatternState::from_parts(positions, p.phases().to_vec()).unwrap()
    }

    fn scaled_about_centroid(p: &PatternState, k: f64) -> PatternState {
        let c = p.centroid();
        let positions = p.positions().iter().map(|&q| c + (q - c).scaled(k)).collect();
        PatternState::from_parts(positions, p.phases().to_vec()).unwrap()
    }

    #[test]
    fn signature_of_unit_square() {
        let s = signature(&square()).unwrap();
        let d2 = 2.0_f64.sqrt();
        let side = d2; // unit-circle square has side sqrt(2), diagonal 2
        let expect = [side, side, side, side, 2.0, 2.0];
        for (got, want) in s.sorted_pairwise_distances.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
        // Translation leaves the signature unchanged.
        let t = square().translated(Point2::new(7.0, -2.0));
        let st = signature(&t).unwrap();
        assert_eq!(s.sorted_pairwise_distances.len(), st.sorted_pairwise_distances.len());
        for (a, b) in s
            .sorted_pairwise_distances
            .iter()
            .zip(&st.sorted_pairwise_distances)
        {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in s.canonical_coordinates.iter().zip(&st.canonical_coordinates) {
            assert!(linear_distance(*a, *b) < 1e-9);
        }
        // Scaling does not.
        let sc = signature(&scaled_about_centroid(&square(), 2.0)).unwrap();
        assert!((sc.sorted_pairwise_distances[0] - 2.0 * side).abs() < 1e-12);
    }

    #[test]
    fn signature_rejects_coincident() {
        let p = PatternState::from_parts(
            alloc::vec![Point2::new(1.0, 1.0); 4],
            alloc::vec![0.0; 4],
        )
        .unwrap();
        assert!(matches!(signature(&p), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn congruence_under_rigid_motion() {
        let p = square();
        let q = rotated_about(&p, p.centroid(), 37.0_f64.to_radians())
            .translated(Point2::new(3.0, -1.0));
        assert!(congruent(&p, &q, 1e-6).unwrap());
    }

    #[test]
    fn scaling_is_not_congruent() {
        let p = square();
        assert!(!congruent(&p, &scaled_about_centroid(&p, 2.0), 1e-6).unwrap());
    }

    #[test]
    fn collinear_is_not_congruent_to_square() {
        let line = PatternState::from_parts(
            alloc::vec![
                Point2::new(-1.0, 0.0),
                Point2::new(-0.3, 0.0),
                Point2::new(0.3, 0.0),
                Point2::new(1.0, 0.0),
            ],
            alloc::vec![0.0; 4],
        )
        .unwrap();
        assert!(!congruent(&square(), &line, 1e-6).unwrap());
    }

    #[test]
    fn congruent_rejects_count_mismatch() {
        let p = square();
        let prims = PrimaryPrimitives::regular(5, 1.0).unwrap();
        let q = formation_positions(&prims, &prims.shaping_radii());
        assert!(congruent(&p, &q, 1e-6).is_err());
    }

    #[test]
    fn case1_square_quarter_turn() {
        let p = square();
        let q = rotated_about(&p, p.centroid(), core::f64::consts::FRAC_PI_2);
        let rec = classify(&p, &q, 1e-6).unwrap();
        assert_eq!(rec.case, TransformationCase::Case1);
        assert!(rec.per_agent_displacement.iter().all(|&d| d > 1.0));
    }

    #[test]
    fn case2_rotation_about_agent() {
        let p = square();
        let pivot = p.positions()[0];
        let q = rotated_about(&p, pivot, core::f64::consts::FRAC_PI_2);
        let rec = classify(&p, &q, 1e-6).unwrap();
        assert_eq!(rec.case, TransformationCase::Case2);
        assert!(rec.per_agent_displacement[0] < 1e-12);
    }

    #[test]
    fn case3_uniform_scaling() {
        let p = square();
        let rec = classify(&p, &scaled_about_centroid(&p, 2.0), 1e-6).unwrap();
        assert_eq!(rec.case, TransformationCase::Case3);
    }

    #[test]
    fn case4_flatten_keeping_one_agent() {
        let p = square();
        // Squash everything onto the horizontal line through agent 0,
        // leaving agent 0 fixed.
        let y0 = p.positions()[0].y;
        let positions = p
            .positions()
            .iter()
            .enumerate()
            .map(|(i, &q)| Point2::new(q.x + if i == 0 { 0.0 } else { 0.1 }, y0))
            .collect();
        let q = PatternState::from_parts(positions, p.phases().to_vec()).unwrap();
        let rec = classify(&p, &q, 1e-6).unwrap();
        assert_eq!(rec.case, TransformationCase::Case4);
    }

    #[test]
    fn identity_is_case2() {
        let p = square();
        let rec = classify(&p, &p, 1e-6).unwrap();
        assert_eq!(rec.case, TransformationCase::Case2);
    }

    #[test]
    fn verify_inverse_basics() {
        let p = square();
        assert!(verify_inverse(&p, &p, 1e-9));
        assert!(!verify_inverse(&p, &p.translated(Point2::new(1.0, 0.0)), 1e-6));
    }
}
