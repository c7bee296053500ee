//! Goal-update mechanism: equally spaced subgoal points along a target line
//! between two anchors, rebuilt every `h` steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::point_dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnchorMode {
    /// Phase 1: line between the two object centres.
    ObjectCentres,
    /// Phase 2: line between the two TCP positions (matches what a real
    /// system can observe).
    Tcps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GumState {
    pub anchor_mode: AnchorMode,
    pub line_a: [f64; 2],
    pub line_b: [f64; 2],
    /// Line angle from anchor A to anchor B, rad.
    pub theta_c: f64,
    /// `n` collinear points, endpoints inclusive, spacing `|AB| / (n-1)`.
    pub points: Vec<[f64; 2]>,
    /// Index into `points` assigned to each object.
    pub assigned: [usize; 2],
    pub steps_since_update: u32,
}

impl GumState {
    pub fn subgoal(&self, object: usize) -> [f64; 2] {
        self.points[self.assigned[object]]
    }
}

/// Build the target line and assign a subgoal to each object.
///
/// Object `i`'s candidates are the points strictly closer to the opposing
/// anchor than the object itself; the nearest candidate wins, ties resolved
/// toward the line midpoint, and an object with no candidate (already at or
/// past the opposing anchor) takes the endpoint nearest that anchor.
/// Coincident anchors are a degenerate-line error.
pub fn gum_build(
    mode: AnchorMode,
    anchor_a: [f64; 2],
    anchor_b: [f64; 2],
    n: usize,
    objects: &[[f64; 2]; 2],
) -> Result<GumState> {
    debug_assert!(n >= 2);
    let len = point_dist(anchor_a, anchor_b);
    if len < 1e-9 {
        return Err(Error::DegenerateLine(len));
    }
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        points.push([
            anchor_a[0] + t * (anchor_b[0] - anchor_a[0]),
            anchor_a[1] + t * (anchor_b[1] - anchor_a[1]),
        ]);
    }
    let theta_c = (anchor_b[1] - anchor_a[1]).atan2(anchor_b[0] - anchor_a[0]);
    let assigned = [
        assign_subgoal(&points, objects[0], anchor_b, anchor_a),
        assign_subgoal(&points, objects[1], anchor_a, anchor_b),
    ];
    Ok(GumState {
        anchor_mode: mode,
        line_a: anchor_a,
        line_b: anchor_b,
        theta_c,
        points,
        assigned,
        steps_since_update: 0,
    })
}

fn assign_subgoal(
    points: &[[f64; 2]],
    object: [f64; 2],
    opposing: [f64; 2],
    own: [f64; 2],
) -> usize {
    let mid = [(own[0] + opposing[0]) / 2.0, (own[1] + opposing[1]) / 2.0];
    let obj_to_opp = point_dist(object, opposing);
    let mut best: Option<usize> = None;
    for (idx, p) in points.iter().enumerate() {
        if point_dist(*p, opposing) >= obj_to_opp {
            continue; // not strictly closer to the opposing anchor
        }
        best = Some(match best {
            None => idx,
            Some(cur) => {
                let dc = point_dist(points[cur], object);
                let dn = point_dist(*p, object);
                if dn < dc {
                    idx
                } else if dn == dc && point_dist(*p, mid) < point_dist(points[cur], mid) {
                    idx
                } else {
                    cur
                }
            }
        });
    }
    best.unwrap_or_else(|| {
        // object at or past the opposing anchor: take the endpoint nearest it
        points
            .iter()
            .enumerate()
            .min_by(|a, b| {
                point_dist(*a.1, opposing)
                    .partial_cmp(&point_dist(*b.1, opposing))
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn ten_points_over_180mm_space_exactly_20mm() {
        let g = gum_build(
            AnchorMode::ObjectCentres,
            [-90.0, 0.0],
            [90.0, 0.0],
            10,
            &[[-90.0, 0.0], [90.0, 0.0]],
        )
        .unwrap();
        assert_eq!(g.points.len(), 10);
        assert_eq!(g.points[0], [-90.0, 0.0]);
        assert_eq!(g.points[9], [90.0, 0.0]);
        for w in g.points.windows(2) {
            assert!((point_dist(w[0], w[1]) - 20.0).abs() < 1e-12);
        }
        assert_eq!(g.theta_c, 0.0);
    }

    #[test]
    fn points_collinear_with_constant_spacing() {
        let mut rng = SeededRng::new(4, "gum");
        for _ in 0..200 {
            let a = [rng.uniform_range(-200.0, 200.0), rng.uniform_range(-200.0, 200.0)];
            let b = [rng.uniform_range(-200.0, 200.0), rng.uniform_range(-200.0, 200.0)];
            if point_dist(a, b) < 1.0 {
                continue;
            }
            let n = 2 + rng.index(20);
            let g = gum_build(AnchorMode::Tcps, a, b, n, &[a, b]).unwrap();
            let spacing = point_dist(a, b) / (n - 1) as f64;
            for w in g.points.windows(2) {
                assert!((point_dist(w[0], w[1]) - spacing).abs() < 1e-9);
            }
            // collinearity: cross product of (p - a) with (b - a) vanishes
            let ab = [b[0] - a[0], b[1] - a[1]];
            let len = point_dist(a, b);
            for p in &g.points {
                let ap = [p[0] - a[0], p[1] - a[1]];
                let cross = (ap[0] * ab[1] - ap[1] * ab[0]) / len;
                assert!(cross.abs() < 1e-9, "off-line by {cross}");
            }
        }
    }

    #[test]
    fn assignment_points_toward_closure() {
        // objects sit at the anchors: each gets the point one spacing ahead
        let g = gum_build(
            AnchorMode::ObjectCentres,
            [-90.0, 0.0],
            [90.0, 0.0],
            10,
            &[[-90.0, 0.0], [90.0, 0.0]],
        )
        .unwrap();
        assert_eq!(g.assigned[0], 1, "object 0 moves toward B");
        assert_eq!(g.assigned[1], 8, "object 1 moves toward A");
    }

    #[test]
    fn object_past_opposing_anchor_takes_far_endpoint() {
        let g = gum_build(
            AnchorMode::ObjectCentres,
            [-90.0, 0.0],
            [90.0, 0.0],
            10,
            &[[95.0, 0.0], [-95.0, 0.0]], // swapped past each other
        )
        .unwrap();
        assert_eq!(g.assigned[0], 9);
        assert_eq!(g.assigned[1], 0);
    }

    #[test]
    fn coincident_anchors_degenerate() {
        let e = gum_build(
            AnchorMode::ObjectCentres,
            [5.0, 5.0],
            [5.0, 5.0],
            10,
            &[[0.0, 0.0], [10.0, 10.0]],
        );
        assert!(matches!(e, Err(Error::DegenerateLine(_))));
    }

    /// Independent brute-force re-statement of the assignment rule.
    fn oracle_assign(points: &[[f64; 2]], obj: [f64; 2], opp: [f64; 2], own: [f64; 2]) -> usize {
        let mid = [(own[0] + opp[0]) / 2.0, (own[1] + opp[1]) / 2.0];
        let candidates: Vec<usize> = (0..points.len())
            .filter(|&i| point_dist(points[i], opp) < point_dist(obj, opp))
            .collect();
        if candidates.is_empty() {
            return (0..points.len())
                .min_by(|&a, &b| {
                    point_dist(points[a], opp).partial_cmp(&point_dist(points[b], opp)).unwrap()
                })
                .unwrap();
        }
        *candidates
            .iter()
            .min_by(|&&a, &&b| {
                (point_dist(points[a], obj), point_dist(points[a], mid))
                    .partial_cmp(&(point_dist(points[b], obj), point_dist(points[b], mid)))
                    .unwrap()
            })
            .unwrap()
    }

    #[test]
    fn assignment_matches_exhaustive_scan_on_random_worlds() {
        let mut rng = SeededRng::new(7, "gum-oracle");
        for _ in 0..10_000 {
            let a = [rng.uniform_range(-200.0, 200.0), rng.uniform_range(-120.0, 120.0)];
            let b = [rng.uniform_range(-200.0, 200.0), rng.uniform_range(-120.0, 120.0)];
            if point_dist(a, b) < 1.0 {
                continue;
            }
            let o = [
                [rng.uniform_range(-220.0, 220.0), rng.uniform_range(-140.0, 140.0)],
                [rng.uniform_range(-220.0, 220.0), rng.uniform_range(-140.0, 140.0)],
            ];
            let n = 2 + rng.index(24);
            let g = gum_build(AnchorMode::ObjectCentres, a, b, n, &o).unwrap();
            assert_eq!(g.assigned[0], oracle_assign(&g.points, o[0], b, a));
            assert_eq!(g.assigned[1], oracle_assign(&g.points, o[1], a, b));
        }
    }
}
