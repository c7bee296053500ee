//! Goal sampling: pushing trajectories (linear / sinusoidal waypoint
//! sequences), reorientation goal-angle ladders, gathering thresholds.

use serde::{Deserialize, Serialize};

use crate::config::{PushConfig, ReorientConfig};
use crate::geom::Pose2;
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GoalKind {
    /// `y = k x`
    Linear { k: f64 },
    /// `y = a sin(x / 50)`
    Sinusoid { a: f64 },
    /// Target angle with an evenly spaced subgoal ladder ending at it.
    FixedAngle { goal_theta: f64 },
    /// Gather until the centre distance drops below epsilon.
    Gathering { epsilon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalSchedule {
    pub kind: GoalKind,
    /// Pushing: waypoints along the curve. Reorienting: the angle ladder as
    /// `(0, 0, theta_k)` poses. Gathering: empty.
    pub waypoints: Vec<Pose2>,
    pub current_index: usize,
}

impl GoalSchedule {
    pub fn current(&self) -> Option<&Pose2> {
        self.waypoints.get(self.current_index)
    }

    pub fn is_last(&self) -> bool {
        self.current_index + 1 >= self.waypoints.len()
    }

    /// Advance to the next waypoint/subgoal; false if already at the last.
    pub fn advance(&mut self) -> bool {
        if self.is_last() {
            false
        } else {
            self.current_index += 1;
            true
        }
    }
}

/// Curve value of a pushing trajectory family.
pub fn curve_y(kind: &GoalKind, x: f64) -> f64 {
    match kind {
        GoalKind::Linear { k } => k * x,
        GoalKind::Sinusoid { a } => a * (x / 50.0).sin(),
        _ => 0.0,
    }
}

/// Curve slope dy/dx.
fn curve_dy(kind: &GoalKind, x: f64) -> f64 {
    match kind {
        GoalKind::Linear { k } => *k,
        GoalKind::Sinusoid { a } => a / 50.0 * (x / 50.0).cos(),
        _ => 0.0,
    }
}

/// Tangent heading along increasing x.
pub fn curve_tangent(kind: &GoalKind, x: f64) -> f64 {
    curve_dy(kind, x).atan2(1.0)
}

/// Sample a pushing trajectory: family chosen evenly, then waypoints laid
/// out at fixed arc-length spacing from `x_min` to `x_max` (travel along +x),
/// each waypoint exactly on the curve with the tangent as goal orientation.
pub fn sample_push_goal(cfg: &PushConfig, rng: &mut SeededRng) -> GoalSchedule {
    let kind = if rng.chance(0.5) {
        GoalKind::Linear { k: rng.uniform_range(cfg.k_min, cfg.k_max) }
    } else {
        GoalKind::Sinusoid { a: rng.uniform_range(cfg.a_min_mm, cfg.a_max_mm) }
    };
    let mut waypoints = Vec::new();
    let dx = 0.05f64;
    let mut x = cfg.x_min_mm;
    let mut arc = 0.0;
    let mut next_mark = cfg.waypoint_spacing_mm;
    while x < cfg.x_max_mm {
        let step = dx.min(cfg.x_max_mm - x);
        let slope = curve_dy(&kind, x);
        arc += (1.0 + slope * slope).sqrt() * step;
        x += step;
        if arc >= next_mark {
            waypoints.push(Pose2::new(x, curve_y(&kind, x), curve_tangent(&kind, x)));
            next_mark += cfg.waypoint_spacing_mm;
        }
    }
    let end = Pose2::new(
        cfg.x_max_mm,
        curve_y(&kind, cfg.x_max_mm),
        curve_tangent(&kind, cfg.x_max_mm),
    );
    if waypoints.last().map_or(true, |w| w.distance_to(&end) > 1e-6) {
        waypoints.push(end);
    }
    GoalSchedule { kind, waypoints, current_index: 0 }
}

/// Object start pose for a pushing episode: on the curve at `x_min`, headed
/// along the tangent.
pub fn push_start_pose(kind: &GoalKind, cfg: &PushConfig) -> Pose2 {
    Pose2::new(
        cfg.x_min_mm,
        curve_y(kind, cfg.x_min_mm),
        curve_tangent(kind, cfg.x_min_mm),
    )
}

/// Sample a reorientation goal angle (degrees config, radians out) with the
/// configured probability mass on the large-angle [70, 90] degree band, and
/// build the evenly spaced subgoal ladder ending exactly at the goal.
pub fn sample_reorient_goal(cfg: &ReorientConfig, rng: &mut SeededRng) -> GoalSchedule {
    let hi_band_lo = 70.0_f64.max(cfg.goal_min_deg);
    let deg = if rng.chance(cfg.large_angle_bias) {
        rng.uniform_range(hi_band_lo, cfg.goal_max_deg)
    } else {
        rng.uniform_range(cfg.goal_min_deg, hi_band_lo.min(cfg.goal_max_deg))
    };
    let goal_theta = deg.to_radians();
    let n = cfg.subgoal_count.max(1) as usize;
    // k/n first so the last rung is exactly the goal angle
    let waypoints = (1..=n)
        .map(|k| Pose2::new(0.0, 0.0, goal_theta * (k as f64 / n as f64)))
        .collect();
    GoalSchedule { kind: GoalKind::FixedAngle { goal_theta }, waypoints, current_index: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::config::TaskKind;

    #[test]
    fn push_waypoints_lie_on_their_curve() {
        let cfg = RunConfig::for_task(TaskKind::BiPushing).push;
        let mut rng = SeededRng::new(3, "episode-init");
        for _ in 0..50 {
            let g = sample_push_goal(&cfg, &mut rng);
            assert!(g.waypoints.len() >= 5, "expected several waypoints");
            for w in &g.waypoints {
                assert!((w.y - curve_y(&g.kind, w.x)).abs() < 1e-9);
                assert!((w.theta - curve_tangent(&g.kind, w.x)).abs() < 1e-9);
            }
            let last = g.waypoints.last().unwrap();
            assert!((last.x - cfg.x_max_mm).abs() < 1e-9, "trajectory ends at x_max");
        }
    }

    #[test]
    fn push_waypoint_arc_spacing_is_constant() {
        let cfg = RunConfig::for_task(TaskKind::BiPushing).push;
        let mut rng = SeededRng::new(5, "episode-init");
        let g = sample_push_goal(&cfg, &mut rng);
        // consecutive waypoints are ~30 mm apart along the arc; chord length
        // is close to that for these gentle curves
        for pair in g.waypoints.windows(2).take(g.waypoints.len().saturating_sub(2)) {
            let chord = pair[0].distance_to(&pair[1]);
            assert!((chord - 30.0).abs() < 1.5, "chord {chord}");
        }
    }

    #[test]
    fn reorient_ladder_ends_exactly_at_goal() {
        let cfg = RunConfig::for_task(TaskKind::BiReorienting).reorient;
        let mut rng = SeededRng::new(6, "episode-init");
        for _ in 0..200 {
            let g = sample_reorient_goal(&cfg, &mut rng);
            let goal = match g.kind {
                GoalKind::FixedAngle { goal_theta } => goal_theta,
                _ => unreachable!(),
            };
            assert_eq!(g.waypoints.len(), 10);
            assert_eq!(g.waypoints.last().unwrap().theta, goal);
            let deg = goal.to_degrees();
            assert!((30.0..=90.0).contains(&deg), "goal angle {deg}");
            // evenly spaced
            for (k, w) in g.waypoints.iter().enumerate() {
                assert!((w.theta - goal * (k + 1) as f64 / 10.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_angle_bias_shifts_mass() {
        let cfg = RunConfig::for_task(TaskKind::BiReorienting).reorient;
        let mut rng = SeededRng::new(8, "episode-init");
        let n = 20_000;
        let mut hi = 0;
        for _ in 0..n {
            let g = sample_reorient_goal(&cfg, &mut rng);
            if let GoalKind::FixedAngle { goal_theta } = g.kind {
                if goal_theta.to_degrees() >= 70.0 {
                    hi += 1;
                }
            }
        }
        let frac = hi as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.02, "expected ~50% mass on [70, 90], got {frac}");
    }

    #[test]
    fn schedule_advance_walks_to_the_end() {
        let mut g = GoalSchedule {
            kind: GoalKind::Gathering { epsilon: 90.0 },
            waypoints: vec![Pose2::identity(), Pose2::new(1.0, 0.0, 0.0)],
            current_index: 0,
        };
        assert!(!g.is_last());
        assert!(g.advance());
        assert!(g.is_last());
        assert!(!g.advance());
    }
}
