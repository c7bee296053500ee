//! Shaped rewards for the three tasks.
//!
//! All four rewards are sums of non-positive terms and reach 0 exactly at
//! their documented optima. Arm indices follow the 1-based convention of the
//! task definitions: arm slot 0 carries sign `(-1)^1 = -1`, slot 1 carries
//! `(-1)^2 = +1`. TCP headings are the task work-frame headings.

use std::f64::consts::FRAC_PI_2;

use crate::config::RewardWeights;
use crate::geom::{angle_dist_raw, point_dist, Pose2};

/// Itemized reward: `terms` sum to `total` (each term is already signed).
#[derive(Debug, Clone)]
pub struct RewardBreakdown {
    pub total: f64,
    pub terms: Vec<(&'static str, f64)>,
}

impl RewardBreakdown {
    fn from_terms(terms: Vec<(&'static str, f64)>) -> Self {
        let total = terms.iter().map(|(_, v)| v).sum();
        RewardBreakdown { total, terms }
    }
}

fn arm_sign(slot: usize) -> f64 {
    if slot == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Bi-pushing state at one step.
#[derive(Debug, Clone, Copy)]
pub struct BiPushState {
    /// Current goal waypoint (position and tangent orientation).
    pub goal: Pose2,
    pub object: Pose2,
    /// Work-frame TCP headings, rad.
    pub tcp_theta: [f64; 2],
}

/// Distance-to-goal, goal-angle and tip-alignment penalties.
pub fn reward_bipush(s: &BiPushState, w: &RewardWeights) -> RewardBreakdown {
    let goal_dist = point_dist(s.goal.position(), s.object.position());
    let goal_angle = angle_dist_raw(s.goal.theta, s.object.theta);
    let tcp_align: f64 = s
        .tcp_theta
        .iter()
        .map(|&t| angle_dist_raw(t, s.object.theta))
        .sum();
    RewardBreakdown::from_terms(vec![
        ("goal_dist", -w.w1 * goal_dist),
        ("goal_angle", -w.w2 * goal_angle),
        ("tcp_align", -w.w3 * tcp_align),
    ])
}

/// Bi-reorienting state at one step.
#[derive(Debug, Clone, Copy)]
pub struct BiReorientState {
    /// Object position at episode start.
    pub initial_pos: [f64; 2],
    pub object: Pose2,
    /// Current target angle (subgoal of the ladder), rad.
    pub goal_theta: f64,
    pub tcp: [Pose2; 2],
    /// Desired contact points on the object side faces, world frame.
    pub ctrl_points: [[f64; 2]; 2],
    /// Sensed contact depth per arm, mm (for the over-squeeze penalty).
    pub depths: [f64; 2],
}

/// Drift, goal-angle, tip-normal, contact-point and over-squeeze penalties.
///
/// The tip-normal term drives arm `i` toward heading `(-1)^i (pi/2 + theta_o)`;
/// the squeeze penalty charges `w_squeeze * max(0, depth - d_safe)` per arm.
pub fn reward_bireorient(s: &BiReorientState, w: &RewardWeights) -> RewardBreakdown {
    let drift = point_dist(s.initial_pos, s.object.position());
    let goal_angle = angle_dist_raw(s.goal_theta, s.object.theta);
    let mut tcp_align = 0.0;
    let mut ctrl_dist = 0.0;
    let mut squeeze = 0.0;
    for i in 0..2 {
        let desired = arm_sign(i) * (FRAC_PI_2 + s.object.theta);
        tcp_align += angle_dist_raw(s.tcp[i].theta, desired);
        ctrl_dist += point_dist(s.ctrl_points[i], s.tcp[i].position());
        squeeze += (s.depths[i] - w.d_safe_mm).max(0.0);
    }
    RewardBreakdown::from_terms(vec![
        ("drift", -w.w1 * drift),
        ("goal_angle", -w.w2 * goal_angle),
        ("tcp_align", -w.w3 * tcp_align),
        ("ctrl_dist", -w.w4 * ctrl_dist),
        ("squeeze", -w.w_squeeze * squeeze),
    ])
}

/// Bi-gathering state at one step.
#[derive(Debug, Clone, Copy)]
pub struct BiGatherState {
    pub objects: [Pose2; 2],
    pub tcp: [Pose2; 2],
    /// Desired contact point on each object, world frame.
    pub ctrl_points: [[f64; 2]; 2],
}

/// Pair-distance, tip-alignment and contact-point penalties.
pub fn reward_bigather(s: &BiGatherState, w: &RewardWeights) -> RewardBreakdown {
    let pair_dist = point_dist(s.objects[0].position(), s.objects[1].position());
    let mut tcp_align = 0.0;
    let mut ctrl_dist = 0.0;
    for i in 0..2 {
        tcp_align += angle_dist_raw(s.tcp[i].theta, s.objects[i].theta);
        ctrl_dist += point_dist(s.ctrl_points[i], s.tcp[i].position());
    }
    RewardBreakdown::from_terms(vec![
        ("pair_dist", -w.w1 * pair_dist),
        ("tcp_align", -w.w2 * tcp_align),
        ("ctrl_dist", -w.w3 * ctrl_dist),
    ])
}

/// Subgoal view of the goal-update mechanism used by the reward.
#[derive(Debug, Clone, Copy)]
pub struct GumView {
    /// Assigned subgoal position per object, world frame.
    pub subgoals: [[f64; 2]; 2],
    /// Target line angle, rad.
    pub theta_c: f64,
}

/// Bi-gathering reward plus subgoal-distance and line-alignment shaping.
///
/// Object `i` is drawn to its assigned subgoal and to orientation
/// `(-1)^i * theta_c`. With `w4 = w5 = 0` this equals [`reward_bigather`].
pub fn reward_bigather_gum(s: &BiGatherState, gum: &GumView, w: &RewardWeights) -> RewardBreakdown {
    let mut b = reward_bigather(s, w);
    let mut subgoal_dist = 0.0;
    let mut line_align = 0.0;
    for i in 0..2 {
        subgoal_dist += point_dist(gum.subgoals[i], s.objects[i].position());
        line_align += angle_dist_raw(s.objects[i].theta, arm_sign(i) * gum.theta_c);
    }
    b.terms.push(("subgoal_dist", -w.w4 * subgoal_dist));
    b.terms.push(("line_align", -w.w5 * line_align));
    b.total += -w.w4 * subgoal_dist - w.w5 * line_align;
    b
}
