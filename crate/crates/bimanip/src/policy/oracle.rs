//! Scripted proportional controllers with ground-truth world access.
//!
//! These are verification baselines, not policies: they read exact object
//! poses from the simulator (which no learned policy observes) and servo
//! the tips with simple proportional laws.

use crate::config::TaskKind;
use crate::geom::{norm2, wrap};
use crate::sim::Shape;
use crate::tasks::TaskEnv;

#[derive(Debug, Clone, Copy)]
pub enum OracleController {
    Push,
    Reorient,
    Gather,
}

/// Hand-coded controller for the given task.
pub fn scripted_oracle(kind: TaskKind) -> OracleController {
    match kind {
        TaskKind::BiPushing => OracleController::Push,
        TaskKind::BiReorienting => OracleController::Reorient,
        TaskKind::BiGathering => OracleController::Gather,
    }
}

impl OracleController {
    pub fn act(&self, env: &TaskEnv) -> Vec<f64> {
        match self {
            OracleController::Push => push_action(env),
            OracleController::Reorient => reorient_action(env),
            OracleController::Gather => gather_action(env),
        }
    }
}

fn clamp_to(v: f64, b: f64) -> f64 {
    v.clamp(-b, b)
}

/// World-frame vector expressed in arm `i`'s fixed command frame.
fn to_cmd_frame(env: &TaskEnv, arm: usize, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = env.cmd_frame(arm).sin_cos();
    [c * v[0] + s * v[1], -s * v[0] + c * v[1]]
}

/// Servo both tips behind the object, pressing differentially to steer the
/// heading toward the next waypoint.
fn push_action(env: &TaskEnv) -> Vec<f64> {
    let cfg = env.cfg();
    let mm = cfg.action.max_step_mm;
    let rad = cfg.action.max_step_rad();
    let obj = env.world().objects[0].pose;
    let wp = *env.goal().current().expect("push schedule");
    let to_wp = [wp.x - obj.x, wp.y - obj.y];
    let dist = norm2(to_wp).max(1e-9);
    let theta_d = if dist < 5.0 { wp.theta } else { to_wp[1].atan2(to_wp[0]) };
    let e = wrap(theta_d - obj.theta);

    let half_w = match env.world().objects[0].shape {
        Shape::Rect { half_w, .. } => half_w,
        Shape::Circle { radius } => radius,
    };
    let tip = cfg.effector.tip_radius_mm;
    let lat = cfg.push.home_lateral_mm;
    let base = 1.5;
    let steer = (8.0 * e).clamp(-1.2, 1.2);
    // pressing at +y lever turns the object clockwise: press harder on -y
    // side to turn counter-clockwise
    let press = [(base - steer).clamp(0.3, 3.5), (base + steer).clamp(0.3, 3.5)];

    let bias = cfg.push.advance_bias_mm;
    let mut action = Vec::with_capacity(4);
    for arm in 0..2 {
        let side = if arm == 0 { lat } else { -lat };
        let target = obj.transform_point([-(half_w + tip - press[arm]), side]);
        let tcp = env.world().effectors[arm].pose;
        let d = to_cmd_frame(env, arm, [target[0] - tcp.x, target[1] - tcp.y]);
        let dx = clamp_to(d[0] - bias, mm);
        let drz = clamp_to(wrap(obj.theta - tcp.theta) + 0.02 * d[1], rad);
        action.push(dx);
        action.push(drz);
    }
    action
}

/// Track the side-face contact points with a tangential offset that creates
/// a torque couple toward the current subgoal angle.
///
/// Motion transfers only while the indentation grows, so the controller
/// pumps: it presses in to build a drive, eases back and repeats, staying
/// below the over-squeeze threshold. Near the final goal it stops pumping
/// and holds still for the success window.
fn reorient_action(env: &TaskEnv) -> Vec<f64> {
    let cfg = env.cfg();
    let mm = cfg.action.max_step_mm;
    let rad = cfg.action.max_step_rad();
    let obj = env.world().objects[0].pose;
    let sub = env.goal().current().expect("ladder").theta;
    let final_goal = env.goal().waypoints.last().unwrap().theta;
    let e = wrap(sub - obj.theta);
    let e_final = wrap(final_goal - obj.theta);
    let half_l = match env.world().objects[0].shape {
        Shape::Rect { half_l, .. } => half_l,
        Shape::Circle { radius } => radius,
    };
    let tip = cfg.effector.tip_radius_mm;
    let hold_press = cfg.reorient.target_depth_mm;
    let tol = cfg.reorient.angle_tol_deg.to_radians();
    let pumping = e_final.abs() > 0.5 * tol;
    let offset = (60.0 * e).clamp(-14.0, 14.0);

    // shared pump phase keeps the couple balanced
    let min_depth = env.world().contacts[0].depth.min(env.world().contacts[1].depth);
    let press_deep = pumping && min_depth < cfg.reward.d_safe_mm - 1.2;

    // counteract positional drift by pressing into it
    let drift = [
        env.start_pos()[0] - obj.x,
        env.start_pos()[1] - obj.y,
    ];

    let mut action = Vec::with_capacity(6);
    for arm in 0..2 {
        let sign = if arm == 0 { 1.0 } else { -1.0 };
        // this arm pushes the object along -sign * (object local y)
        let push_dir = obj.rotate_vec([0.0, -sign]);
        let correction = (0.4 * (drift[0] * push_dir[0] + drift[1] * push_dir[1])).clamp(-0.8, 0.8);
        let press = if press_deep {
            cfg.reward.d_safe_mm - 0.6 + correction
        } else {
            hold_press + correction.max(0.0)
        };
        // arm 0 offset -c*e, arm 1 offset +c*e produces a couple with sign e
        let lateral = if pumping { -sign * offset } else { 0.0 };
        let target = obj.transform_point([lateral, sign * (half_l + tip - press)]);
        let desired_heading = -sign * (std::f64::consts::FRAC_PI_2 + obj.theta);
        let tcp = env.world().effectors[arm].pose;
        let d = to_cmd_frame(env, arm, [target[0] - tcp.x, target[1] - tcp.y]);
        action.push(clamp_to(d[0], mm));
        action.push(clamp_to(d[1], mm));
        action.push(clamp_to(wrap(desired_heading - tcp.theta), rad));
    }
    action
}

/// Carry each object on the tip like a unicycle pusher: keep the object
/// centred on the tip axis, swing the heading toward the subgoal direction,
/// and offset the contact point to torque the carried object onto the line.
fn gather_action(env: &TaskEnv) -> Vec<f64> {
    let cfg = env.cfg();
    let mm = cfg.action.max_step_mm;
    let rad = cfg.action.max_step_rad();
    let size = cfg.gather.object_size_mm;

    let mut action = Vec::with_capacity(4);
    for arm in 0..2 {
        let me = env.world().objects[arm].pose;
        let other = env.world().objects[1 - arm].pose;
        let goal = match env.gum_state() {
            Some(g) => g.subgoal(arm),
            None => other.position(),
        };
        let to_goal = [goal[0] - me.x, goal[1] - me.y];
        let to_other = [other.x - me.x, other.y - me.y];
        // the line refreshes every h steps; a passed (stale) subgoal points
        // backward, so fall back to the other object's direction
        let stale = norm2(to_goal) < 20.0
            || to_goal[0] * to_other[0] + to_goal[1] * to_other[1] <= 0.0;
        let mut u = if stale { to_other } else { to_goal };
        let n = norm2(u).max(1e-9);
        u = [u[0] / n, u[1] / n];
        let theta_u = u[1].atan2(u[0]);

        // direction the pushed face currently drives the object
        let face_sign = if arm == 0 { 1.0 } else { -1.0 };
        let travel = if arm == 0 { me.theta } else { wrap(me.theta + std::f64::consts::PI) };
        let heading_err = wrap(theta_u - travel);

        // contact offset along the face creates a torque toward theta_u:
        // pushing the rear face at +y turns the object clockwise, so the
        // offset takes the opposite sign of the heading error on arm 0
        let offset = -face_sign * (2.0 * heading_err).clamp(-0.35, 0.35) * (size / 2.0);
        let tcp = env.world().effectors[arm].pose;
        let press = 1.5;
        let behind = -face_sign * (size / 2.0 + env.cfg().effector.tip_radius_mm - press);
        // aim for the tip pose that realizes the offset contact on the
        // (possibly rotated) rear face
        let track = me.transform_point([behind, offset]);
        let d = to_cmd_frame(env, arm, [track[0] - tcp.x, track[1] - tcp.y]);
        let dy = clamp_to(0.8 * d[1], mm);
        let drz = clamp_to(wrap(travel - tcp.theta) + 0.3 * heading_err, rad);
        action.push(dy);
        action.push(drz);
    }
    action
}
