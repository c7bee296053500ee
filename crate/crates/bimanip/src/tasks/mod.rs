//! The three episodic environments behind one reset/step interface.
//!
//! Observations are `left tactile grid || right tactile grid || proprio`.
//! Proprio carries only what a physical system could know: TCP poses in the
//! task work frame plus the commanded goal terms (waypoint, subgoal angle,
//! or subgoal-line points). Object poses never enter the observation.
//!
//! Work frames: each arm's reward heading is its world heading minus a
//! per-task arm offset (the arms face each other, so the second arm's frame
//! is rotated by pi in the gathering task).

pub mod goal;
pub mod gum;
pub mod record;
pub mod reward;

pub use goal::{curve_tangent, curve_y, GoalKind, GoalSchedule};
pub use gum::{gum_build, AnchorMode, GumState};
pub use record::{EpisodeRecord, Event, StepRow, TerminalStatus};
pub use reward::{
    reward_bigather, reward_bigather_gum, reward_bipush, reward_bireorient, BiGatherState,
    BiPushState, BiReorientState, GumView, RewardBreakdown,
};

use crate::config::{RunConfig, TaskKind};
use crate::error::{Error, Result};
use crate::geom::{point_dist, wrap, Pose2};
use crate::rng::SeededRng;
use crate::sim::{
    Effector, Perturbation, PhysicsParams, PoseDelta, RigidObject, Shape, World, WorkspaceBounds,
    WorkspaceStatus,
};
use crate::tactile::{make_observation, render_tactile, TactileImage, TactileObs, TactileParams};

/// Per-step side information.
#[derive(Debug, Clone)]
pub struct StepInfo {
    pub terms: Vec<(&'static str, f64)>,
    pub events: Vec<Event>,
    pub status: TerminalStatus,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub obs: Vec<f64>,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Draw an episode's perturbation schedule from the "perturbation" stream.
///
/// Each scheduled event consumes a fixed number of draws, so the schedule
/// for `count = k` is a prefix-extension of the schedule for `count = k-1`
/// under the same seed (common random numbers across grid cells). Events
/// fire with the phase probability; magnitudes span the phase-scaled range.
pub fn schedule_perturbations(
    cfg: &RunConfig,
    seed: u64,
    episode_len: usize,
    phase: u8,
    n_objects: usize,
) -> Vec<Perturbation> {
    let mut rng = SeededRng::new(seed, "perturbation");
    let (prob, scale) = if phase >= 2 {
        (cfg.perturb.prob_phase2, cfg.perturb.mag_scale_phase2)
    } else {
        (cfg.perturb.prob_phase1, cfg.perturb.mag_scale_phase1)
    };
    let mut out = Vec::new();
    for _ in 0..cfg.perturb.count {
        let step = rng.index(episode_len.max(1));
        let mag_u = rng.uniform();
        let direction = rng.uniform_range(0.0, 2.0 * std::f64::consts::PI);
        let target = rng.index(n_objects.max(1));
        let fire = rng.uniform();
        if fire < prob {
            let span = cfg.perturb.force_max_newton - cfg.perturb.force_min_newton;
            out.push(Perturbation {
                target_object: target,
                force: cfg.perturb.force_min_newton + mag_u * scale * span,
                direction,
                apply_step: step,
            });
        }
    }
    out
}

/// One episodic environment instance.
pub struct TaskEnv {
    cfg: RunConfig,
    kind: TaskKind,
    world: World,
    goal: GoalSchedule,
    gum_state: Option<GumState>,
    phase: u8,
    perturbations: Vec<Perturbation>,
    step_idx: usize,
    done: bool,
    status: TerminalStatus,
    start_poses: Vec<Pose2>,
    prev_object_pose: Pose2,
    hold_count: u32,
    tactile_params: TactileParams,
    noise_rng: SeededRng,
    jitter: (f64, f64),
    arm_offsets: [f64; 2],
    /// Fixed per-arm command frame set at reset: translation actions are
    /// expressed in this frame, independent of the live sensor heading.
    cmd_frames: [f64; 2],
    episode_seed: u64,
    record: EpisodeRecord,
    needs_reset: bool,
}

impl TaskEnv {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let kind = cfg.task;
        let tactile_params = TactileParams::from_config(&cfg.tactile, cfg.effector.tip_radius_mm);
        Ok(TaskEnv {
            kind,
            world: World::new(vec![], vec![], PhysicsParams::default()),
            goal: GoalSchedule {
                kind: GoalKind::Gathering { epsilon: cfg.gather.epsilon_mm },
                waypoints: vec![],
                current_index: 0,
            },
            gum_state: None,
            phase: cfg.curriculum.start_phase,
            perturbations: vec![],
            step_idx: 0,
            done: true,
            status: TerminalStatus::Running,
            start_poses: vec![],
            prev_object_pose: Pose2::identity(),
            hold_count: 0,
            tactile_params,
            noise_rng: SeededRng::new(0, "tactile-noise"),
            jitter: (1.0, 0.0),
            arm_offsets: [0.0, 0.0],
            cmd_frames: [0.0, 0.0],
            episode_seed: 0,
            record: EpisodeRecord {
                task: kind.name().into(),
                seed: 0,
                goal_kind: String::new(),
                goal_params: vec![],
                waypoints: vec![],
                start_poses: vec![],
                steps: vec![],
                status: TerminalStatus::Running,
            },
            cfg,
            needs_reset: true,
        })
    }

    pub fn kind(&self) -> TaskKind {
        self.kind
    }

    pub fn cfg(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn goal(&self) -> &GoalSchedule {
        &self.goal
    }

    pub fn gum_state(&self) -> Option<&GumState> {
        self.gum_state.as_ref()
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Switch the curriculum phase. Affects subgoal-line anchors at the next
    /// rebuild and perturbation scaling at the next reset.
    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase.clamp(1, 2);
    }

    pub fn step_idx(&self) -> usize {
        self.step_idx
    }

    /// Object poses at episode start.
    pub fn start_poses(&self) -> &[Pose2] {
        &self.start_poses
    }

    /// First object's start position (reorienting drift reference).
    pub fn start_pos(&self) -> [f64; 2] {
        self.start_poses[0].position()
    }

    /// Rotation of arm `i`'s fixed command frame (set at reset).
    pub fn cmd_frame(&self, arm: usize) -> f64 {
        self.cmd_frames[arm]
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn record(&self) -> &EpisodeRecord {
        &self.record
    }

    pub fn action_dim(&self) -> usize {
        self.kind.action_dim()
    }

    pub fn proprio_len(&self) -> usize {
        match self.kind {
            TaskKind::BiPushing => 14,
            TaskKind::BiReorienting => 12,
            TaskKind::BiGathering => 14,
        }
    }

    pub fn obs_dim(&self) -> usize {
        let g = self.tactile_params.grid;
        2 * g * g + self.proprio_len()
    }

    /// Work-frame heading of arm `i`.
    pub fn effective_heading(&self, arm: usize) -> f64 {
        wrap(self.world.effectors[arm].pose.theta - self.arm_offsets[arm])
    }

    fn effector(&self, home: Pose2) -> Effector {
        Effector {
            pose: home,
            tip_radius: self.cfg.effector.tip_radius_mm,
            max_step_mm: self.cfg.action.max_step_mm,
            max_step_rad: self.cfg.action.max_step_rad(),
        }
    }

    fn physics(&self) -> PhysicsParams {
        PhysicsParams {
            kappa: self.cfg.physics.kappa_per_mm2,
            depth_clamp: self.cfg.physics.depth_clamp_mm,
            rest_depth: self.cfg.physics.rest_depth_mm,
            overlap_tol: self.cfg.physics.overlap_tol_mm,
            push_gain_max: self.cfg.physics.push_gain_max,
            k_p: self.cfg.perturb.k_p,
            reach: self.cfg.workspace.clamp_reach.then_some(WorkspaceBounds {
                x_min: self.cfg.workspace.x_min_mm,
                x_max: self.cfg.workspace.x_max_mm,
                y_min: self.cfg.workspace.y_min_mm,
                y_max: self.cfg.workspace.y_max_mm,
            }),
        }
    }

    /// Start a fresh episode; returns the first observation.
    pub fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        let mut init = SeededRng::new(seed, "episode-init");
        self.episode_seed = seed;
        self.noise_rng = SeededRng::new(seed, "tactile-noise");
        let mut dr = SeededRng::new(seed, "domain-rand");
        self.jitter = (
            1.0 + dr.uniform_range(-self.cfg.tactile.jitter_gain, self.cfg.tactile.jitter_gain),
            dr.uniform_range(-self.cfg.tactile.jitter_offset, self.cfg.tactile.jitter_offset),
        );
        let friction = self.cfg.physics.friction;
        let tip = self.cfg.effector.tip_radius_mm;

        match self.kind {
            TaskKind::BiPushing => {
                let pc = self.cfg.push.clone();
                self.goal = goal::sample_push_goal(&pc, &mut init);
                let start = goal::push_start_pose(&self.goal.kind, &pc);
                let object = RigidObject::new(
                    Shape::rect(pc.object_width_mm, pc.object_length_mm)?,
                    start,
                    pc.object_mass_g,
                    friction,
                )?;
                let back = -(pc.object_width_mm / 2.0 + tip + pc.home_gap_mm);
                let homes = [
                    start.compose(&Pose2::new(back, pc.home_lateral_mm, 0.0)),
                    start.compose(&Pose2::new(back, -pc.home_lateral_mm, 0.0)),
                ];
                self.world = World::new(
                    vec![object],
                    vec![self.effector(homes[0]), self.effector(homes[1])],
                    self.physics(),
                );
                self.arm_offsets = [0.0, 0.0];
                self.cmd_frames = [start.theta, start.theta];
                self.start_poses = vec![start];
                self.prev_object_pose = start;
            }
            TaskKind::BiReorienting => {
                let rc = self.cfg.reorient.clone();
                let length = init.uniform_range(rc.length_min_mm, rc.length_max_mm);
                self.goal = goal::sample_reorient_goal(&rc, &mut init);
                let start = Pose2::identity();
                let object = RigidObject::new(
                    Shape::rect(rc.width_mm, length)?,
                    start,
                    rc.object_mass_g,
                    friction,
                )?;
                let reach = length / 2.0 + tip - rc.home_depth_mm;
                let homes = [
                    Pose2::new(0.0, reach, -std::f64::consts::FRAC_PI_2),
                    Pose2::new(0.0, -reach, std::f64::consts::FRAC_PI_2),
                ];
                self.world = World::new(
                    vec![object],
                    vec![self.effector(homes[0]), self.effector(homes[1])],
                    self.physics(),
                );
                self.arm_offsets = [0.0, 0.0];
                self.cmd_frames = [
                    -std::f64::consts::FRAC_PI_2,
                    std::f64::consts::FRAC_PI_2,
                ];
                self.start_poses = vec![start];
                self.prev_object_pose = start;
            }
            TaskKind::BiGathering => {
                let gc = self.cfg.gather.clone();
                self.goal = GoalSchedule {
                    kind: GoalKind::Gathering { epsilon: gc.epsilon_mm },
                    waypoints: vec![],
                    current_index: 0,
                };
                let x0 = -init.uniform_range(gc.x_abs_min_mm, gc.x_abs_max_mm);
                let y0 = -init.uniform_range(gc.y_abs_min_mm, gc.y_abs_max_mm);
                let x1 = init.uniform_range(gc.x_abs_min_mm, gc.x_abs_max_mm);
                let y1 = init.uniform_range(gc.y_abs_min_mm, gc.y_abs_max_mm);
                let mk = |x: f64, y: f64| {
                    RigidObject::new(
                        Shape::rect(gc.object_size_mm, gc.object_size_mm).unwrap(),
                        Pose2::new(x, y, 0.0),
                        gc.object_mass_g,
                        friction,
                    )
                    .unwrap()
                };
                let reach = gc.object_size_mm / 2.0 + tip - gc.home_depth_mm;
                let homes = [
                    Pose2::new(x0 - reach, y0, 0.0),
                    Pose2::new(x1 + reach, y1, std::f64::consts::PI),
                ];
                self.world = World::new(
                    vec![mk(x0, y0), mk(x1, y1)],
                    vec![self.effector(homes[0]), self.effector(homes[1])],
                    self.physics(),
                );
                self.arm_offsets = [0.0, std::f64::consts::PI];
                self.cmd_frames = [0.0, std::f64::consts::PI];
                self.start_poses = self.world.objects.iter().map(|o| o.pose).collect();
                self.prev_object_pose = self.world.objects[0].pose;
                self.gum_state = if self.cfg.gum_enabled {
                    self.build_gum().ok()
                } else {
                    None
                };
            }
        }

        self.perturbations = schedule_perturbations(
            &self.cfg,
            seed,
            self.cfg.episode_limit as usize,
            self.phase,
            self.world.objects.len(),
        );
        self.step_idx = 0;
        self.done = false;
        self.status = TerminalStatus::Running;
        self.hold_count = 0;
        let (kind_label, params) = match &self.goal.kind {
            GoalKind::Linear { k } => ("linear", vec![*k]),
            GoalKind::Sinusoid { a } => ("sinusoid", vec![*a]),
            GoalKind::FixedAngle { goal_theta } => ("fixed_angle", vec![*goal_theta]),
            GoalKind::Gathering { epsilon } => ("gathering", vec![*epsilon]),
        };
        self.record = EpisodeRecord {
            task: self.kind.name().into(),
            seed,
            goal_kind: kind_label.into(),
            goal_params: params,
            waypoints: self.goal.waypoints.iter().map(|w| [w.x, w.y, w.theta]).collect(),
            start_poses: self.start_poses.iter().map(|p| [p.x, p.y, p.theta]).collect(),
            steps: vec![],
            status: TerminalStatus::Running,
        };
        self.observation()
    }

    fn gum_anchors(&self) -> ([f64; 2], [f64; 2]) {
        match self.phase {
            2 => (
                self.world.effectors[0].pose.position(),
                self.world.effectors[1].pose.position(),
            ),
            _ => (
                self.world.objects[0].pose.position(),
                self.world.objects[1].pose.position(),
            ),
        }
    }

    fn build_gum(&self) -> Result<GumState> {
        let (a, b) = self.gum_anchors();
        let mode = if self.phase >= 2 { AnchorMode::Tcps } else { AnchorMode::ObjectCentres };
        let objects = [
            self.world.objects[0].pose.position(),
            self.world.objects[1].pose.position(),
        ];
        gum_build(mode, a, b, self.cfg.gum.n as usize, &objects)
    }

    /// Desired contact point on each object for the contact-keeping terms.
    pub fn ctrl_points(&self) -> [[f64; 2]; 2] {
        match self.kind {
            TaskKind::BiReorienting => {
                let obj = &self.world.objects[0];
                let half_l = match obj.shape {
                    Shape::Rect { half_l, .. } => half_l,
                    Shape::Circle { radius } => radius,
                };
                let inset = half_l - self.cfg.reorient.target_depth_mm;
                [
                    obj.pose.transform_point([0.0, inset]),
                    obj.pose.transform_point([0.0, -inset]),
                ]
            }
            TaskKind::BiGathering => {
                let mut pts = [[0.0; 2]; 2];
                for i in 0..2 {
                    let obj = &self.world.objects[i];
                    let tcp = self.world.effectors[i].pose.position();
                    pts[i] = nearest_face_ctrl(obj, tcp, self.cfg.gather.target_depth_mm);
                }
                pts
            }
            TaskKind::BiPushing => {
                // behind-face contact points at the home lateral offsets
                let obj = &self.world.objects[0];
                let half_w = match obj.shape {
                    Shape::Rect { half_w, .. } => half_w,
                    Shape::Circle { radius } => radius,
                };
                let inset = -(half_w - 2.0);
                [
                    obj.pose.transform_point([inset, self.cfg.push.home_lateral_mm]),
                    obj.pose.transform_point([inset, -self.cfg.push.home_lateral_mm]),
                ]
            }
        }
    }

    fn reward_now(&self) -> RewardBreakdown {
        let w = &self.cfg.reward;
        match self.kind {
            TaskKind::BiPushing => {
                let s = BiPushState {
                    goal: *self.goal.current().expect("push schedule has waypoints"),
                    object: self.world.objects[0].pose,
                    tcp_theta: [self.effective_heading(0), self.effective_heading(1)],
                };
                reward_bipush(&s, w)
            }
            TaskKind::BiReorienting => {
                let sub = self.goal.current().expect("ladder nonempty").theta;
                let s = BiReorientState {
                    initial_pos: self.start_poses[0].position(),
                    object: self.world.objects[0].pose,
                    goal_theta: sub,
                    tcp: [self.effective_pose(0), self.effective_pose(1)],
                    ctrl_points: self.ctrl_points(),
                    depths: [self.world.contacts[0].depth, self.world.contacts[1].depth],
                };
                reward_bireorient(&s, w)
            }
            TaskKind::BiGathering => {
                let s = BiGatherState {
                    objects: [self.world.objects[0].pose, self.world.objects[1].pose],
                    tcp: [self.effective_pose(0), self.effective_pose(1)],
                    ctrl_points: self.ctrl_points(),
                };
                match &self.gum_state {
                    Some(g) => {
                        let view = GumView {
                            subgoals: [g.subgoal(0), g.subgoal(1)],
                            theta_c: g.theta_c,
                        };
                        reward_bigather_gum(&s, &view, w)
                    }
                    None => reward_bigather(&s, w),
                }
            }
        }
    }

    fn effective_pose(&self, arm: usize) -> Pose2 {
        let e = &self.world.effectors[arm].pose;
        Pose2::new(e.x, e.y, self.effective_heading(arm))
    }

    fn map_action(&self, action: &[f64]) -> [PoseDelta; 2] {
        let frame_cmds: [(f64, f64, f64); 2] = match self.kind {
            TaskKind::BiPushing => {
                let bias = self.cfg.push.advance_bias_mm;
                [
                    (action[0] + bias, 0.0, action[1]),
                    (action[2] + bias, 0.0, action[3]),
                ]
            }
            TaskKind::BiReorienting => [
                (action[0], action[1], action[2]),
                (action[3], action[4], action[5]),
            ],
            TaskKind::BiGathering => {
                let adv = self.cfg.gather.auto_advance_mm;
                [(adv, action[0], action[1]), (adv, action[2], action[3])]
            }
        };
        let mut deltas = [PoseDelta::default(); 2];
        for arm in 0..2 {
            let (cx, cy, dth) = frame_cmds[arm];
            // command frame -> world -> live TCP frame
            let (fs, fc) = self.cmd_frames[arm].sin_cos();
            let world = [fc * cx - fs * cy, fs * cx + fc * cy];
            let heading = self.world.effectors[arm].pose.theta;
            let (hs, hc) = heading.sin_cos();
            deltas[arm] = PoseDelta {
                dx: hc * world[0] + hs * world[1],
                dy: -hs * world[0] + hc * world[1],
                dtheta: dth,
            };
        }
        deltas
    }

    fn success_now(&self) -> bool {
        match self.kind {
            TaskKind::BiPushing => {
                let last = self.goal.waypoints.last().expect("waypoints");
                self.goal.is_last()
                    && point_dist(self.world.objects[0].pose.position(), last.position())
                        <= self.cfg.push.success_tol_mm
            }
            TaskKind::BiReorienting => self.hold_count >= self.cfg.reorient.hold_steps,
            TaskKind::BiGathering => {
                point_dist(
                    self.world.objects[0].pose.position(),
                    self.world.objects[1].pose.position(),
                ) < self.cfg.gather.epsilon_mm
            }
        }
    }

    /// Advance the episode by one action.
    pub fn step(&mut self, action: &[f64]) -> Result<StepOutcome> {
        if self.needs_reset {
            return Err(Error::contract("step before reset"));
        }
        if self.done {
            return Err(Error::contract("step after episode end"));
        }
        if action.len() != self.action_dim() {
            return Err(Error::contract(format!(
                "action has {} components, task expects {}",
                action.len(),
                self.action_dim()
            )));
        }
        if action.iter().any(|a| !a.is_finite()) {
            return Err(Error::domain("non-finite action component"));
        }

        let mut events = Vec::new();

        // physics
        let deltas = self.map_action(action);
        self.world.step(&deltas)?;

        // scheduled perturbations
        for k in 0..self.perturbations.len() {
            if self.perturbations[k].apply_step == self.step_idx {
                let p = self.perturbations[k];
                self.world.apply_perturbation(&p)?;
                events.push(Event::Perturbation {
                    force: p.force,
                    direction: p.direction,
                    target: p.target_object,
                });
            }
        }

        // goal advance
        match self.kind {
            TaskKind::BiPushing => {
                while !self.goal.is_last() {
                    let cur = self.goal.current().unwrap();
                    if point_dist(self.world.objects[0].pose.position(), cur.position())
                        <= self.cfg.push.waypoint_advance_mm
                    {
                        self.goal.advance();
                        events.push(Event::SubgoalAdvance { index: self.goal.current_index });
                    } else {
                        break;
                    }
                }
            }
            TaskKind::BiReorienting => {
                if !self.goal.is_last() {
                    let cur = self.goal.current().unwrap().theta;
                    let err = wrap(self.world.objects[0].pose.theta - cur).abs();
                    if err <= self.cfg.reorient.angle_tol_deg.to_radians() {
                        self.goal.advance();
                        events.push(Event::SubgoalAdvance { index: self.goal.current_index });
                    }
                }
            }
            TaskKind::BiGathering => {}
        }

        // subgoal-line update
        if let Some(g) = &mut self.gum_state {
            g.steps_since_update += 1;
            if g.steps_since_update >= self.cfg.gum.h {
                match self.build_gum() {
                    Ok(fresh) => {
                        self.gum_state = Some(fresh);
                        events.push(Event::GoalUpdate);
                    }
                    Err(Error::DegenerateLine(_)) => {
                        let g = self.gum_state.as_mut().unwrap();
                        g.steps_since_update = 0;
                        events.push(Event::GumDegenerate);
                    }
                    Err(e) => return Err(e),
                }
            }
        }

        // reward on the post-step state
        let breakdown = self.reward_now();

        // reorientation hold tracking
        if self.kind == TaskKind::BiReorienting {
            let obj = self.world.objects[0].pose;
            let final_goal = self.goal.waypoints.last().unwrap().theta;
            let at_goal =
                wrap(obj.theta - final_goal).abs() <= self.cfg.reorient.angle_tol_deg.to_radians();
            let still = obj.distance_to(&self.prev_object_pose)
                <= self.cfg.reorient.hold_pos_tol_mm
                && wrap(obj.theta - self.prev_object_pose.theta).abs()
                    <= self.cfg.reorient.hold_angle_tol_deg.to_radians();
            self.hold_count = if at_goal && still { self.hold_count + 1 } else { 0 };
            self.prev_object_pose = obj;
        }

        // termination
        let bounds = WorkspaceBounds {
            x_min: self.cfg.workspace.x_min_mm,
            x_max: self.cfg.workspace.x_max_mm,
            y_min: self.cfg.workspace.y_min_mm,
            y_max: self.cfg.workspace.y_max_mm,
        };
        if self.success_now() {
            self.done = true;
            self.status = TerminalStatus::Success;
        } else if let WorkspaceStatus::Violation(arm) = self.world.workspace_check(&bounds) {
            self.done = true;
            self.status = TerminalStatus::WorkspaceViolation { arm };
        } else if self.step_idx + 1 >= self.cfg.episode_limit as usize {
            self.done = true;
            self.status = TerminalStatus::Timeout;
        }

        // log
        self.record.steps.push(StepRow {
            step: self.step_idx,
            object_poses: self
                .world
                .objects
                .iter()
                .map(|o| [o.pose.x, o.pose.y, o.pose.theta])
                .collect(),
            tcp_poses: [
                {
                    let p = self.world.effectors[0].pose;
                    [p.x, p.y, p.theta]
                },
                {
                    let p = self.world.effectors[1].pose;
                    [p.x, p.y, p.theta]
                },
            ],
            action: action.to_vec(),
            reward: breakdown.total,
            terms: breakdown.terms.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            depths: [self.world.contacts[0].depth, self.world.contacts[1].depth],
            tilts: [self.world.contacts[0].tilt, self.world.contacts[1].tilt],
            events: events.clone(),
        });
        self.record.status = self.status;

        self.step_idx += 1;
        let obs = self.observation()?;
        Ok(StepOutcome {
            obs,
            reward: breakdown.total,
            done: self.done,
            info: StepInfo {
                terms: breakdown.terms,
                events,
                status: if self.done { self.status } else { TerminalStatus::Running },
            },
        })
    }

    fn render_arm(&mut self, arm: usize) -> Result<TactileImage> {
        let contact = self.world.contacts[arm];
        let noise = if self.tactile_params.noise_std > 0.0 {
            Some(&mut self.noise_rng)
        } else {
            None
        };
        let mut img = render_tactile(&contact, &self.tactile_params, noise)?;
        let (gain, offset) = self.jitter;
        if contact.in_contact && (gain != 1.0 || offset != 0.0) {
            for p in &mut img.pixels {
                *p = (*p * gain + offset).clamp(0.0, 1.0);
            }
        }
        Ok(img)
    }

    /// Current observation vector.
    pub fn observation(&mut self) -> Result<Vec<f64>> {
        if self.needs_reset && self.world.effectors.is_empty() {
            return Err(Error::contract("observation before reset"));
        }
        self.needs_reset = false;
        let left = self.render_arm(0)?;
        let right = self.render_arm(1)?;
        let mut proprio = Vec::with_capacity(self.proprio_len());
        for arm in 0..2 {
            let p = self.world.effectors[arm].pose;
            let h = self.effective_heading(arm);
            proprio.extend_from_slice(&[p.x, p.y, h.cos(), h.sin()]);
        }
        match self.kind {
            TaskKind::BiPushing => {
                let cur = *self.goal.current().expect("waypoints");
                let next_idx = (self.goal.current_index + 1).min(self.goal.waypoints.len() - 1);
                let next = self.goal.waypoints[next_idx];
                proprio.extend_from_slice(&[
                    cur.x,
                    cur.y,
                    cur.theta.cos(),
                    cur.theta.sin(),
                    next.x,
                    next.y,
                ]);
            }
            TaskKind::BiReorienting => {
                let sub = self.goal.current().expect("ladder").theta;
                let fin = self.goal.waypoints.last().unwrap().theta;
                proprio.extend_from_slice(&[sub.cos(), sub.sin(), fin.cos(), fin.sin()]);
            }
            TaskKind::BiGathering => match &self.gum_state {
                Some(g) => {
                    let s0 = g.subgoal(0);
                    let s1 = g.subgoal(1);
                    proprio.extend_from_slice(&[
                        s0[0],
                        s0[1],
                        s1[0],
                        s1[1],
                        g.theta_c.cos(),
                        g.theta_c.sin(),
                    ]);
                }
                None => proprio.extend_from_slice(&[0.0; 6]),
            },
        }
        make_observation(&TactileObs::new(left, right), &proprio, self.proprio_len())
    }
}

/// Centre of the object face nearest `tcp`, inset by `depth` mm.
fn nearest_face_ctrl(obj: &RigidObject, tcp: [f64; 2], depth: f64) -> [f64; 2] {
    match obj.shape {
        Shape::Circle { radius } => {
            let local = obj.pose.inverse_transform_point(tcp);
            let n = crate::geom::norm2(local).max(1e-9);
            let inset = radius - depth;
            obj.pose.transform_point([local[0] / n * inset, local[1] / n * inset])
        }
        Shape::Rect { half_w, half_l } => {
            let local = obj.pose.inverse_transform_point(tcp);
            let faces = [
                [half_w, 0.0],
                [-half_w, 0.0],
                [0.0, half_l],
                [0.0, -half_l],
            ];
            let nearest = faces
                .into_iter()
                .min_by(|a, b| {
                    point_dist(*a, local).partial_cmp(&point_dist(*b, local)).unwrap()
                })
                .unwrap();
            let inset = [
                nearest[0] - nearest[0].signum() * if nearest[0] != 0.0 { depth } else { 0.0 },
                nearest[1] - nearest[1].signum() * if nearest[1] != 0.0 { depth } else { 0.0 },
            ];
            obj.pose.transform_point(inset)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    fn env(kind: TaskKind) -> TaskEnv {
        TaskEnv::new(RunConfig::for_task(kind)).unwrap()
    }

    #[test]
    fn same_seed_gives_identical_initial_worlds() {
        for kind in [TaskKind::BiPushing, TaskKind::BiReorienting, TaskKind::BiGathering] {
            let mut a = env(kind);
            let mut b = env(kind);
            let oa = a.reset(42).unwrap();
            let ob = b.reset(42).unwrap();
            assert_eq!(oa, ob);
            assert_eq!(a.world(), b.world());
            let oc = a.reset(43).unwrap();
            assert_ne!(oa, oc, "different seed should differ");
        }
    }

    #[test]
    fn observation_length_is_documented() {
        let mut e = env(TaskKind::BiGathering);
        let obs = e.reset(1).unwrap();
        assert_eq!(obs.len(), 2 * 32 * 32 + 14);
        assert_eq!(obs.len(), e.obs_dim());
        let mut e = env(TaskKind::BiReorienting);
        assert_eq!(e.reset(1).unwrap().len(), 2 * 32 * 32 + 12);
    }

    #[test]
    fn gathering_reset_samples_within_boxes() {
        let mut e = env(TaskKind::BiGathering);
        for seed in 0..2000 {
            e.reset(seed).unwrap();
            let o0 = e.world().objects[0].pose;
            let o1 = e.world().objects[1].pose;
            assert!((-200.0..=-50.0).contains(&o0.x), "o1 x {}", o0.x);
            assert!((-100.0..=0.0).contains(&o0.y), "o1 y {}", o0.y);
            assert!((50.0..=200.0).contains(&o1.x), "o2 x {}", o1.x);
            assert!((0.0..=100.0).contains(&o1.y), "o2 y {}", o1.y);
        }
    }

    #[test]
    fn reorient_goals_within_band_and_ladder_has_ten_rungs() {
        let mut e = env(TaskKind::BiReorienting);
        for seed in 0..2000 {
            e.reset(seed).unwrap();
            assert_eq!(e.goal().waypoints.len(), 10);
            let g = e.goal().waypoints.last().unwrap().theta.to_degrees();
            assert!((30.0..=90.0).contains(&g), "goal {g}");
        }
    }

    #[test]
    fn step_contract_errors() {
        let mut e = env(TaskKind::BiGathering);
        assert!(e.step(&[0.0; 4]).is_err(), "step before reset");
        e.reset(0).unwrap();
        assert!(e.step(&[0.0; 6]).is_err(), "wrong arity");
        assert!(e.step(&[f64::NAN, 0.0, 0.0, 0.0]).is_err(), "NaN action");
    }

    #[test]
    fn reward_matches_reward_op_on_post_step_state() {
        let mut e = env(TaskKind::BiGathering);
        e.reset(3).unwrap();
        let out = e.step(&[0.3, 0.01, -0.2, 0.0]).unwrap();
        let again = e.reward_now();
        assert_eq!(out.reward, again.total);
        let sum: f64 = out.info.terms.iter().map(|(_, v)| v).sum();
        assert!((sum - out.reward).abs() < 1e-9);
    }

    #[test]
    fn perturbation_event_fires_at_scheduled_step() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.perturb.count = 2;
        cfg.perturb.prob_phase1 = 1.0;
        cfg.perturb.prob_phase2 = 1.0;
        cfg.perturb.mag_scale_phase1 = 1.0;
        cfg.gather.auto_advance_mm = 0.0; // keep the episode from ending early
        let mut e = TaskEnv::new(cfg.clone()).unwrap();
        e.reset(9).unwrap();
        let schedule = schedule_perturbations(&cfg, 9, cfg.episode_limit as usize, 1, 2);
        assert_eq!(schedule.len(), 2);
        let mut seen = 0;
        for step in 0..cfg.episode_limit as usize {
            if e.is_done() {
                break;
            }
            let out = e.step(&[0.0; 4]).unwrap();
            for ev in &out.info.events {
                if let Event::Perturbation { force, .. } = ev {
                    assert!(schedule.iter().any(|p| {
                        p.apply_step == step && (p.force - force).abs() < 1e-12
                    }));
                    seen += 1;
                }
            }
        }
        assert_eq!(seen, schedule.len(), "every scheduled event fired");
    }

    #[test]
    fn perturbation_magnitudes_within_range() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.perturb.count = 3;
        for seed in 0..3000 {
            for phase in [1, 2] {
                for p in schedule_perturbations(&cfg, seed, 300, phase, 2) {
                    assert!((1.0..=5.0).contains(&p.force), "force {}", p.force);
                    assert!(p.apply_step < 300);
                }
            }
        }
    }

    #[test]
    fn perturbation_schedules_are_prefix_stable_in_count() {
        let mut lo = RunConfig::for_task(TaskKind::BiGathering);
        lo.perturb.count = 2;
        lo.perturb.prob_phase1 = 1.0;
        let mut hi = lo.clone();
        hi.perturb.count = 5;
        for seed in 0..50 {
            let a = schedule_perturbations(&lo, seed, 300, 1, 2);
            let b = schedule_perturbations(&hi, seed, 300, 1, 2);
            assert_eq!(a[..], b[..2], "seed {seed}");
        }
    }

    #[test]
    fn gathering_succeeds_when_distance_below_epsilon() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.gum_enabled = false;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(5).unwrap();
        // teleport objects close together to trigger the predicate
        e.world.objects[0].pose = Pose2::new(-44.9, 0.0, 0.0);
        e.world.objects[1].pose = Pose2::new(45.0, 0.0, 0.0);
        // move effectors clear so physics does not interfere
        e.world.effectors[0].pose = Pose2::new(-300.0, -200.0, 0.0);
        e.world.effectors[1].pose = Pose2::new(300.0, 200.0, std::f64::consts::PI);
        let out = e.step(&[0.0; 4]).unwrap();
        assert!(out.done);
        assert_eq!(out.info.status, TerminalStatus::Success);
        assert!(e.step(&[0.0; 4]).is_err(), "step after done");
    }

    #[test]
    fn timeout_reported_when_nothing_happens() {
        let mut cfg = RunConfig::for_task(TaskKind::BiPushing);
        cfg.episode_limit = 5;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(1).unwrap();
        let mut last = None;
        for _ in 0..5 {
            last = Some(e.step(&[0.0; 4]).unwrap());
        }
        let out = last.unwrap();
        assert!(out.done);
        assert_eq!(out.info.status, TerminalStatus::Timeout);
    }

    #[test]
    fn gum_rebuilds_every_h_steps() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.gum.h = 4;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(2).unwrap();
        let mut updates = vec![];
        for step in 0..13 {
            if e.is_done() {
                break;
            }
            let out = e.step(&[0.0; 4]).unwrap();
            if out.info.events.iter().any(|ev| matches!(ev, Event::GoalUpdate)) {
                updates.push(step);
            }
        }
        assert_eq!(updates, vec![3, 7, 11], "updates every h = 4 steps");
    }

    #[test]
    fn gum_anchors_follow_phase() {
        let mut e = env(TaskKind::BiGathering);
        e.reset(4).unwrap();
        assert_eq!(e.gum_state().unwrap().anchor_mode, AnchorMode::ObjectCentres);
        let a = e.gum_state().unwrap().line_a;
        assert_eq!(a, e.world().objects[0].pose.position());
        e.set_phase(2);
        e.reset(4).unwrap();
        assert_eq!(e.gum_state().unwrap().anchor_mode, AnchorMode::Tcps);
        let a = e.gum_state().unwrap().line_a;
        assert_eq!(a, e.world().effectors[0].pose.position());
    }

    #[test]
    fn record_rows_accumulate_with_events_and_status() {
        let mut e = env(TaskKind::BiGathering);
        e.reset(6).unwrap();
        for _ in 0..4 {
            e.step(&[0.5, 0.0, 0.5, 0.0]).unwrap();
        }
        let r = e.record();
        assert_eq!(r.steps.len(), 4);
        assert_eq!(r.task, "bi_gathering");
        for row in &r.steps {
            let sum: f64 = row.terms.iter().map(|(_, v)| v).sum();
            assert!((sum - row.reward).abs() < 1e-9);
        }
    }

    #[test]
    fn auto_advance_closes_the_gap_in_gathering() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.gum_enabled = false;
        cfg.perturb.count = 0;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(11).unwrap();
        let d0 = point_dist(
            e.world().objects[0].pose.position(),
            e.world().objects[1].pose.position(),
        );
        for _ in 0..60 {
            if e.is_done() {
                break;
            }
            e.step(&[0.0; 4]).unwrap();
        }
        let d1 = point_dist(
            e.world().objects[0].pose.position(),
            e.world().objects[1].pose.position(),
        );
        assert!(d1 < d0 - 50.0, "tips should push the objects together: {d0} -> {d1}");
    }

    #[test]
    fn reorient_hold_counts_to_success() {
        let mut cfg = RunConfig::for_task(TaskKind::BiReorienting);
        cfg.reorient.hold_steps = 10;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(13).unwrap();
        // cheat the object onto the goal angle and keep everything still
        let goal = e.goal().waypoints.last().unwrap().theta;
        e.world.objects[0].pose = Pose2::new(0.0, 0.0, goal);
        e.prev_object_pose = e.world.objects[0].pose;
        e.world.effectors[0].pose = Pose2::new(-300.0, -200.0, 0.0);
        e.world.effectors[1].pose = Pose2::new(300.0, 200.0, 0.0);
        let mut done_at = None;
        for i in 0..12 {
            let out = e.step(&[0.0; 6]).unwrap();
            if out.done {
                done_at = Some((i, out.info.status));
                break;
            }
        }
        let (i, status) = done_at.expect("should succeed after the hold window");
        assert_eq!(status, TerminalStatus::Success);
        assert_eq!(i, 9, "10 held steps counted from 0");
    }

    #[test]
    fn workspace_violation_terminates() {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.workspace.y_min_mm = -130.0;
        cfg.workspace.clamp_reach = false;
        let mut e = TaskEnv::new(cfg).unwrap();
        e.reset(1).unwrap();
        // steer arm 0 downward until it leaves the reachable rectangle
        let mut status = None;
        for _ in 0..80 {
            let out = e.step(&[-2.0, 0.0, 0.0, 0.0]).unwrap();
            if out.done {
                status = Some(out.info.status);
                break;
            }
        }
        assert_eq!(status, Some(TerminalStatus::WorkspaceViolation { arm: 0 }));
    }

    #[test]
    fn gum_zero_weights_match_plain_gather_trajectories() {
        let mut with = RunConfig::for_task(TaskKind::BiGathering);
        with.reward.w4 = 0.0;
        with.reward.w5 = 0.0;
        let mut without = with.clone();
        without.gum_enabled = false;
        let mut a = TaskEnv::new(with).unwrap();
        let mut b = TaskEnv::new(without).unwrap();
        a.reset(21).unwrap();
        b.reset(21).unwrap();
        let script = |i: usize| {
            [
                0.3 * ((i % 5) as f64 - 2.0),
                0.01,
                -0.2 * ((i % 3) as f64 - 1.0),
                -0.01,
            ]
        };
        for i in 0..100 {
            if a.is_done() || b.is_done() {
                break;
            }
            let oa = a.step(&script(i)).unwrap();
            let ob = b.step(&script(i)).unwrap();
            assert_eq!(oa.reward, ob.reward, "step {i}");
            assert_eq!(a.world().objects, b.world().objects);
        }
    }
}
