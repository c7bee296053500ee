//! Run configuration and its flat key-value file format.
//!
//! The file format is line-oriented `section.key = value` pairs with `#`
//! comments. Angles are given in degrees and forces in newtons at this
//! boundary; accessors convert to radians where needed. Unknown keys are a
//! hard error. The full key table lives in `docs/config.md`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    BiPushing,
    BiReorienting,
    BiGathering,
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::BiPushing => "bi_pushing",
            TaskKind::BiReorienting => "bi_reorienting",
            TaskKind::BiGathering => "bi_gathering",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "bi_pushing" => Ok(TaskKind::BiPushing),
            "bi_reorienting" => Ok(TaskKind::BiReorienting),
            "bi_gathering" => Ok(TaskKind::BiGathering),
            other => Err(Error::config(format!(
                "task.name must be one of bi_pushing|bi_reorienting|bi_gathering, got `{other}`"
            ))),
        }
    }

    /// Flat action vector length: per-arm controlled degrees of freedom.
    pub fn action_dim(&self) -> usize {
        match self {
            TaskKind::BiPushing => 4,    // x, Rz per arm
            TaskKind::BiReorienting => 6, // x, y, Rz per arm
            TaskKind::BiGathering => 4,  // y, Rz per arm
        }
    }
}

/// Reward weights, validated nonnegative at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
    /// Over-squeeze penalty coefficient (depth beyond `d_safe`).
    pub w_squeeze: f64,
    /// Contact depth beyond which the squeeze penalty applies, mm.
    pub d_safe_mm: f64,
}

impl RewardWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w1, self.w2, self.w3, self.w4, self.w5, self.w_squeeze];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::contract(format!("reward weights must be >= 0, got {all:?}")));
        }
        if !self.d_safe_mm.is_finite() || self.d_safe_mm < 0.0 {
            return Err(Error::contract("reward.d_safe_mm must be >= 0".to_string()));
        }
        Ok(())
    }

    /// Scale every weight by `c` (used by invariance tests).
    pub fn scaled(&self, c: f64) -> RewardWeights {
        RewardWeights {
            w1: self.w1 * c,
            w2: self.w2 * c,
            w3: self.w3 * c,
            w4: self.w4 * c,
            w5: self.w5 * c,
            w_squeeze: self.w_squeeze * c,
            d_safe_mm: self.d_safe_mm,
        }
    }
}

impl Default for RewardWeights {
    fn default() -> Self {
        // The source experiments give no weight values; 1.0 each is the
        // documented neutral default, with the squeeze penalty at 2*w4.
        RewardWeights { w1: 1.0, w2: 1.0, w3: 1.0, w4: 1.0, w5: 1.0, w_squeeze: 2.0, d_safe_mm: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GumConfig {
    /// Number of subgoal points along the target line (n >= 2).
    pub n: u32,
    /// Rebuild the target line every h steps (h >= 1).
    pub h: u32,
}

impl Default for GumConfig {
    fn default() -> Self {
        GumConfig { n: 10, h: 75 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurriculumConfig {
    pub enabled: bool,
    /// Starting phase (1 = subgoal line anchored on object centres, 2 = on TCPs).
    pub start_phase: u8,
    /// Fraction of training iterations after which phase 2 begins.
    pub switch_at_fraction: f64,
}

impl Default for CurriculumConfig {
    fn default() -> Self {
        CurriculumConfig { enabled: false, start_phase: 1, switch_at_fraction: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbConfig {
    /// Maximum number of force events scheduled per episode.
    pub count: u32,
    pub force_min_newton: f64,
    pub force_max_newton: f64,
    /// Per-event firing probability in curriculum phase 1 / phase 2.
    pub prob_phase1: f64,
    pub prob_phase2: f64,
    /// Fraction of the force range used in each phase (nondecreasing).
    pub mag_scale_phase1: f64,
    pub mag_scale_phase2: f64,
    /// Impulse-to-displacement gain, mm * kg / N.
    pub k_p: f64,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            count: 0,
            force_min_newton: 1.0,
            force_max_newton: 5.0,
            prob_phase1: 0.5,
            prob_phase2: 1.0,
            mag_scale_phase1: 0.6,
            mag_scale_phase2: 1.0,
            k_p: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionConfig {
    /// Per-step translation bound per controlled axis, mm.
    pub max_step_mm: f64,
    /// Per-step rotation bound, degrees.
    pub max_step_deg: f64,
}

impl Default for ActionConfig {
    fn default() -> Self {
        ActionConfig { max_step_mm: 2.0, max_step_deg: 3.0 }
    }
}

impl ActionConfig {
    pub fn max_step_rad(&self) -> f64 {
        self.max_step_deg.to_radians()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    /// Rotation coupling: d(theta) = kappa * (lever x push), rad per mm^2.
    pub kappa_per_mm2: f64,
    /// Sensing and penetration clamp, mm.
    pub depth_clamp_mm: f64,
    /// Sliding friction coefficient used by the perturbation map.
    pub friction: f64,
    /// Indentation a tip sustains before motion transfers to the object, mm.
    pub rest_depth_mm: f64,
    /// Residual object-object overlap tolerance, mm.
    pub overlap_tol_mm: f64,
    /// Upper bound on object displacement per effector displacement.
    pub push_gain_max: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig {
            kappa_per_mm2: 0.001,
            depth_clamp_mm: 8.0,
            friction: 0.5,
            rest_depth_mm: 0.5,
            overlap_tol_mm: 0.1,
            push_gain_max: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceConfig {
    pub x_min_mm: f64,
    pub x_max_mm: f64,
    pub y_min_mm: f64,
    pub y_max_mm: f64,
    /// Clamp commanded TCP motion at the rectangle boundary (the arm stops
    /// at its reach limit). Disable to let poses exit and trip the
    /// workspace-violation termination instead.
    pub clamp_reach: bool,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        WorkspaceConfig {
            x_min_mm: -450.0,
            x_max_mm: 450.0,
            y_min_mm: -350.0,
            y_max_mm: 350.0,
            clamp_reach: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectorConfig {
    /// Radius of the circular tip footprint, mm.
    pub tip_radius_mm: f64,
}

impl Default for EffectorConfig {
    fn default() -> Self {
        EffectorConfig { tip_radius_mm: 15.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushConfig {
    pub object_length_mm: f64,
    pub object_width_mm: f64,
    pub object_mass_g: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub a_min_mm: f64,
    pub a_max_mm: f64,
    pub x_min_mm: f64,
    pub x_max_mm: f64,
    pub waypoint_spacing_mm: f64,
    pub waypoint_advance_mm: f64,
    pub success_tol_mm: f64,
    /// Offset added to each arm's commanded forward step, mm. Zero keeps the
    /// forward axis fully policy-driven; a small bias makes the zero action
    /// creep forward, which eases desk-scale exploration.
    pub advance_bias_mm: f64,
    /// Gap between tip surface and object face at reset, mm.
    pub home_gap_mm: f64,
    /// Lateral offset of each tip from the object centreline at reset, mm.
    pub home_lateral_mm: f64,
}

impl Default for PushConfig {
    fn default() -> Self {
        PushConfig {
            object_length_mm: 400.0,
            object_width_mm: 60.0,
            object_mass_g: 500.0,
            k_min: -0.28,
            k_max: 0.28,
            a_min_mm: -20.0,
            a_max_mm: 20.0,
            x_min_mm: -280.0,
            x_max_mm: 50.0,
            waypoint_spacing_mm: 30.0,
            waypoint_advance_mm: 20.0,
            success_tol_mm: 20.0,
            advance_bias_mm: 0.0,
            home_gap_mm: 3.0,
            home_lateral_mm: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReorientConfig {
    pub length_min_mm: f64,
    pub length_max_mm: f64,
    pub width_mm: f64,
    pub object_mass_g: f64,
    pub goal_min_deg: f64,
    pub goal_max_deg: f64,
    /// Probability mass placed on the top [70, 90] degree band.
    pub large_angle_bias: f64,
    pub subgoal_count: u32,
    pub hold_steps: u32,
    pub angle_tol_deg: f64,
    pub hold_pos_tol_mm: f64,
    pub hold_angle_tol_deg: f64,
    /// Inward offset of the desired contact points from the faces, mm.
    pub target_depth_mm: f64,
    /// Tip indentation at reset, mm.
    pub home_depth_mm: f64,
}

impl Default for ReorientConfig {
    fn default() -> Self {
        ReorientConfig {
            length_min_mm: 50.0,
            length_max_mm: 200.0,
            width_mm: 100.0,
            object_mass_g: 200.0,
            goal_min_deg: 30.0,
            goal_max_deg: 90.0,
            large_angle_bias: 0.5,
            subgoal_count: 10,
            hold_steps: 10,
            angle_tol_deg: 3.0,
            hold_pos_tol_mm: 1.0,
            hold_angle_tol_deg: 1.0,
            target_depth_mm: 2.0,
            home_depth_mm: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatherConfig {
    pub epsilon_mm: f64,
    pub object_size_mm: f64,
    pub object_mass_g: f64,
    pub x_abs_min_mm: f64,
    pub x_abs_max_mm: f64,
    pub y_abs_min_mm: f64,
    pub y_abs_max_mm: f64,
    /// Automatic forward advance of each tip per step, mm.
    pub auto_advance_mm: f64,
    pub target_depth_mm: f64,
    pub home_depth_mm: f64,
}

impl Default for GatherConfig {
    fn default() -> Self {
        GatherConfig {
            epsilon_mm: 90.0,
            object_size_mm: 60.0,
            object_mass_g: 200.0,
            x_abs_min_mm: 50.0,
            x_abs_max_mm: 200.0,
            y_abs_min_mm: 0.0,
            y_abs_max_mm: 100.0,
            auto_advance_mm: 1.5,
            target_depth_mm: 2.0,
            home_depth_mm: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TactileConfig {
    /// Image side length in pixels (square grid).
    pub grid: u32,
    pub max_depth_mm: f64,
    pub max_tilt_deg: f64,
    /// Additive Gaussian pixel noise std (0 disables).
    pub noise_std: f64,
    /// Per-episode multiplicative gain jitter half-range (0 disables).
    pub jitter_gain: f64,
    /// Per-episode additive offset jitter half-range (0 disables).
    pub jitter_offset: f64,
}

impl Default for TactileConfig {
    fn default() -> Self {
        TactileConfig {
            grid: 32,
            max_depth_mm: 8.0,
            max_tilt_deg: 30.0,
            noise_std: 0.0,
            jitter_gain: 0.0,
            jitter_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpoConfig {
    pub gamma: f64,
    pub lambda: f64,
    pub clip: f64,
    pub epochs: u32,
    pub minibatch: u32,
    pub learning_rate: f64,
    pub entropy_coeff: f64,
    pub value_coeff: f64,
    pub envs: u32,
    pub horizon: u32,
    pub iterations: u32,
    pub hidden1: u32,
    pub hidden2: u32,
    pub log_std_init: f64,
    pub reward_scale: f64,
    pub max_grad_norm: f64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        PpoConfig {
            gamma: 0.99,
            lambda: 0.95,
            clip: 0.2,
            epochs: 4,
            minibatch: 256,
            learning_rate: 3e-4,
            entropy_coeff: 1e-3,
            value_coeff: 0.5,
            envs: 8,
            horizon: 128,
            iterations: 200,
            hidden1: 256,
            hidden2: 256,
            log_std_init: -0.5,
            reward_scale: 0.01,
            max_grad_norm: 0.5,
        }
    }
}

/// Complete, validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: TaskKind,
    pub episode_limit: u32,
    pub gum_enabled: bool,
    pub reward: RewardWeights,
    pub gum: GumConfig,
    pub curriculum: CurriculumConfig,
    pub perturb: PerturbConfig,
    pub action: ActionConfig,
    pub physics: PhysicsConfig,
    pub workspace: WorkspaceConfig,
    pub effector: EffectorConfig,
    pub push: PushConfig,
    pub reorient: ReorientConfig,
    pub gather: GatherConfig,
    pub tactile: TactileConfig,
    pub ppo: PpoConfig,
}

impl RunConfig {
    /// Task-specific defaults.
    pub fn for_task(task: TaskKind) -> Self {
        let mut c = RunConfig {
            task,
            episode_limit: match task {
                TaskKind::BiPushing => 400,
                TaskKind::BiReorienting => 500,
                TaskKind::BiGathering => 300,
            },
            gum_enabled: task == TaskKind::BiGathering,
            reward: RewardWeights::default(),
            gum: GumConfig::default(),
            curriculum: CurriculumConfig::default(),
            perturb: PerturbConfig::default(),
            action: ActionConfig::default(),
            physics: PhysicsConfig::default(),
            workspace: WorkspaceConfig::default(),
            effector: EffectorConfig::default(),
            push: PushConfig::default(),
            reorient: ReorientConfig::default(),
            gather: GatherConfig::default(),
            tactile: TactileConfig::default(),
            ppo: PpoConfig::default(),
        };
        if task == TaskKind::BiGathering {
            c.curriculum.enabled = true;
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        self.reward.validate()?;
        if self.gum.n < 2 {
            return Err(Error::config("gum.n must be >= 2"));
        }
        if self.gum.h < 1 {
            return Err(Error::config("gum.h must be >= 1"));
        }
        if self.episode_limit < 1 {
            return Err(Error::config("task.episode_limit must be >= 1"));
        }
        if self.action.max_step_mm <= 0.0 || self.action.max_step_deg <= 0.0 {
            return Err(Error::config("action bounds must be positive"));
        }
        if !(1..=2).contains(&self.curriculum.start_phase) {
            return Err(Error::config("curriculum.start_phase must be 1 or 2"));
        }
        if self.perturb.force_min_newton > self.perturb.force_max_newton {
            return Err(Error::config("perturb.force_min_newton > force_max_newton"));
        }
        if self.perturb.mag_scale_phase1 > self.perturb.mag_scale_phase2 {
            return Err(Error::config(
                "perturbation magnitude scale must be nondecreasing across phases",
            ));
        }
        if self.perturb.prob_phase1 > self.perturb.prob_phase2 {
            return Err(Error::config(
                "perturbation probability must be nondecreasing across phases",
            ));
        }
        if self.tactile.grid == 0 {
            return Err(Error::config("tactile.grid must be >= 1"));
        }
        if self.push.object_length_mm <= 0.0
            || self.push.object_width_mm <= 0.0
            || self.reorient.width_mm <= 0.0
            || self.gather.object_size_mm <= 0.0
        {
            return Err(Error::config("object dimensions must be positive"));
        }
        if self.push.object_mass_g <= 0.0
            || self.reorient.object_mass_g <= 0.0
            || self.gather.object_mass_g <= 0.0
        {
            return Err(Error::config("object masses must be positive"));
        }
        if !(0.0..=1.0).contains(&self.ppo.gamma) || !(0.0..=1.0).contains(&self.ppo.lambda) {
            return Err(Error::config("ppo.gamma and ppo.lambda must lie in [0, 1]"));
        }
        if self.ppo.envs == 0 || self.ppo.horizon == 0 || self.ppo.minibatch == 0 {
            return Err(Error::config("ppo.envs, ppo.horizon, ppo.minibatch must be >= 1"));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(format!("cannot read config `{}`: {e}", path.display()))
        })?;
        Self::from_kv_text(&text)
    }

    /// Parse the flat key-value format. Unknown keys are a hard error.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut seen = BTreeMap::new();
        for (k, v) in &pairs {
            if seen.insert(k.clone(), v.clone()).is_some() {
                return Err(Error::config(format!("duplicate key `{k}`")));
            }
        }
        let task_name = seen
            .get("task.name")
            .ok_or_else(|| Error::config("missing required key `task.name`"))?;
        let task = TaskKind::from_name(task_name)?;
        let mut cfg = RunConfig::for_task(task);
        for (k, v) in &pairs {
            cfg.set_key(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialize every key; `from_kv_text(to_kv_text(c)) == c`.
    pub fn to_kv_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.kv_pairs() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// FNV-1a hash of the canonical serialized form, as fixed-width hex.
    pub fn content_hash(&self) -> String {
        let text = self.to_kv_text();
        let mut h: u64 = 0xCBF2_9CE4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        format!("{h:016x}")
    }

    fn kv_pairs(&self) -> Vec<(&'static str, String)> {
        fn f(v: f64) -> String {
            format!("{v}")
        }
        let c = self;
        vec![
            ("task.name", c.task.name().to_string()),
            ("task.episode_limit", c.episode_limit.to_string()),
            ("task.gum_enabled", c.gum_enabled.to_string()),
            ("reward.w1", f(c.reward.w1)),
            ("reward.w2", f(c.reward.w2)),
            ("reward.w3", f(c.reward.w3)),
            ("reward.w4", f(c.reward.w4)),
            ("reward.w5", f(c.reward.w5)),
            ("reward.w_squeeze", f(c.reward.w_squeeze)),
            ("reward.d_safe_mm", f(c.reward.d_safe_mm)),
            ("gum.n", c.gum.n.to_string()),
            ("gum.h", c.gum.h.to_string()),
            ("curriculum.enabled", c.curriculum.enabled.to_string()),
            ("curriculum.start_phase", c.curriculum.start_phase.to_string()),
            ("curriculum.switch_at_fraction", f(c.curriculum.switch_at_fraction)),
            ("perturb.count", c.perturb.count.to_string()),
            ("perturb.force_min_newton", f(c.perturb.force_min_newton)),
            ("perturb.force_max_newton", f(c.perturb.force_max_newton)),
            ("perturb.prob_phase1", f(c.perturb.prob_phase1)),
            ("perturb.prob_phase2", f(c.perturb.prob_phase2)),
            ("perturb.mag_scale_phase1", f(c.perturb.mag_scale_phase1)),
            ("perturb.mag_scale_phase2", f(c.perturb.mag_scale_phase2)),
            ("perturb.k_p", f(c.perturb.k_p)),
            ("action.max_step_mm", f(c.action.max_step_mm)),
            ("action.max_step_deg", f(c.action.max_step_deg)),
            ("physics.kappa_per_mm2", f(c.physics.kappa_per_mm2)),
            ("physics.depth_clamp_mm", f(c.physics.depth_clamp_mm)),
            ("physics.friction", f(c.physics.friction)),
            ("physics.rest_depth_mm", f(c.physics.rest_depth_mm)),
            ("physics.overlap_tol_mm", f(c.physics.overlap_tol_mm)),
            ("physics.push_gain_max", f(c.physics.push_gain_max)),
            ("workspace.x_min_mm", f(c.workspace.x_min_mm)),
            ("workspace.x_max_mm", f(c.workspace.x_max_mm)),
            ("workspace.y_min_mm", f(c.workspace.y_min_mm)),
            ("workspace.y_max_mm", f(c.workspace.y_max_mm)),
            ("workspace.clamp_reach", c.workspace.clamp_reach.to_string()),
            ("effector.tip_radius_mm", f(c.effector.tip_radius_mm)),
            ("push.object_length_mm", f(c.push.object_length_mm)),
            ("push.object_width_mm", f(c.push.object_width_mm)),
            ("push.object_mass_g", f(c.push.object_mass_g)),
            ("push.k_min", f(c.push.k_min)),
            ("push.k_max", f(c.push.k_max)),
            ("push.a_min_mm", f(c.push.a_min_mm)),
            ("push.a_max_mm", f(c.push.a_max_mm)),
            ("push.x_min_mm", f(c.push.x_min_mm)),
            ("push.x_max_mm", f(c.push.x_max_mm)),
            ("push.waypoint_spacing_mm", f(c.push.waypoint_spacing_mm)),
            ("push.waypoint_advance_mm", f(c.push.waypoint_advance_mm)),
            ("push.success_tol_mm", f(c.push.success_tol_mm)),
            ("push.advance_bias_mm", f(c.push.advance_bias_mm)),
            ("push.home_gap_mm", f(c.push.home_gap_mm)),
            ("push.home_lateral_mm", f(c.push.home_lateral_mm)),
            ("reorient.length_min_mm", f(c.reorient.length_min_mm)),
            ("reorient.length_max_mm", f(c.reorient.length_max_mm)),
            ("reorient.width_mm", f(c.reorient.width_mm)),
            ("reorient.object_mass_g", f(c.reorient.object_mass_g)),
            ("reorient.goal_min_deg", f(c.reorient.goal_min_deg)),
            ("reorient.goal_max_deg", f(c.reorient.goal_max_deg)),
            ("reorient.large_angle_bias", f(c.reorient.large_angle_bias)),
            ("reorient.subgoal_count", c.reorient.subgoal_count.to_string()),
            ("reorient.hold_steps", c.reorient.hold_steps.to_string()),
            ("reorient.angle_tol_deg", f(c.reorient.angle_tol_deg)),
            ("reorient.hold_pos_tol_mm", f(c.reorient.hold_pos_tol_mm)),
            ("reorient.hold_angle_tol_deg", f(c.reorient.hold_angle_tol_deg)),
            ("reorient.target_depth_mm", f(c.reorient.target_depth_mm)),
            ("reorient.home_depth_mm", f(c.reorient.home_depth_mm)),
            ("gather.epsilon_mm", f(c.gather.epsilon_mm)),
            ("gather.object_size_mm", f(c.gather.object_size_mm)),
            ("gather.object_mass_g", f(c.gather.object_mass_g)),
            ("gather.x_abs_min_mm", f(c.gather.x_abs_min_mm)),
            ("gather.x_abs_max_mm", f(c.gather.x_abs_max_mm)),
            ("gather.y_abs_min_mm", f(c.gather.y_abs_min_mm)),
            ("gather.y_abs_max_mm", f(c.gather.y_abs_max_mm)),
            ("gather.auto_advance_mm", f(c.gather.auto_advance_mm)),
            ("gather.target_depth_mm", f(c.gather.target_depth_mm)),
            ("gather.home_depth_mm", f(c.gather.home_depth_mm)),
            ("tactile.grid", c.tactile.grid.to_string()),
            ("tactile.max_depth_mm", f(c.tactile.max_depth_mm)),
            ("tactile.max_tilt_deg", f(c.tactile.max_tilt_deg)),
            ("tactile.noise_std", f(c.tactile.noise_std)),
            ("tactile.jitter_gain", f(c.tactile.jitter_gain)),
            ("tactile.jitter_offset", f(c.tactile.jitter_offset)),
            ("ppo.gamma", f(c.ppo.gamma)),
            ("ppo.lambda", f(c.ppo.lambda)),
            ("ppo.clip", f(c.ppo.clip)),
            ("ppo.epochs", c.ppo.epochs.to_string()),
            ("ppo.minibatch", c.ppo.minibatch.to_string()),
            ("ppo.learning_rate", f(c.ppo.learning_rate)),
            ("ppo.entropy_coeff", f(c.ppo.entropy_coeff)),
            ("ppo.value_coeff", f(c.ppo.value_coeff)),
            ("ppo.envs", c.ppo.envs.to_string()),
            ("ppo.horizon", c.ppo.horizon.to_string()),
            ("ppo.iterations", c.ppo.iterations.to_string()),
            ("ppo.hidden1", c.ppo.hidden1.to_string()),
            ("ppo.hidden2", c.ppo.hidden2.to_string()),
            ("ppo.log_std_init", f(c.ppo.log_std_init)),
            ("ppo.reward_scale", f(c.ppo.reward_scale)),
            ("ppo.max_grad_norm", f(c.ppo.max_grad_norm)),
        ]
    }

    fn set_key(&mut self, key: &str, value: &str) -> Result<()> {
        fn pf(key: &str, v: &str) -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::config(format!("key `{key}`: expected a number, got `{v}`")))
        }
        fn pu(key: &str, v: &str) -> Result<u32> {
            v.parse::<u32>()
                .map_err(|_| Error::config(format!("key `{key}`: expected an integer, got `{v}`")))
        }
        fn pb(key: &str, v: &str) -> Result<bool> {
            v.parse::<bool>()
                .map_err(|_| Error::config(format!("key `{key}`: expected true|false, got `{v}`")))
        }
        match key {
            "task.name" => self.task = TaskKind::from_name(value)?,
            "task.episode_limit" => self.episode_limit = pu(key, value)?,
            "task.gum_enabled" => self.gum_enabled = pb(key, value)?,
            "reward.w1" => self.reward.w1 = pf(key, value)?,
            "reward.w2" => self.reward.w2 = pf(key, value)?,
            "reward.w3" => self.reward.w3 = pf(key, value)?,
            "reward.w4" => self.reward.w4 = pf(key, value)?,
            "reward.w5" => self.reward.w5 = pf(key, value)?,
            "reward.w_squeeze" => self.reward.w_squeeze = pf(key, value)?,
            "reward.d_safe_mm" => self.reward.d_safe_mm = pf(key, value)?,
            "gum.n" => self.gum.n = pu(key, value)?,
            "gum.h" => self.gum.h = pu(key, value)?,
            "curriculum.enabled" => self.curriculum.enabled = pb(key, value)?,
            "curriculum.start_phase" => {
                self.curriculum.start_phase = pu(key, value)? as u8;
            }
            "curriculum.switch_at_fraction" => {
                self.curriculum.switch_at_fraction = pf(key, value)?;
            }
            "perturb.count" => self.perturb.count = pu(key, value)?,
            "perturb.force_min_newton" => self.perturb.force_min_newton = pf(key, value)?,
            "perturb.force_max_newton" => self.perturb.force_max_newton = pf(key, value)?,
            "perturb.prob_phase1" => self.perturb.prob_phase1 = pf(key, value)?,
            "perturb.prob_phase2" => self.perturb.prob_phase2 = pf(key, value)?,
            "perturb.mag_scale_phase1" => self.perturb.mag_scale_phase1 = pf(key, value)?,
            "perturb.mag_scale_phase2" => self.perturb.mag_scale_phase2 = pf(key, value)?,
            "perturb.k_p" => self.perturb.k_p = pf(key, value)?,
            "action.max_step_mm" => self.action.max_step_mm = pf(key, value)?,
            "action.max_step_deg" => self.action.max_step_deg = pf(key, value)?,
            "physics.kappa_per_mm2" => self.physics.kappa_per_mm2 = pf(key, value)?,
            "physics.depth_clamp_mm" => self.physics.depth_clamp_mm = pf(key, value)?,
            "physics.friction" => self.physics.friction = pf(key, value)?,
            "physics.rest_depth_mm" => self.physics.rest_depth_mm = pf(key, value)?,
            "physics.overlap_tol_mm" => self.physics.overlap_tol_mm = pf(key, value)?,
            "physics.push_gain_max" => self.physics.push_gain_max = pf(key, value)?,
            "workspace.x_min_mm" => self.workspace.x_min_mm = pf(key, value)?,
            "workspace.x_max_mm" => self.workspace.x_max_mm = pf(key, value)?,
            "workspace.y_min_mm" => self.workspace.y_min_mm = pf(key, value)?,
            "workspace.y_max_mm" => self.workspace.y_max_mm = pf(key, value)?,
            "workspace.clamp_reach" => self.workspace.clamp_reach = pb(key, value)?,
            "effector.tip_radius_mm" => self.effector.tip_radius_mm = pf(key, value)?,
            "push.object_length_mm" => self.push.object_length_mm = pf(key, value)?,
            "push.object_width_mm" => self.push.object_width_mm = pf(key, value)?,
            "push.object_mass_g" => self.push.object_mass_g = pf(key, value)?,
            "push.k_min" => self.push.k_min = pf(key, value)?,
            "push.k_max" => self.push.k_max = pf(key, value)?,
            "push.a_min_mm" => self.push.a_min_mm = pf(key, value)?,
            "push.a_max_mm" => self.push.a_max_mm = pf(key, value)?,
            "push.x_min_mm" => self.push.x_min_mm = pf(key, value)?,
            "push.x_max_mm" => self.push.x_max_mm = pf(key, value)?,
            "push.waypoint_spacing_mm" => self.push.waypoint_spacing_mm = pf(key, value)?,
            "push.waypoint_advance_mm" => self.push.waypoint_advance_mm = pf(key, value)?,
            "push.success_tol_mm" => self.push.success_tol_mm = pf(key, value)?,
            "push.advance_bias_mm" => self.push.advance_bias_mm = pf(key, value)?,
            "push.home_gap_mm" => self.push.home_gap_mm = pf(key, value)?,
            "push.home_lateral_mm" => self.push.home_lateral_mm = pf(key, value)?,
            "reorient.length_min_mm" => self.reorient.length_min_mm = pf(key, value)?,
            "reorient.length_max_mm" => self.reorient.length_max_mm = pf(key, value)?,
            "reorient.width_mm" => self.reorient.width_mm = pf(key, value)?,
            "reorient.object_mass_g" => self.reorient.object_mass_g = pf(key, value)?,
            "reorient.goal_min_deg" => self.reorient.goal_min_deg = pf(key, value)?,
            "reorient.goal_max_deg" => self.reorient.goal_max_deg = pf(key, value)?,
            "reorient.large_angle_bias" => self.reorient.large_angle_bias = pf(key, value)?,
            "reorient.subgoal_count" => self.reorient.subgoal_count = pu(key, value)?,
            "reorient.hold_steps" => self.reorient.hold_steps = pu(key, value)?,
            "reorient.angle_tol_deg" => self.reorient.angle_tol_deg = pf(key, value)?,
            "reorient.hold_pos_tol_mm" => self.reorient.hold_pos_tol_mm = pf(key, value)?,
            "reorient.hold_angle_tol_deg" => self.reorient.hold_angle_tol_deg = pf(key, value)?,
            "reorient.target_depth_mm" => self.reorient.target_depth_mm = pf(key, value)?,
            "reorient.home_depth_mm" => self.reorient.home_depth_mm = pf(key, value)?,
            "gather.epsilon_mm" => self.gather.epsilon_mm = pf(key, value)?,
            "gather.object_size_mm" => self.gather.object_size_mm = pf(key, value)?,
            "gather.object_mass_g" => self.gather.object_mass_g = pf(key, value)?,
            "gather.x_abs_min_mm" => self.gather.x_abs_min_mm = pf(key, value)?,
            "gather.x_abs_max_mm" => self.gather.x_abs_max_mm = pf(key, value)?,
            "gather.y_abs_min_mm" => self.gather.y_abs_min_mm = pf(key, value)?,
            "gather.y_abs_max_mm" => self.gather.y_abs_max_mm = pf(key, value)?,
            "gather.auto_advance_mm" => self.gather.auto_advance_mm = pf(key, value)?,
            "gather.target_depth_mm" => self.gather.target_depth_mm = pf(key, value)?,
            "gather.home_depth_mm" => self.gather.home_depth_mm = pf(key, value)?,
            "tactile.grid" => self.tactile.grid = pu(key, value)?,
            "tactile.max_depth_mm" => self.tactile.max_depth_mm = pf(key, value)?,
            "tactile.max_tilt_deg" => self.tactile.max_tilt_deg = pf(key, value)?,
            "tactile.noise_std" => self.tactile.noise_std = pf(key, value)?,
            "tactile.jitter_gain" => self.tactile.jitter_gain = pf(key, value)?,
            "tactile.jitter_offset" => self.tactile.jitter_offset = pf(key, value)?,
            "ppo.gamma" => self.ppo.gamma = pf(key, value)?,
            "ppo.lambda" => self.ppo.lambda = pf(key, value)?,
            "ppo.clip" => self.ppo.clip = pf(key, value)?,
            "ppo.epochs" => self.ppo.epochs = pu(key, value)?,
            "ppo.minibatch" => self.ppo.minibatch = pu(key, value)?,
            "ppo.learning_rate" => self.ppo.learning_rate = pf(key, value)?,
            "ppo.entropy_coeff" => self.ppo.entropy_coeff = pf(key, value)?,
            "ppo.value_coeff" => self.ppo.value_coeff = pf(key, value)?,
            "ppo.envs" => self.ppo.envs = pu(key, value)?,
            "ppo.horizon" => self.ppo.horizon = pu(key, value)?,
            "ppo.iterations" => self.ppo.iterations = pu(key, value)?,
            "ppo.hidden1" => self.ppo.hidden1 = pu(key, value)?,
            "ppo.hidden2" => self.ppo.hidden2 = pu(key, value)?,
            "ppo.log_std_init" => self.ppo.log_std_init = pf(key, value)?,
            "ppo.reward_scale" => self.ppo.reward_scale = pf(key, value)?,
            "ppo.max_grad_norm" => self.ppo.max_grad_norm = pf(key, value)?,
            unknown => {
                return Err(Error::config(format!("unknown config key `{unknown}`")));
            }
        }
        Ok(())
    }
}
