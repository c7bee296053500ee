//! Shared desk-scale training configurations and a one-time cache of
//! trained runs for the learning-dependent acceptance criteria.
//!
//! Desk-scale configs keep every protocol quantity (goal families, sampling
//! ranges, subgoal defaults, perturbation forces) at its default and adjust
//! only capacity/assist knobs: small tactile grids and networks, short
//! budgets, forward-bias on the pushing arms, task-specific reward weight
//! emphasis (the source experiments state no weight values) and tightened
//! reachable rectangles.

#![allow(dead_code)]

use std::sync::OnceLock;

use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::{ppo_train, PolicyParams, TrainLog};
use bimanip::tasks::TaskEnv;

pub fn desk_push_config() -> RunConfig {
    let mut cfg = RunConfig::for_task(TaskKind::BiPushing);
    cfg.tactile.grid = 8;
    cfg.ppo.hidden1 = 64;
    cfg.ppo.hidden2 = 64;
    cfg.ppo.envs = 8;
    cfg.ppo.horizon = 256;
    cfg.ppo.iterations = 400;
    cfg.ppo.gamma = 0.995;
    cfg.ppo.learning_rate = 2e-4;
    cfg.ppo.entropy_coeff = 3e-3;
    cfg.ppo.log_std_init = -0.9;
    cfg.episode_limit = 500;
    cfg.reward.w2 = 300.0;
    cfg.reward.w3 = 30.0;
    cfg.physics.kappa_per_mm2 = 5e-4;
    cfg.push.advance_bias_mm = 1.0;
    cfg.push.waypoint_spacing_mm = 60.0;
    cfg.push.waypoint_advance_mm = 30.0;
    cfg.push.success_tol_mm = 30.0;
    cfg.workspace.x_min_mm = -360.0;
    cfg.workspace.x_max_mm = 130.0;
    cfg.workspace.y_min_mm = -240.0;
    cfg.workspace.y_max_mm = 240.0;
    cfg
}

pub fn desk_reorient_config() -> RunConfig {
    let mut cfg = RunConfig::for_task(TaskKind::BiReorienting);
    cfg.tactile.grid = 8;
    cfg.ppo.hidden1 = 64;
    cfg.ppo.hidden2 = 64;
    cfg.ppo.envs = 8;
    cfg.ppo.horizon = 256;
    cfg.ppo.iterations = 400;
    cfg.ppo.gamma = 0.995;
    cfg.ppo.learning_rate = 2e-4;
    cfg.ppo.entropy_coeff = 3e-3;
    cfg.ppo.log_std_init = -0.9;
    cfg.reward.w2 = 300.0;
    cfg.reward.w_squeeze = 50.0;
    cfg.physics.rest_depth_mm = 1.0;
    cfg.workspace.x_min_mm = -250.0;
    cfg.workspace.x_max_mm = 250.0;
    cfg.workspace.y_min_mm = -250.0;
    cfg.workspace.y_max_mm = 250.0;
    cfg
}

/// Gathering variants: subgoal mechanism on/off, perturbations on/off.
pub fn desk_gather_config(gum: bool, perturbed: bool) -> RunConfig {
    let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
    cfg.tactile.grid = 8;
    cfg.ppo.hidden1 = 64;
    cfg.ppo.hidden2 = 64;
    cfg.ppo.envs = 8;
    cfg.ppo.horizon = 128;
    cfg.ppo.iterations = 150;
    cfg.gum_enabled = gum;
    cfg.curriculum.enabled = gum;
    cfg.perturb.count = if perturbed { 2 } else { 0 };
    cfg
}

pub struct TaskRuns {
    pub cfg: RunConfig,
    pub runs: Vec<(u64, PolicyParams, TrainLog)>,
}

pub struct TrainedSet {
    pub push: TaskRuns,
    pub reorient: TaskRuns,
    pub gather_gum_perturbed: TaskRuns,
    pub gather_gum_clean: TaskRuns,
    pub gather_plain_perturbed: TaskRuns,
    pub gather_plain_clean: TaskRuns,
}

pub const SEEDS: [u64; 3] = [11, 22, 33];

fn train_all(cfg: &RunConfig) -> TaskRuns {
    let runs = SEEDS
        .iter()
        .map(|&seed| {
            let (params, log) =
                ppo_train(|_| TaskEnv::new(cfg.clone()), cfg, seed).expect("training run");
            (seed, params, log)
        })
        .collect();
    TaskRuns { cfg: cfg.clone(), runs }
}

/// All desk-scale training shared by criteria 5-7, built on first access.
pub fn trained() -> &'static TrainedSet {
    static CACHE: OnceLock<TrainedSet> = OnceLock::new();
    CACHE.get_or_init(|| TrainedSet {
        push: train_all(&desk_push_config()),
        reorient: train_all(&desk_reorient_config()),
        gather_gum_perturbed: train_all(&desk_gather_config(true, true)),
        gather_gum_clean: train_all(&desk_gather_config(true, false)),
        gather_plain_perturbed: train_all(&desk_gather_config(false, true)),
        gather_plain_clean: train_all(&desk_gather_config(false, false)),
    })
}

/// Success rate of a trained policy over `episodes` fresh episodes with the
/// given perturbation count (subgoal anchors on TCPs, the trained regime).
pub fn eval_success_rate(
    params: &PolicyParams,
    base: &RunConfig,
    perturb_count: u32,
    episodes: usize,
    seed: u64,
) -> f64 {
    use bimanip::policy::action_bounds;
    use bimanip::rng::SeededRng;
    use bimanip::tasks::TerminalStatus;

    let mut cfg = base.clone();
    cfg.perturb.count = perturb_count;
    cfg.perturb.prob_phase1 = 1.0;
    cfg.perturb.prob_phase2 = 1.0;
    let bounds = action_bounds(&cfg);
    let mut env = TaskEnv::new(cfg.clone()).expect("env");
    if cfg.curriculum.enabled {
        env.set_phase(2);
    }
    let mut seed_rng = SeededRng::new(seed, "eval-episodes");
    let mut successes = 0usize;
    for _ in 0..episodes {
        let mut obs = env.reset(seed_rng.next_u64()).expect("reset");
        while !env.is_done() {
            let action = params.mean_action(&obs, &bounds);
            obs = env.step(&action).expect("step").obs;
        }
        if env.record().status == TerminalStatus::Success {
            successes += 1;
        }
    }
    successes as f64 / episodes as f64
}
