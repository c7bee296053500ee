//! Rollout/update training loop.
//!
//! Environments run sequentially in a fixed order, so a run is fully
//! determined by `(config, seed)`. Rewards are scaled into the learner;
//! episode statistics are logged in raw units. Episode ends of any kind
//! (success, timeout, workspace violation) are treated as terminal.

use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::tasks::{StepOutcome, TaskEnv, TerminalStatus};

use super::gae::gae_advantages;
use super::{action_bounds, gaussian_logp, surrogate_loss, Adam, Batch, PolicyParams, RunningNorm};

/// Anything the trainer can roll out: the three task environments, plus
/// tiny probe environments in tests.
pub trait RolloutEnv {
    fn reset(&mut self, seed: u64) -> Result<Vec<f64>>;
    fn step(&mut self, action: &[f64]) -> Result<StepOutcome>;
    fn obs_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    /// Number of trailing observation entries subject to normalization.
    fn proprio_len(&self) -> usize;
    /// Per-dimension absolute action bounds.
    fn bounds(&self) -> Vec<f64>;
    fn episode_limit(&self) -> usize;
    fn set_phase(&mut self, _phase: u8) {}
}

impl RolloutEnv for TaskEnv {
    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        TaskEnv::reset(self, seed)
    }
    fn step(&mut self, action: &[f64]) -> Result<StepOutcome> {
        TaskEnv::step(self, action)
    }
    fn obs_dim(&self) -> usize {
        TaskEnv::obs_dim(self)
    }
    fn action_dim(&self) -> usize {
        TaskEnv::action_dim(self)
    }
    fn proprio_len(&self) -> usize {
        TaskEnv::proprio_len(self)
    }
    fn bounds(&self) -> Vec<f64> {
        action_bounds(self.cfg())
    }
    fn episode_limit(&self) -> usize {
        self.cfg().episode_limit as usize
    }
    fn set_phase(&mut self, phase: u8) {
        TaskEnv::set_phase(self, phase)
    }
}

/// Per-iteration training statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterRow {
    pub iteration: usize,
    pub env_steps: usize,
    /// Mean raw return of episodes completed this iteration.
    pub mean_return: f64,
    /// Mean completion time (steps) of episodes completed this iteration;
    /// timeouts count at the episode limit.
    pub mean_ep_len: f64,
    pub success_rate: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub approx_kl: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub rows: Vec<IterRow>,
}

impl TrainLog {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "iteration,env_steps,mean_return,mean_ep_len,success_rate,policy_loss,value_loss,entropy,approx_kl\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.iteration,
                r.env_steps,
                r.mean_return,
                r.mean_ep_len,
                r.success_rate,
                r.policy_loss,
                r.value_loss,
                r.entropy,
                r.approx_kl
            );
        }
        s
    }

    /// Mean of `mean_ep_len` over the first `frac` of iterations.
    pub fn head_mean_ep_len(&self, frac: f64) -> f64 {
        let k = ((self.rows.len() as f64 * frac).ceil() as usize).max(1).min(self.rows.len());
        self.rows[..k].iter().map(|r| r.mean_ep_len).sum::<f64>() / k as f64
    }

    /// Mean of `mean_ep_len` over the last `frac` of iterations.
    pub fn tail_mean_ep_len(&self, frac: f64) -> f64 {
        let k = ((self.rows.len() as f64 * frac).ceil() as usize).max(1).min(self.rows.len());
        let start = self.rows.len() - k;
        self.rows[start..].iter().map(|r| r.mean_ep_len).sum::<f64>() / k as f64
    }
}

struct EnvSlot<E> {
    env: E,
    obs: Vec<f64>,
    ep_return: f64,
    ep_len: usize,
    seed_stream: SeededRng,
}

/// Train a policy; deterministic given `(config, seed)` and the fixed
/// sequential env layout. Aborts with a diagnostic if the loss goes
/// non-finite.
pub fn ppo_train<F, E>(mut make_env: F, cfg: &RunConfig, seed: u64) -> Result<(PolicyParams, TrainLog)>
where
    E: RolloutEnv,
    F: FnMut(usize) -> Result<E>,
{
    cfg.validate()?;
    let n_envs = cfg.ppo.envs as usize;
    let horizon = cfg.ppo.horizon as usize;

    let mut slots = Vec::with_capacity(n_envs);
    for i in 0..n_envs {
        let mut env = make_env(i)?;
        let mut seed_stream = SeededRng::new(seed, &format!("episode-seq-{i}"));
        let obs = env.reset(seed_stream.next_u64())?;
        slots.push(EnvSlot { env, obs, ep_return: 0.0, ep_len: 0, seed_stream });
    }
    let bounds = slots[0].env.bounds();
    let episode_limit = slots[0].env.episode_limit() as f64;

    let obs_dim = slots[0].env.obs_dim();
    let act_dim = slots[0].env.action_dim();
    let tactile_len = obs_dim - slots[0].env.proprio_len();
    let mut init_rng = SeededRng::new(seed, "policy-init");
    let mut params = PolicyParams::init(obs_dim, act_dim, tactile_len, cfg, &mut init_rng);
    let mut sample_rng = SeededRng::new(seed, "policy");
    let mut shuffle_rng = SeededRng::new(seed, "ppo-shuffle");

    let mut adam = Adam::new(params.param_count(), cfg.ppo.learning_rate);
    let mut log = TrainLog::default();
    let mut env_steps = 0usize;
    let switch_iter = if cfg.curriculum.enabled {
        Some((cfg.ppo.iterations as f64 * cfg.curriculum.switch_at_fraction).floor() as usize)
    } else {
        None
    };

    // warm the proprio normalizer on a random-action burn-in so the first
    // update never sees raw millimetre-scale inputs through the tanh layers
    {
        let mut burn = SeededRng::new(seed, "norm-burn-in");
        for slot in &mut slots {
            let mut obs = slot.env.reset(burn.next_u64())?;
            for _ in 0..64 {
                params.proprio_norm.update(&obs[tactile_len..]);
                let action: Vec<f64> =
                    bounds.iter().map(|b| burn.uniform_range(-b, *b)).collect();
                let out = slot.env.step(&action)?;
                if out.done {
                    break;
                }
                obs = out.obs;
            }
            // fresh episode for the actual training stream
            slot.obs = slot.env.reset(slot.seed_stream.next_u64())?;
        }
    }

    // rewards are normalized by the running std of the discounted return so
    // the value target is O(1) regardless of the task's reward scale
    let mut ret_norm = RunningNorm::new(1);
    let mut running_returns = vec![0.0f64; n_envs];

    let mut last_mean_len = episode_limit;
    let mut last_mean_ret = 0.0;

    for iteration in 0..cfg.ppo.iterations as usize {
        if switch_iter == Some(iteration) {
            for s in &mut slots {
                s.env.set_phase(2);
            }
        }

        // rollout collection (column-major per env)
        let total = n_envs * horizon;
        let mut obs_n: Vec<Vec<f64>> = Vec::with_capacity(total);
        let mut raw_proprio: Vec<Vec<f64>> = Vec::with_capacity(total);
        let mut actions: Vec<Vec<f64>> = Vec::with_capacity(total);
        let mut logps = vec![0.0; total];
        let mut rewards = vec![0.0; total];
        let mut values = vec![0.0; total];
        let mut dones = vec![false; total];
        let mut ep_returns = Vec::new();
        let mut ep_lens = Vec::new();
        let mut ep_success = Vec::new();

        for t in 0..horizon {
            for (e, slot) in slots.iter_mut().enumerate() {
                let idx = t * n_envs + e;
                let norm = params.normalize_obs(&slot.obs);
                let mean = params.pi.forward(&norm);
                let value = params.vf.forward(&norm)[0];
                let action_norm: Vec<f64> = mean
                    .iter()
                    .zip(&params.log_std)
                    .map(|(m, ls)| m + ls.exp() * sample_rng.normal(0.0, 1.0))
                    .collect();
                let logp = gaussian_logp(&action_norm, &mean, &params.log_std);
                let action_raw: Vec<f64> = action_norm
                    .iter()
                    .zip(&bounds)
                    .map(|(a, b)| a.clamp(-1.0, 1.0) * b)
                    .collect();

                let out = slot.env.step(&action_raw)?;
                slot.ep_return += out.reward;
                slot.ep_len += 1;

                raw_proprio.push(slot.obs[tactile_len..].to_vec());
                obs_n.push(norm);
                actions.push(action_norm);
                logps[idx] = logp;
                values[idx] = value;
                let scaled = out.reward * cfg.ppo.reward_scale;
                running_returns[e] = cfg.ppo.gamma * running_returns[e] + scaled;
                ret_norm.update(&[running_returns[e]]);
                let mut r = (scaled / ret_norm.std(0)).clamp(-10.0, 10.0);
                dones[idx] = out.done;

                if out.done {
                    running_returns[e] = 0.0;
                    let success = out.info.status == TerminalStatus::Success;
                    if !success {
                        // timeouts and workspace exits are truncations, not
                        // goals: bootstrap the terminal state's value so
                        // ending an episode early is never a reward escape
                        let term_norm = params.normalize_obs(&out.obs);
                        r += cfg.ppo.gamma * params.vf.forward(&term_norm)[0];
                    }
                    ep_returns.push(slot.ep_return);
                    // completion time: successes at their length, failures
                    // censored at the episode limit
                    ep_lens.push(if success {
                        slot.ep_len as f64
                    } else {
                        episode_limit
                    });
                    ep_success.push(success);
                    slot.ep_return = 0.0;
                    slot.ep_len = 0;
                    let next_seed = slot.seed_stream.next_u64();
                    slot.obs = slot.env.reset(next_seed)?;
                } else {
                    slot.obs = out.obs;
                }
                rewards[idx] = r;
            }
        }
        env_steps += total;

        // bootstrap values and GAE per env column
        let mut advantages = vec![0.0; total];
        let mut returns = vec![0.0; total];
        for e in 0..n_envs {
            let norm = params.normalize_obs(&slots[e].obs);
            let last_value = params.vf.forward(&norm)[0];
            let col_rewards: Vec<f64> = (0..horizon).map(|t| rewards[t * n_envs + e]).collect();
            let col_values: Vec<f64> = (0..horizon).map(|t| values[t * n_envs + e]).collect();
            let col_dones: Vec<bool> = (0..horizon).map(|t| dones[t * n_envs + e]).collect();
            let (adv, ret) = gae_advantages(
                &col_rewards,
                &col_values,
                &col_dones,
                cfg.ppo.gamma,
                cfg.ppo.lambda,
                last_value,
            )?;
            for t in 0..horizon {
                advantages[t * n_envs + e] = adv[t];
                returns[t * n_envs + e] = ret[t];
            }
        }

        // normalize advantages over the whole batch
        let mean_adv = advantages.iter().sum::<f64>() / total as f64;
        let var_adv =
            advantages.iter().map(|a| (a - mean_adv).powi(2)).sum::<f64>() / total as f64;
        let std_adv = var_adv.sqrt().max(1e-8);
        for a in &mut advantages {
            *a = (*a - mean_adv) / std_adv;
        }

        // update epochs
        let mut order: Vec<usize> = (0..total).collect();
        let mb = cfg.ppo.minibatch as usize;
        let mut loss_acc = (0.0, 0.0, 0.0, 0.0);
        let mut n_mb = 0.0;
        let mut flat = params.to_flat();
        for _ in 0..cfg.ppo.epochs {
            shuffle_rng.shuffle(&mut order);
            for chunk in order.chunks(mb) {
                let batch = Batch {
                    obs: chunk.iter().map(|&i| obs_n[i].clone()).collect(),
                    actions: chunk.iter().map(|&i| actions[i].clone()).collect(),
                    old_logp: chunk.iter().map(|&i| logps[i]).collect(),
                    advantages: chunk.iter().map(|&i| advantages[i]).collect(),
                    returns: chunk.iter().map(|&i| returns[i]).collect(),
                };
                let (report, grads) = surrogate_loss(
                    &batch,
                    &params,
                    cfg.ppo.clip,
                    cfg.ppo.value_coeff,
                    cfg.ppo.entropy_coeff,
                )?;
                if !report.total.is_finite() {
                    return Err(Error::Diverged {
                        iteration,
                        detail: format!(
                            "policy {} value {} entropy {}",
                            report.policy, report.value, report.entropy
                        ),
                    });
                }
                let mut g = grads.to_flat();
                if cfg.ppo.max_grad_norm > 0.0 {
                    // policy and value are separate nets: clip separately so
                    // a large value error cannot squash the policy gradient
                    let split = params.pi.param_count() + params.log_std.len();
                    let (pg, vg) = g.split_at_mut(split);
                    for part in [pg, vg] {
                        let norm = part.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if norm > cfg.ppo.max_grad_norm {
                            let s = cfg.ppo.max_grad_norm / norm;
                            for v in part.iter_mut() {
                                *v *= s;
                            }
                        }
                    }
                }
                adam.step(&mut flat, &g);
                params.load_flat(&flat);
                loss_acc.0 += report.policy;
                loss_acc.1 += report.value;
                loss_acc.2 += report.entropy;
                loss_acc.3 += report.approx_kl;
                n_mb += 1.0;
            }
        }
        if !params.is_finite() {
            return Err(Error::Diverged { iteration, detail: "non-finite parameters".into() });
        }

        // refresh the proprio normalizer for the next iteration
        for row in &raw_proprio {
            params.proprio_norm.update(row);
        }

        if !ep_lens.is_empty() {
            last_mean_len = ep_lens.iter().sum::<f64>() / ep_lens.len() as f64;
            last_mean_ret = ep_returns.iter().sum::<f64>() / ep_returns.len() as f64;
        }
        let success_rate = if ep_success.is_empty() {
            0.0
        } else {
            ep_success.iter().filter(|s| **s).count() as f64 / ep_success.len() as f64
        };
        log.rows.push(IterRow {
            iteration,
            env_steps,
            mean_return: last_mean_ret,
            mean_ep_len: last_mean_len,
            success_rate,
            policy_loss: loss_acc.0 / n_mb,
            value_loss: loss_acc.1 / n_mb,
            entropy: loss_acc.2 / n_mb,
            approx_kl: loss_acc.3 / n_mb,
        });
    }

    Ok((params, log))
}
