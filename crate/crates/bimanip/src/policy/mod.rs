//! Self-contained policy optimization: a diagonal-Gaussian MLP policy with a
//! separate value net, clipped-surrogate updates with analytic gradients,
//! and scripted per-task controllers for verification baselines.

pub mod gae;
pub mod net;
pub mod oracle;
pub mod ppo;

pub use gae::gae_advantages;
pub use net::{Mlp, MlpGrads};
pub use oracle::{scripted_oracle, OracleController};
pub use ppo::{ppo_train, IterRow, TrainLog};

use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, TaskKind};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Per-dimension absolute action bounds (mm / rad) in task layout order.
pub fn action_bounds(cfg: &RunConfig) -> Vec<f64> {
    let mm = cfg.action.max_step_mm;
    let rad = cfg.action.max_step_rad();
    match cfg.task {
        TaskKind::BiPushing => vec![mm, rad, mm, rad],
        TaskKind::BiReorienting => vec![mm, mm, rad, mm, mm, rad],
        TaskKind::BiGathering => vec![mm, rad, mm, rad],
    }
}

/// Streaming mean/variance used to normalize the proprio block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunningNorm {
    pub mean: Vec<f64>,
    pub m2: Vec<f64>,
    pub count: f64,
}

impl RunningNorm {
    pub fn new(dim: usize) -> Self {
        RunningNorm { mean: vec![0.0; dim], m2: vec![0.0; dim], count: 0.0 }
    }

    pub fn update(&mut self, row: &[f64]) {
        self.count += 1.0;
        for (i, &x) in row.iter().enumerate() {
            let d = x - self.mean[i];
            self.mean[i] += d / self.count;
            self.m2[i] += d * (x - self.mean[i]);
        }
    }

    pub fn std(&self, i: usize) -> f64 {
        if self.count < 2.0 {
            1.0
        } else {
            (self.m2[i] / self.count).sqrt().max(1e-6)
        }
    }

    pub fn normalize(&self, row: &mut [f64]) {
        if self.count < 2.0 {
            return;
        }
        for (i, x) in row.iter_mut().enumerate() {
            *x = (*x - self.mean[i]) / self.std(i);
        }
    }
}

/// Trainable state: policy net, state-independent log-stds, value net and
/// the frozen-at-eval observation normalizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub pi: Mlp,
    pub log_std: Vec<f64>,
    pub vf: Mlp,
    pub proprio_norm: RunningNorm,
    pub tactile_len: usize,
    pub obs_dim: usize,
    pub act_dim: usize,
}

impl PolicyParams {
    pub fn init(obs_dim: usize, act_dim: usize, tactile_len: usize, cfg: &RunConfig, rng: &mut SeededRng) -> Self {
        let h1 = cfg.ppo.hidden1 as usize;
        let h2 = cfg.ppo.hidden2 as usize;
        PolicyParams {
            pi: Mlp::init(&[obs_dim, h1, h2, act_dim], rng),
            log_std: vec![cfg.ppo.log_std_init; act_dim],
            vf: Mlp::init(&[obs_dim, h1, h2, 1], rng),
            proprio_norm: RunningNorm::new(obs_dim - tactile_len),
            tactile_len,
            obs_dim,
            act_dim,
        }
    }

    /// Tactile block passes through; proprio block is normalized.
    pub fn normalize_obs(&self, raw: &[f64]) -> Vec<f64> {
        let mut out = raw.to_vec();
        self.proprio_norm.normalize(&mut out[self.tactile_len..]);
        out
    }

    /// Deterministic greedy action in raw units, clamped to bounds.
    pub fn mean_action(&self, raw_obs: &[f64], bounds: &[f64]) -> Vec<f64> {
        let obs = self.normalize_obs(raw_obs);
        let mean = self.pi.forward(&obs);
        mean.iter()
            .zip(bounds)
            .map(|(m, b)| m.clamp(-1.0, 1.0) * b)
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.pi.is_finite() && self.vf.is_finite() && self.log_std.iter().all(|v| v.is_finite())
    }

    pub fn param_count(&self) -> usize {
        self.pi.param_count() + self.log_std.len() + self.vf.param_count()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        self.pi.push_flat(&mut out);
        out.extend_from_slice(&self.log_std);
        self.vf.push_flat(&mut out);
        out
    }

    pub fn load_flat(&mut self, flat: &[f64]) {
        let mut it = flat.iter().copied();
        self.pi.load_flat(&mut it);
        for v in &mut self.log_std {
            *v = it.next().expect("flat too short");
        }
        self.vf.load_flat(&mut it);
        assert!(it.next().is_none(), "flat parameter vector too long");
    }
}

/// Gradients with the same flat layout as [`PolicyParams::to_flat`].
pub struct Grads {
    pub pi: MlpGrads,
    pub log_std: Vec<f64>,
    pub vf: MlpGrads,
}

impl Grads {
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.pi.push_flat(&mut out);
        out.extend_from_slice(&self.log_std);
        self.vf.push_flat(&mut out);
        out
    }
}

/// One update batch; observations are pre-normalized, actions are in the
/// normalized (unit-bound) space and deliberately unclamped.
#[derive(Debug, Clone, Default)]
pub struct Batch {
    pub obs: Vec<Vec<f64>>,
    pub actions: Vec<Vec<f64>>,
    pub old_logp: Vec<f64>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl Batch {
    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LossReport {
    pub total: f64,
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub approx_kl: f64,
}

pub fn gaussian_logp(action: &[f64], mean: &[f64], log_std: &[f64]) -> f64 {
    const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
    let mut lp = 0.0;
    for d in 0..action.len() {
        let s = log_std[d].exp();
        let z = (action[d] - mean[d]) / s;
        lp += -0.5 * z * z - log_std[d] - HALF_LN_2PI;
    }
    lp
}

/// Clipped-surrogate PPO loss with analytic gradients.
///
/// `loss = -mean(min(r A, clamp(r, 1-c, 1+c) A)) + value_coeff * 0.5 mean((V - R)^2)
///         - entropy_coeff * H(pi)`
pub fn surrogate_loss(
    batch: &Batch,
    params: &PolicyParams,
    clip: f64,
    value_coeff: f64,
    entropy_coeff: f64,
) -> Result<(LossReport, Grads)> {
    if batch.is_empty() {
        return Err(Error::contract("surrogate_loss: empty batch"));
    }
    let n = batch.len() as f64;
    let act_dim = params.act_dim;
    let mut grads = Grads {
        pi: params.pi.zeros_like(),
        log_std: vec![0.0; act_dim],
        vf: params.vf.zeros_like(),
    };
    let mut policy_loss = 0.0;
    let mut value_loss = 0.0;
    let mut kl = 0.0;

    for b in 0..batch.len() {
        let obs = &batch.obs[b];
        let a = &batch.actions[b];
        let adv = batch.advantages[b];

        let cache = params.pi.forward_cached(obs);
        let mean = &cache.output;
        let logp = gaussian_logp(a, mean, &params.log_std);
        let ratio = (logp - batch.old_logp[b]).exp();
        let surr1 = ratio * adv;
        let clipped = ratio.clamp(1.0 - clip, 1.0 + clip);
        let surr2 = clipped * adv;
        policy_loss += -surr1.min(surr2);
        kl += batch.old_logp[b] - logp;

        // gradient flows only through the unclipped branch of the min
        let dlogp = if surr1 <= surr2 { -ratio * adv / n } else { 0.0 };
        if dlogp != 0.0 {
            // d logp / d mean = z / s ; d logp / d log_std = z^2 - 1
            let mut dmean = vec![0.0; act_dim];
            for d in 0..act_dim {
                let s = params.log_std[d].exp();
                let z = (a[d] - mean[d]) / s;
                dmean[d] = dlogp * (z / s);
                grads.log_std[d] += dlogp * (z * z - 1.0);
            }
            params.pi.backward(&cache, &dmean, &mut grads.pi);
        }

        let vcache = params.vf.forward_cached(obs);
        let v = vcache.output[0];
        let err = v - batch.returns[b];
        value_loss += 0.5 * err * err;
        params.vf.backward(&vcache, &[value_coeff * err / n], &mut grads.vf);
    }

    policy_loss /= n;
    value_loss /= n;
    kl /= n;

    // state-independent entropy: H = sum_d (log_std_d + (1 + ln 2 pi) / 2)
    const HALF_1_LN_2PI: f64 = 1.418_938_533_204_672_7;
    let entropy: f64 = params.log_std.iter().map(|ls| ls + HALF_1_LN_2PI).sum();
    for g in &mut grads.log_std {
        // entropy bonus pushes log_std up
        *g += -entropy_coeff;
    }

    let total = policy_loss + value_coeff * value_loss - entropy_coeff * entropy;
    Ok((
        LossReport { total, policy: policy_loss, value: value_loss, entropy, approx_kl: kl },
        grads,
    ))
}

/// Adam over the flat parameter vector.
pub struct Adam {
    pub lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(dim: usize, lr: f64) -> Self {
        Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        self.t += 1;
        let b1t = 1.0 - self.beta1.powi(self.t as i32);
        let b2t = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let mhat = self.m[i] / b1t;
            let vhat = self.v[i] / b2t;
            params[i] -= self.lr * mhat / (vhat.sqrt() + self.eps);
        }
    }
}

/// Versioned checkpoint file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub task: String,
    pub config_hash: String,
    pub params: PolicyParams,
}

pub const CHECKPOINT_VERSION: u32 = 1;

impl Checkpoint {
    pub fn new(task: TaskKind, config_hash: String, params: PolicyParams) -> Self {
        Checkpoint { version: CHECKPOINT_VERSION, task: task.name().into(), config_hash, params }
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Checkpoint(format!("cannot read `{}`: {e}", path.display())))?;
        let ck: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("cannot parse `{}`: {e}", path.display())))?;
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported checkpoint version {}", ck.version)));
        }
        Ok(ck)
    }

    pub fn expect_task(&self, task: TaskKind) -> Result<()> {
        if self.task != task.name() {
            return Err(Error::Checkpoint(format!(
                "checkpoint was trained on `{}` but the config names `{}`",
                self.task,
                task.name()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    fn tiny_params(obs: usize, act: usize, rng_seed: u64) -> PolicyParams {
        let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
        cfg.ppo.hidden1 = 16;
        cfg.ppo.hidden2 = 16;
        let mut rng = SeededRng::new(rng_seed, "policy-init");
        PolicyParams::init(obs, act, 0, &cfg, &mut rng)
    }

    fn random_batch(params: &PolicyParams, n: usize, seed: u64, perturb_old: f64) -> Batch {
        let mut rng = SeededRng::new(seed, "batch");
        let mut batch = Batch::default();
        for _ in 0..n {
            let obs: Vec<f64> = (0..params.obs_dim).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
            let mean = params.pi.forward(&obs);
            let action: Vec<f64> = mean
                .iter()
                .zip(&params.log_std)
                .map(|(m, ls)| m + ls.exp() * rng.normal(0.0, 1.0))
                .collect();
            let logp = gaussian_logp(&action, &mean, &params.log_std)
                + rng.uniform_range(-perturb_old, perturb_old.max(1e-12));
            batch.obs.push(obs);
            batch.actions.push(action);
            batch.old_logp.push(logp);
            batch.advantages.push(rng.normal(0.0, 1.0));
            batch.returns.push(rng.normal(0.0, 1.0));
        }
        batch
    }

    #[test]
    fn ratio_one_gives_negative_mean_advantage() {
        let params = tiny_params(6, 3, 1);
        let batch = random_batch(&params, 64, 2, 0.0);
        let (report, _) = surrogate_loss(&batch, &params, 0.2, 0.5, 0.0).unwrap();
        let mean_adv: f64 = batch.advantages.iter().sum::<f64>() / batch.len() as f64;
        assert!(
            (report.policy + mean_adv).abs() < 1e-12,
            "policy term {} vs -mean(adv) {}",
            report.policy,
            -mean_adv
        );
    }

    #[test]
    fn clip_zero_kills_gradient_where_ratio_differs_from_one() {
        let params = tiny_params(6, 3, 3);
        // old logp shifted so every sample has ratio != 1
        let mut batch = random_batch(&params, 32, 4, 0.0);
        for lp in &mut batch.old_logp {
            *lp -= 0.5; // ratio = e^{0.5} > 1 everywhere
        }
        // positive advantages with ratio > 1: clipped branch is active
        for a in &mut batch.advantages {
            *a = a.abs() + 0.1;
        }
        let (_, grads) = surrogate_loss(&batch, &params, 0.0, 0.0, 0.0).unwrap();
        let flat = grads.to_flat();
        let pi_len = params.pi.param_count() + params.log_std.len();
        assert!(
            flat[..pi_len].iter().all(|g| *g == 0.0),
            "policy gradient must vanish in fully clipped regions"
        );
    }

    #[test]
    fn analytic_gradients_match_central_finite_differences() {
        let mut params = tiny_params(5, 2, 7);
        let batch = random_batch(&params, 24, 8, 0.3);
        let (clip, vc, ec) = (0.2, 0.7, 0.01);
        let (_, grads) = surrogate_loss(&batch, &params, clip, vc, ec).unwrap();
        let analytic = grads.to_flat();
        let base = params.to_flat();
        let mut worst: f64 = 0.0;
        for k in 0..base.len() {
            let h = 1e-6 * base[k].abs().max(1.0);
            let mut p = base.clone();
            p[k] += h;
            params.load_flat(&p);
            let (lp, _) = surrogate_loss(&batch, &params, clip, vc, ec).unwrap();
            let mut m = base.clone();
            m[k] -= h;
            params.load_flat(&m);
            let (lm, _) = surrogate_loss(&batch, &params, clip, vc, ec).unwrap();
            let fd = (lp.total - lm.total) / (2.0 * h);
            let denom = fd.abs().max(analytic[k].abs()).max(1e-6);
            worst = worst.max(((analytic[k] - fd) / denom).abs());
        }
        params.load_flat(&base);
        assert!(worst < 1e-4, "worst relative gradient error {worst}");
    }

    #[test]
    fn log_probabilities_integrate_to_one() {
        // Monte-Carlo integral of exp(logp) over a wide action box
        let params = {
            let mut p = tiny_params(4, 2, 9);
            p.log_std = vec![-0.7, -0.3];
            p
        };
        let obs: Vec<f64> = vec![0.2, -0.1, 0.4, 0.0];
        let mean = params.pi.forward(&obs);
        let side = 8.0; // +- 8 sigma-ish box in normalized units
        let mut rng = SeededRng::new(11, "mc");
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let a: Vec<f64> = mean
                .iter()
                .map(|m| m + rng.uniform_range(-side / 2.0, side / 2.0))
                .collect();
            acc += gaussian_logp(&a, &mean, &params.log_std).exp();
        }
        let volume = side.powi(2);
        let integral = acc / n as f64 * volume;
        assert!(
            (0.95..=1.05).contains(&integral),
            "MC integral of the density: {integral}"
        );
    }

    #[test]
    fn running_norm_centres_and_scales() {
        let mut norm = RunningNorm::new(2);
        let mut rng = SeededRng::new(5, "norm");
        for _ in 0..10_000 {
            norm.update(&[rng.normal(3.0, 2.0), rng.normal(-1.0, 0.5)]);
        }
        let mut row = [3.0, -1.0];
        norm.normalize(&mut row);
        assert!(row[0].abs() < 0.05 && row[1].abs() < 0.05, "{row:?}");
        let mut row = [5.0, -1.5];
        norm.normalize(&mut row);
        assert!((row[0] - 1.0).abs() < 0.05, "one sigma maps near 1: {}", row[0]);
    }

    #[test]
    fn flat_roundtrip_preserves_params() {
        let params = tiny_params(5, 2, 13);
        let flat = params.to_flat();
        let mut copy = params.clone();
        copy.load_flat(&flat);
        assert_eq!(copy, params);
    }

    #[test]
    fn checkpoint_roundtrip_and_task_guard() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let params = tiny_params(5, 2, 17);
        let ck = Checkpoint::new(TaskKind::BiGathering, "abc".into(), params);
        ck.save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back.params, ck.params);
        assert!(back.expect_task(TaskKind::BiGathering).is_ok());
        assert!(back.expect_task(TaskKind::BiPushing).is_err());
    }

    #[test]
    fn mean_action_respects_bounds() {
        let params = tiny_params(4, 2, 19);
        let a = params.mean_action(&[100.0, -50.0, 3.0, 9.0], &[2.0, 0.05]);
        assert!(a[0].abs() <= 2.0 && a[1].abs() <= 0.05);
    }
}
