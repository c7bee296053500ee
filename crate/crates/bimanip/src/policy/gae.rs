//! Generalized advantage estimation.

use crate::error::{Error, Result};

/// Reverse-recursion GAE over one trajectory.
///
/// `dones[t]` marks that the episode ended at step `t` (no bootstrap across
/// it). `last_value` bootstraps the step after the final entry when the
/// trajectory was cut mid-episode. Returns `(advantages, returns)` with
/// `returns[t] = advantages[t] + values[t]`.
pub fn gae_advantages(
    rewards: &[f64],
    values: &[f64],
    dones: &[bool],
    gamma: f64,
    lambda: f64,
    last_value: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if rewards.len() != values.len() || rewards.len() != dones.len() {
        return Err(Error::contract(format!(
            "gae: sequence lengths differ ({}, {}, {})",
            rewards.len(),
            values.len(),
            dones.len()
        )));
    }
    if !(0.0..=1.0).contains(&gamma) || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::contract(format!(
            "gae: gamma and lambda must lie in [0, 1], got ({gamma}, {lambda})"
        )));
    }
    let n = rewards.len();
    let mut adv = vec![0.0; n];
    let mut running = 0.0;
    for t in (0..n).rev() {
        let (next_value, cont) = if dones[t] {
            (0.0, 0.0)
        } else if t + 1 == n {
            (last_value, 1.0)
        } else {
            (values[t + 1], 1.0)
        };
        let delta = rewards[t] + gamma * next_value * cont - values[t];
        running = delta + gamma * lambda * cont * running;
        adv[t] = running;
        if dones[t] {
            // nothing propagates backwards across an episode boundary;
            // the recursion restarts at the previous step
        }
    }
    let returns = adv.iter().zip(values).map(|(a, v)| a + v).collect();
    Ok((adv, returns))
}
