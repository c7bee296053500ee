//! Task metrics computed from episode records.
//!
//! - Pushing trajectory error: RMS over steps of the perpendicular distance
//!   from the object centre to the goal curve, reported mean +- std across
//!   episodes.
//! - Reorientation translation error: distance between the final and the
//!   starting object position. Orientation error: absolute wrapped angle
//!   between the final object angle and the goal angle, in degrees.
//! - Gathering: success flag and episode length.

use serde::{Deserialize, Serialize};

use crate::geom::wrap;
use crate::tasks::{EpisodeRecord, TerminalStatus};

/// Perpendicular distance from a point to the episode's goal curve.
pub fn curve_distance(record: &EpisodeRecord, p: [f64; 2]) -> f64 {
    match record.goal_kind.as_str() {
        "linear" => {
            let k = record.goal_params[0];
            (k * p[0] - p[1]).abs() / (1.0 + k * k).sqrt()
        }
        "sinusoid" => {
            let a = record.goal_params[0];
            // dense scan around the point's x; the curve is gentle so the
            // nearest point lies within this window
            let mut best = f64::INFINITY;
            let mut x = p[0] - 120.0;
            while x <= p[0] + 120.0 {
                let y = a * (x / 50.0).sin();
                let d = ((p[0] - x).powi(2) + (p[1] - y).powi(2)).sqrt();
                best = best.min(d);
                x += 0.25;
            }
            best
        }
        _ => 0.0,
    }
}

/// RMS perpendicular distance of the object centre to the goal curve.
pub fn trajectory_error(record: &EpisodeRecord) -> f64 {
    if record.steps.is_empty() {
        return 0.0;
    }
    let acc: f64 = record
        .steps
        .iter()
        .map(|r| curve_distance(record, [r.object_poses[0][0], r.object_poses[0][1]]).powi(2))
        .sum();
    (acc / record.steps.len() as f64).sqrt()
}

/// Distance between the final and starting object position, mm.
pub fn translation_error(record: &EpisodeRecord) -> f64 {
    let start = record.start_poses[0];
    let last = record
        .steps
        .last()
        .map(|r| r.object_poses[0])
        .unwrap_or(start);
    ((last[0] - start[0]).powi(2) + (last[1] - start[1]).powi(2)).sqrt()
}

/// Absolute wrapped angle between the final object angle and the goal, deg.
pub fn orientation_error_deg(record: &EpisodeRecord) -> f64 {
    let goal = record.goal_params[0];
    let last = record
        .steps
        .last()
        .map(|r| r.object_poses[0][2])
        .unwrap_or(record.start_poses[0][2]);
    wrap(last - goal).abs().to_degrees()
}

pub fn is_success(record: &EpisodeRecord) -> bool {
    record.status == TerminalStatus::Success
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregated evaluation metrics; recomputable from the shipped records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub task: String,
    pub config_hash: String,
    pub seed: u64,
    pub episodes: usize,
    pub success_rate: f64,
    pub mean_episode_len: f64,
    /// Pushing only: (mean, std) of the RMS trajectory error, mm.
    pub trajectory_error_mm: Option<(f64, f64)>,
    /// Reorienting only: (mean, std) translation error, mm.
    pub translation_error_mm: Option<(f64, f64)>,
    /// Reorienting only: (mean, std) orientation error, degrees.
    pub orientation_error_deg: Option<(f64, f64)>,
    /// Gathering only: success rate per perturbation count.
    pub success_by_perturbations: Vec<(u32, f64)>,
}

impl MetricsReport {
    /// Aggregate a uniform batch of records (single evaluation cell).
    pub fn from_records(
        task: &str,
        config_hash: &str,
        seed: u64,
        records: &[EpisodeRecord],
    ) -> MetricsReport {
        let episodes = records.len();
        let succ = records.iter().filter(|r| is_success(r)).count();
        let lens: Vec<f64> = records.iter().map(|r| r.steps.len() as f64).collect();
        let (mean_len, _) = mean_std(&lens);
        let mut report = MetricsReport {
            task: task.to_string(),
            config_hash: config_hash.to_string(),
            seed,
            episodes,
            success_rate: if episodes == 0 { 0.0 } else { succ as f64 / episodes as f64 },
            mean_episode_len: mean_len,
            trajectory_error_mm: None,
            translation_error_mm: None,
            orientation_error_deg: None,
            success_by_perturbations: vec![],
        };
        match task {
            "bi_pushing" => {
                let errs: Vec<f64> = records.iter().map(trajectory_error).collect();
                report.trajectory_error_mm = Some(mean_std(&errs));
            }
            "bi_reorienting" => {
                let t: Vec<f64> = records.iter().map(translation_error).collect();
                let o: Vec<f64> = records.iter().map(orientation_error_deg).collect();
                report.translation_error_mm = Some(mean_std(&t));
                report.orientation_error_deg = Some(mean_std(&o));
            }
            _ => {}
        }
        report
    }

    pub fn to_json(&self) -> crate::error::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("metric,value\n");
        s.push_str(&format!("task,{}\n", self.task));
        s.push_str(&format!("config_hash,{}\n", self.config_hash));
        s.push_str(&format!("seed,{}\n", self.seed));
        s.push_str(&format!("episodes,{}\n", self.episodes));
        s.push_str(&format!("success_rate,{}\n", self.success_rate));
        s.push_str(&format!("mean_episode_len,{}\n", self.mean_episode_len));
        if let Some((m, sd)) = self.trajectory_error_mm {
            s.push_str(&format!("trajectory_error_mean_mm,{m}\ntrajectory_error_std_mm,{sd}\n"));
        }
        if let Some((m, sd)) = self.translation_error_mm {
            s.push_str(&format!("translation_error_mean_mm,{m}\ntranslation_error_std_mm,{sd}\n"));
        }
        if let Some((m, sd)) = self.orientation_error_deg {
            s.push_str(&format!("orientation_error_mean_deg,{m}\norientation_error_std_deg,{sd}\n"));
        }
        for (count, rate) in &self.success_by_perturbations {
            s.push_str(&format!("success_rate_perturb_{count},{rate}\n"));
        }
        s
    }
}
