//! Experiment commands: train, evaluate, ablate the goal-update mechanism,
//! sweep its hyperparameters, and replay recorded episodes.
//!
//! Every command is a library function so the CLI stays a thin shell and
//! tests can drive the exact same paths. Outputs are deterministic for a
//! fixed `(config, seed)`: no timestamps, stable key order, stable float
//! formatting.

pub mod metrics;

pub use metrics::MetricsReport;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, TaskKind};
use crate::error::{Error, Result};
use crate::policy::{
    action_bounds, ppo_train, scripted_oracle, Checkpoint, PolicyParams, TrainLog,
};
use crate::rng::SeededRng;
use crate::tasks::{EpisodeRecord, GoalKind, TaskEnv};

/// What drives the arms during evaluation.
pub enum PolicySource {
    Checkpoint(PathBuf),
    Oracle,
}

/// A fully described experiment: serialized next to its outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub command: String,
    pub task: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub episodes: usize,
    pub variant: String,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Train a policy and write `checkpoint.json`, `trainlog.csv` and the
/// resolved `config.cfg` into `out_dir`.
pub fn cmd_train(config_path: &Path, seed: u64, out_dir: &Path) -> Result<(PathBuf, TrainLog)> {
    let cfg = RunConfig::from_file(config_path)?;
    train_to_dir(&cfg, seed, out_dir)
}

/// Same as [`cmd_train`] but from an in-memory config.
pub fn train_to_dir(cfg: &RunConfig, seed: u64, out_dir: &Path) -> Result<(PathBuf, TrainLog)> {
    let (params, log) = ppo_train(|_| TaskEnv::new(cfg.clone()), cfg, seed)?;
    std::fs::create_dir_all(out_dir)?;
    let ck_path = out_dir.join("checkpoint.json");
    Checkpoint::new(cfg.task, cfg.content_hash(), params).save(&ck_path)?;
    write_text(&out_dir.join("trainlog.csv"), &log.to_csv())?;
    write_text(&out_dir.join("config.cfg"), &cfg.to_kv_text())?;
    Ok((ck_path, log))
}

enum Driver {
    Policy(Box<PolicyParams>),
    Oracle,
}

fn roll_episode(
    env: &mut TaskEnv,
    driver: &Driver,
    bounds: &[f64],
    seed: u64,
) -> Result<EpisodeRecord> {
    let mut obs = env.reset(seed)?;
    let ctl = scripted_oracle(env.kind());
    while !env.is_done() {
        let action = match driver {
            Driver::Policy(p) => p.mean_action(&obs, bounds),
            Driver::Oracle => ctl.act(env),
        };
        let out = env.step(&action)?;
        obs = out.obs;
    }
    Ok(env.record().clone())
}

/// Roll `episodes` episodes and aggregate task metrics.
///
/// Gathering additionally sweeps the perturbation count over 0..=6 with
/// common episode seeds across cells (the schedule for k+1 perturbations
/// extends the schedule for k), and ships every record next to the report.
pub fn cmd_eval(
    source: PolicySource,
    config_path: &Path,
    episodes: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<MetricsReport> {
    let cfg = RunConfig::from_file(config_path)?;
    eval_to_dir(source, &cfg, episodes, seed, out_dir)
}

pub fn eval_to_dir(
    source: PolicySource,
    cfg: &RunConfig,
    episodes: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<MetricsReport> {
    let driver = match source {
        PolicySource::Checkpoint(path) => {
            let ck = Checkpoint::load(&path)?;
            ck.expect_task(cfg.task)?;
            Driver::Policy(Box::new(ck.params))
        }
        PolicySource::Oracle => Driver::Oracle,
    };
    let bounds = action_bounds(cfg);
    std::fs::create_dir_all(out_dir.join("records"))?;

    // evaluation runs in the trained regime: subgoal anchors on TCPs
    let eval_phase: u8 = if cfg.curriculum.enabled { 2 } else { cfg.curriculum.start_phase };
    let mut seed_rng = SeededRng::new(seed, "eval-episodes");
    let episode_seeds: Vec<u64> = (0..episodes).map(|_| seed_rng.next_u64()).collect();

    let mut report = if cfg.task == TaskKind::BiGathering {
        let mut grid = Vec::new();
        let mut all_records = Vec::new();
        for count in 0..=6u32 {
            let mut cell_cfg = cfg.clone();
            cell_cfg.perturb.count = count;
            cell_cfg.perturb.prob_phase1 = 1.0;
            cell_cfg.perturb.prob_phase2 = 1.0;
            let mut env = TaskEnv::new(cell_cfg)?;
            env.set_phase(eval_phase);
            let mut records = Vec::with_capacity(episodes);
            for (j, ep_seed) in episode_seeds.iter().enumerate() {
                let rec = roll_episode(&mut env, &driver, &bounds, *ep_seed)?;
                write_text(
                    &out_dir.join(format!("records/perturb{count}_ep{j:03}.json")),
                    &rec.to_json()?,
                )?;
                records.push(rec);
            }
            let cell = MetricsReport::from_records(
                cfg.task.name(),
                &cfg.content_hash(),
                seed,
                &records,
            );
            grid.push((count, cell.success_rate));
            all_records.extend(records);
        }
        let mut rep = MetricsReport::from_records(
            cfg.task.name(),
            &cfg.content_hash(),
            seed,
            &all_records,
        );
        // headline success rate: the configured perturbation count's cell
        let own = cfg.perturb.count.min(6);
        rep.success_rate = grid[own as usize].1;
        rep.success_by_perturbations = grid;
        rep
    } else {
        let mut env = TaskEnv::new(cfg.clone())?;
        env.set_phase(eval_phase);
        let mut records = Vec::with_capacity(episodes);
        for (j, ep_seed) in episode_seeds.iter().enumerate() {
            let rec = roll_episode(&mut env, &driver, &bounds, *ep_seed)?;
            write_text(&out_dir.join(format!("records/ep{j:03}.json")), &rec.to_json()?)?;
            records.push(rec);
        }
        MetricsReport::from_records(cfg.task.name(), &cfg.content_hash(), seed, &records)
    };
    report.seed = seed;

    write_text(&out_dir.join("report.json"), &report.to_json()?)?;
    write_text(&out_dir.join("report.csv"), &report.to_csv())?;
    write_text(&out_dir.join("config.cfg"), &cfg.to_kv_text())?;
    Ok(report)
}

/// Derive the four ablation variants from a base gathering config.
pub fn variant_config(base: &RunConfig, gum: bool, perturbed: bool) -> RunConfig {
    let mut cfg = base.clone();
    cfg.gum_enabled = gum;
    cfg.curriculum.enabled = gum;
    cfg.perturb.count = if perturbed { base.perturb.count.max(2) } else { 0 };
    cfg
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationVariant {
    pub name: String,
    pub gum: bool,
    pub perturbed: bool,
    /// Mean episode length over the trailing 10% of iterations, per seed.
    pub final_ep_len: Vec<f64>,
    /// Post-training success rate per seed (20-episode evaluation).
    pub success_rate: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationReport {
    pub seeds: Vec<u64>,
    pub variants: Vec<AblationVariant>,
}

/// Train {subgoals on/off} x {perturbed/unperturbed} on the given seeds;
/// write one episode-length curve file per variant plus `summary.json`.
pub fn cmd_ablate_gum(config_path: &Path, seeds: &[u64], out_dir: &Path) -> Result<AblationReport> {
    let cfg = RunConfig::from_file(config_path)?;
    ablate_to_dir(&cfg, seeds, out_dir)
}

pub fn ablate_to_dir(cfg: &RunConfig, seeds: &[u64], out_dir: &Path) -> Result<AblationReport> {
    if cfg.task != TaskKind::BiGathering {
        return Err(Error::contract("the ablation applies to the gathering task"));
    }
    if seeds.len() < 3 {
        return Err(Error::contract("the ablation requires at least 3 seeds"));
    }
    std::fs::create_dir_all(out_dir)?;
    let combos = [
        ("gum_perturbed", true, true),
        ("gum_unperturbed", true, false),
        ("nogum_perturbed", false, true),
        ("nogum_unperturbed", false, false),
    ];
    let mut variants = Vec::new();
    for (name, gum, perturbed) in combos {
        let vcfg = variant_config(cfg, gum, perturbed);
        let mut final_lens = Vec::new();
        let mut success = Vec::new();
        let mut curves: Vec<TrainLog> = Vec::new();
        for &seed in seeds {
            let run_dir = out_dir.join(format!("{name}_seed{seed}"));
            let (ck, log) = train_to_dir(&vcfg, seed, &run_dir)?;
            final_lens.push(log.tail_mean_ep_len(0.1));
            let rep = eval_to_dir(
                PolicySource::Checkpoint(ck),
                &vcfg,
                20,
                seed,
                &run_dir.join("eval"),
            )?;
            success.push(rep.success_rate);
            curves.push(log);
        }
        // mean episode-length curve across seeds
        let iters = curves.iter().map(|c| c.rows.len()).min().unwrap_or(0);
        let mut curve = String::from("iteration,mean_ep_len\n");
        for i in 0..iters {
            let m: f64 =
                curves.iter().map(|c| c.rows[i].mean_ep_len).sum::<f64>() / curves.len() as f64;
            let _ = writeln!(curve, "{i},{m}");
        }
        write_text(&out_dir.join(format!("{name}.csv")), &curve)?;
        variants.push(AblationVariant {
            name: name.to_string(),
            gum,
            perturbed,
            final_ep_len: final_lens,
            success_rate: success,
        });
    }
    let report = AblationReport { seeds: seeds.to_vec(), variants };
    write_text(&out_dir.join("summary.json"), &serde_json::to_string_pretty(&report)?)?;
    write_text(&out_dir.join("config.cfg"), &cfg.to_kv_text())?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    /// Subgoal point count over {5, 10, 20}.
    N,
    /// Line update period over {25, 50, 75, 100}.
    H,
}

impl SweepParam {
    pub fn grid(&self) -> Vec<u32> {
        match self {
            SweepParam::N => vec![5, 10, 20],
            SweepParam::H => vec![25, 50, 75, 100],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::H => "h",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub param: String,
    pub seeds: Vec<u64>,
    /// `(value, per-seed final episode lengths, mean)` per grid cell.
    pub cells: Vec<(u32, Vec<f64>, f64)>,
    pub best_value: u32,
}

/// One training per grid cell per seed; reports the mean final episode
/// length per cell and marks the argmin cell.
pub fn cmd_sweep(
    config_path: &Path,
    param: SweepParam,
    seeds: &[u64],
    out_dir: &Path,
) -> Result<SweepReport> {
    let cfg = RunConfig::from_file(config_path)?;
    sweep_to_dir(&cfg, param, seeds, out_dir)
}

pub fn sweep_to_dir(
    cfg: &RunConfig,
    param: SweepParam,
    seeds: &[u64],
    out_dir: &Path,
) -> Result<SweepReport> {
    if cfg.task != TaskKind::BiGathering {
        return Err(Error::contract("the sweep applies to the gathering task"));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut cells = Vec::new();
    for value in param.grid() {
        let mut cell_cfg = cfg.clone();
        match param {
            SweepParam::N => cell_cfg.gum.n = value,
            SweepParam::H => cell_cfg.gum.h = value,
        }
        let mut lens = Vec::new();
        for &seed in seeds {
            let run_dir = out_dir.join(format!("{}{value}_seed{seed}", param.label()));
            let (_, log) = train_to_dir(&cell_cfg, seed, &run_dir)?;
            lens.push(log.tail_mean_ep_len(0.1));
        }
        let mean = lens.iter().sum::<f64>() / lens.len().max(1) as f64;
        cells.push((value, lens, mean));
    }
    let best_value = cells
        .iter()
        .min_by(|a, b| a.2.partial_cmp(&b.2).unwrap())
        .map(|c| c.0)
        .unwrap_or(0);
    let report = SweepReport {
        param: param.label().to_string(),
        seeds: seeds.to_vec(),
        cells,
        best_value,
    };
    let mut csv = format!("{},seed,final_mean_ep_len\n", param.label());
    for (value, lens, _) in &report.cells {
        for (s, l) in report.seeds.iter().zip(lens) {
            let _ = writeln!(csv, "{value},{s},{l}");
        }
    }
    write_text(&out_dir.join("report.csv"), &csv)?;
    write_text(&out_dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

/// Polyline export of a recorded episode: object and TCP trajectories plus
/// the goal path, as CSV (`series,point,x,y,theta`) and JSON.
pub fn cmd_replay(record_path: &Path, out_dir: &Path) -> Result<()> {
    let text = std::fs::read_to_string(record_path).map_err(|e| {
        Error::config(format!("cannot read record `{}`: {e}", record_path.display()))
    })?;
    let record = EpisodeRecord::from_json(&text)?;
    replay_to_dir(&record, out_dir)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polylines {
    /// `(series name, points as [x, y, theta])`
    pub series: Vec<(String, Vec<[f64; 3]>)>,
}

pub fn replay_polylines(record: &EpisodeRecord) -> Polylines {
    let mut series = Vec::new();
    let n_obj = record.start_poses.len();
    for i in 0..n_obj {
        let mut pts = vec![record.start_poses[i]];
        pts.extend(record.steps.iter().map(|r| r.object_poses[i]));
        series.push((format!("object{}", i + 1), pts));
    }
    for arm in 0..2 {
        let pts: Vec<[f64; 3]> = record.steps.iter().map(|r| r.tcp_poses[arm]).collect();
        series.push((format!("tcp{}", arm + 1), pts));
    }
    let goal: Vec<[f64; 3]> = match record.goal_kind.as_str() {
        "linear" | "sinusoid" => {
            let kind = if record.goal_kind == "linear" {
                GoalKind::Linear { k: record.goal_params[0] }
            } else {
                GoalKind::Sinusoid { a: record.goal_params[0] }
            };
            let (x0, x1) = record
                .waypoints
                .iter()
                .map(|w| w[0])
                .chain(record.start_poses.iter().map(|p| p[0]))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    (lo.min(x), hi.max(x))
                });
            if x0.is_finite() && x1.is_finite() {
                let mut pts = Vec::new();
                let mut x = x0;
                while x <= x1 {
                    pts.push([
                        x,
                        crate::tasks::curve_y(&kind, x),
                        crate::tasks::curve_tangent(&kind, x),
                    ]);
                    x += 1.0;
                }
                pts
            } else {
                vec![]
            }
        }
        _ => record.waypoints.clone(),
    };
    series.push(("goal".to_string(), goal));
    Polylines { series }
}

pub fn replay_to_dir(record: &EpisodeRecord, out_dir: &Path) -> Result<()> {
    let lines = replay_polylines(record);
    let mut csv = String::from("series,point,x,y,theta\n");
    for (name, pts) in &lines.series {
        for (i, p) in pts.iter().enumerate() {
            let _ = writeln!(csv, "{name},{i},{},{},{}", p[0], p[1], p[2]);
        }
    }
    write_text(&out_dir.join("polylines.csv"), &csv)?;
    write_text(&out_dir.join("polylines.json"), &serde_json::to_string_pretty(&lines)?)?;
    Ok(())
}
