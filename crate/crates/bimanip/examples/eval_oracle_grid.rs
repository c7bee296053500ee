//! Robustness grid: gathering success rate of the scripted controller as
//! the number of force perturbations grows, using common random numbers
//! across the grid cells.
//!
//! ```bash
//! cargo run --example eval_oracle_grid [episodes_per_cell]
//! ```

use bimanip::bench::{eval_to_dir, PolicySource};
use bimanip::config::{RunConfig, TaskKind};

fn main() -> bimanip::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let cfg = RunConfig::for_task(TaskKind::BiGathering);
    let out = std::path::PathBuf::from("out/oracle_grid");
    let report = eval_to_dir(PolicySource::Oracle, &cfg, episodes, 5, &out)?;

    println!("perturbations  success rate");
    for (count, rate) in &report.success_by_perturbations {
        let bar = "#".repeat((rate * 30.0).round() as usize);
        println!("{count:>13}  {:>5.0}%  {bar}", rate * 100.0);
    }
    println!(
        "mean episode length {:.0} steps over {} episodes; full report in {}",
        report.mean_episode_len,
        report.episodes,
        out.join("report.json").display()
    );
    Ok(())
}
