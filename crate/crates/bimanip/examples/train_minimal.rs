//! A short training run on bi-gathering with a small network and tactile
//! grid, printing the learning curve. A real run raises the budgets; see
//! docs/config.md.
//!
//! ```bash
//! cargo run --release --example train_minimal [iterations]
//! ```

use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::ppo_train;
use bimanip::tasks::TaskEnv;

fn main() -> bimanip::Result<()> {
    let iterations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
    cfg.tactile.grid = 8;
    cfg.ppo.hidden1 = 64;
    cfg.ppo.hidden2 = 64;
    cfg.ppo.iterations = iterations;
    cfg.perturb.count = 0;

    println!("training bi-gathering for {iterations} iterations (seed 1)...");
    let (params, log) = ppo_train(|_| TaskEnv::new(cfg.clone()), &cfg, 1)?;
    for row in log.rows.iter().step_by((iterations as usize / 10).max(1)) {
        println!(
            "iter {:3}  steps {:6}  completion time {:5.1}  success {:4.1}%  return {:9.1}",
            row.iteration,
            row.env_steps,
            row.mean_ep_len,
            row.success_rate * 100.0,
            row.mean_return,
        );
    }
    println!(
        "head {:.1} -> tail {:.1} steps; {} parameters trained",
        log.head_mean_ep_len(0.1),
        log.tail_mean_ep_len(0.1),
        params.param_count()
    );

    std::fs::create_dir_all("out")?;
    std::fs::write("out/train_minimal.csv", log.to_csv())?;
    println!("training log written to out/train_minimal.csv");
    Ok(())
}
