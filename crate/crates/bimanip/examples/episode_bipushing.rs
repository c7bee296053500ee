//! One bi-pushing episode driven by the scripted controller: two tips push
//! a 400 mm cuboid along a sampled linear or sinusoidal waypoint path.
//!
//! ```bash
//! cargo run --example episode_bipushing [seed]
//! ```

use bimanip::bench::metrics::trajectory_error;
use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::scripted_oracle;
use bimanip::tasks::TaskEnv;

fn main() -> bimanip::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let cfg = RunConfig::for_task(TaskKind::BiPushing);
    let mut env = TaskEnv::new(cfg)?;
    env.reset(seed)?;
    println!(
        "family: {} {:?}, {} waypoints",
        env.record().goal_kind,
        env.record().goal_params,
        env.goal().waypoints.len()
    );

    let controller = scripted_oracle(TaskKind::BiPushing);
    while !env.is_done() {
        let action = controller.act(&env);
        env.step(&action)?;
        if env.step_idx() % 80 == 0 {
            let o = env.world().objects[0].pose;
            println!(
                "step {:3}: object ({:6.1}, {:6.1}, {:+.2}), waypoint {}/{}",
                env.step_idx(),
                o.x,
                o.y,
                o.theta,
                env.goal().current_index + 1,
                env.goal().waypoints.len()
            );
        }
    }

    let record = env.record();
    println!(
        "status: {} after {} steps, RMS path error {:.1} mm",
        record.status.label(),
        record.steps.len(),
        trajectory_error(record)
    );

    std::fs::create_dir_all("out")?;
    std::fs::write("out/bipushing_episode.csv", record.to_csv())?;
    std::fs::write("out/bipushing_episode.json", record.to_json()?)?;
    println!("episode exported to out/bipushing_episode.{{csv,json}}");
    Ok(())
}
