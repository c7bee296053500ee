//! One bi-reorienting episode: the scripted controller rotates an object
//! to its goal angle through the subgoal ladder, then holds it still.
//!
//! ```bash
//! cargo run --example episode_bireorienting [seed]
//! ```

use bimanip::bench::metrics::{orientation_error_deg, translation_error};
use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::scripted_oracle;
use bimanip::tasks::TaskEnv;

fn main() -> bimanip::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let cfg = RunConfig::for_task(TaskKind::BiReorienting);
    let mut env = TaskEnv::new(cfg)?;
    env.reset(seed)?;
    let goal_deg = env.goal().waypoints.last().unwrap().theta.to_degrees();
    println!("goal angle {goal_deg:.1} deg, ladder of {} subgoals", env.goal().waypoints.len());

    let controller = scripted_oracle(TaskKind::BiReorienting);
    while !env.is_done() {
        let action = controller.act(&env);
        env.step(&action)?;
        if env.step_idx() % 25 == 0 {
            let o = env.world().objects[0].pose;
            println!(
                "step {:3}: angle {:5.1} deg, drift {:4.1} mm, depths ({:.1}, {:.1}) mm",
                env.step_idx(),
                o.theta.to_degrees(),
                (o.x * o.x + o.y * o.y).sqrt(),
                env.world().contacts[0].depth,
                env.world().contacts[1].depth,
            );
        }
    }
    let record = env.record();
    println!(
        "status: {} after {} steps; translation error {:.1} mm, orientation error {:.2} deg",
        record.status.label(),
        record.steps.len(),
        translation_error(record),
        orientation_error_deg(record)
    );
    Ok(())
}
