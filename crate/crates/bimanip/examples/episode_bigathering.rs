//! One bi-gathering episode with the subgoal mechanism and random force
//! perturbations: the tips herd two cubes together along the target line.
//!
//! ```bash
//! cargo run --example episode_bigathering [seed]
//! ```

use bimanip::config::{RunConfig, TaskKind};
use bimanip::geom::point_dist;
use bimanip::policy::scripted_oracle;
use bimanip::tasks::{Event, TaskEnv};

fn main() -> bimanip::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
    cfg.perturb.count = 2;
    cfg.perturb.prob_phase1 = 1.0;
    let mut env = TaskEnv::new(cfg)?;
    env.reset(seed)?;

    let dist = |env: &TaskEnv| {
        point_dist(
            env.world().objects[0].pose.position(),
            env.world().objects[1].pose.position(),
        )
    };
    println!("initial centre distance: {:.0} mm (success below 90 mm)", dist(&env));

    let controller = scripted_oracle(TaskKind::BiGathering);
    while !env.is_done() {
        let action = controller.act(&env);
        let out = env.step(&action)?;
        for event in &out.info.events {
            match event {
                Event::Perturbation { force, direction, target } => println!(
                    "step {:3}: {force:.2} N kick on object {} toward {:.2} rad",
                    env.step_idx(),
                    target + 1,
                    direction
                ),
                Event::GoalUpdate => {
                    let g = env.gum_state().unwrap();
                    println!(
                        "step {:3}: target line rebuilt ({} points, {:.1} mm apart)",
                        env.step_idx(),
                        g.points.len(),
                        point_dist(g.points[0], g.points[1])
                    );
                }
                _ => {}
            }
        }
        if env.step_idx() % 40 == 0 {
            println!("step {:3}: centre distance {:6.1} mm", env.step_idx(), dist(&env));
        }
    }
    println!(
        "status: {} after {} steps, final distance {:.1} mm",
        env.record().status.label(),
        env.record().steps.len(),
        dist(&env)
    );
    Ok(())
}
