//! Record an episode, then export its trajectories as polylines ready for
//! external plotting (object paths, tip paths, goal curve).
//!
//! ```bash
//! cargo run --example replay_export [seed]
//! ```

use bimanip::bench::{replay_polylines, replay_to_dir};
use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::scripted_oracle;
use bimanip::tasks::TaskEnv;

fn main() -> bimanip::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    let cfg = RunConfig::for_task(TaskKind::BiPushing);
    let mut env = TaskEnv::new(cfg)?;
    env.reset(seed)?;
    let controller = scripted_oracle(TaskKind::BiPushing);
    while !env.is_done() {
        let action = controller.act(&env);
        env.step(&action)?;
    }
    let record = env.record();

    let lines = replay_polylines(record);
    for (name, points) in &lines.series {
        let (first, last) = (points.first(), points.last());
        println!(
            "{name:8}: {:3} points{}",
            points.len(),
            match (first, last) {
                (Some(a), Some(b)) => format!(
                    "  ({:6.1},{:6.1}) -> ({:6.1},{:6.1})",
                    a[0], a[1], b[0], b[1]
                ),
                _ => String::new(),
            }
        );
    }

    let out = std::path::PathBuf::from("out/replay");
    replay_to_dir(record, &out)?;
    println!("polylines written to {}", out.display());
    Ok(())
}
