// scratch probe (removed before finalizing)
use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::scripted_oracle;
use bimanip::tasks::TaskEnv;

fn main() {
    let mut cfg = RunConfig::for_task(TaskKind::BiGathering);
    cfg.perturb.count = 0;
    let mut env = TaskEnv::new(cfg).unwrap();
    env.reset(std::env::var("PROBE_SEED").map(|v| v.parse().unwrap()).unwrap_or(0)).unwrap();
    let ctl = scripted_oracle(TaskKind::BiGathering);
    for step in 0..300 {
        if env.is_done() {
            break;
        }
        let a = ctl.act(&env);
        env.step(&a).unwrap();
        if step % 20 == 0 {
            let o0 = env.world().objects[0].pose;
            let o1 = env.world().objects[1].pose;
            let t0 = env.world().effectors[0].pose;
            let t1 = env.world().effectors[1].pose;
            let c = &env.world().contacts;
            println!(
                "{step:3} o0=({:7.1},{:6.1},{:5.2}) o1=({:7.1},{:6.1},{:5.2}) t0=({:7.1},{:6.1},{:5.2}) t1=({:7.1},{:6.1},{:5.2}) d=({:.2},{:.2}) a={:?}",
                o0.x, o0.y, o0.theta, o1.x, o1.y, o1.theta,
                t0.x, t0.y, t0.theta, t1.x, t1.y, t1.theta,
                c[0].depth, c[1].depth,
                a.iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>()
            );
        }
    }
    println!("status {:?} steps {}", env.record().status, env.record().steps.len());

    println!("--- reorient ---");
    let mut cfg = RunConfig::for_task(TaskKind::BiReorienting);
    cfg.reorient.length_min_mm = 100.0;
    cfg.reorient.length_max_mm = 100.0;
    cfg.reorient.goal_min_deg = 30.0;
    cfg.reorient.goal_max_deg = 30.0;
    cfg.reorient.large_angle_bias = 0.0;
    let mut env = TaskEnv::new(cfg).unwrap();
    env.reset(1234).unwrap();
    let ctl = scripted_oracle(TaskKind::BiReorienting);
    for step in 0..500 {
        if env.is_done() {
            break;
        }
        let a = ctl.act(&env);
        env.step(&a).unwrap();
        if step % 25 == 0 {
            let o = env.world().objects[0].pose;
            let t0 = env.world().effectors[0].pose;
            let t1 = env.world().effectors[1].pose;
            let c = &env.world().contacts;
            println!(
                "{step:3} obj=({:6.2},{:6.2},{:6.3}) sub={:5.3} t0=({:6.1},{:6.1},{:6.2}) t1=({:6.1},{:6.1},{:6.2}) d=({:.2},{:.2})",
                o.x, o.y, o.theta,
                env.goal().current().unwrap().theta,
                t0.x, t0.y, t0.theta, t1.x, t1.y, t1.theta,
                c[0].depth, c[1].depth
            );
        }
    }
    println!("status {:?} steps {}", env.record().status, env.record().steps.len());
}
