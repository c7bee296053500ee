// scratch probe (removed before finalizing)
use std::time::Instant;

use bimanip::config::{RunConfig, TaskKind};
use bimanip::policy::ppo_train;
use bimanip::tasks::TaskEnv;

fn desk(task: TaskKind) -> RunConfig {
    let mut cfg = RunConfig::for_task(task);
    cfg.tactile.grid = 8;
    cfg.ppo.hidden1 = 64;
    cfg.ppo.hidden2 = 64;
    cfg.ppo.envs = 8;
    cfg.ppo.horizon = 128;
    cfg.ppo.iterations = 150;
    cfg.ppo.minibatch = 256;
    cfg.ppo.epochs = 4;
    cfg
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let task = match args.get(1).map(String::as_str) {
        Some("push") => TaskKind::BiPushing,
        Some("reorient") => TaskKind::BiReorienting,
        _ => TaskKind::BiGathering,
    };
    let mut cfg = desk(task);
    if let Some(it) = args.get(2).and_then(|s| s.parse::<u32>().ok()) {
        cfg.ppo.iterations = it;
    }
    if let Some(lr) = args.get(3).and_then(|s| s.parse::<f64>().ok()) {
        cfg.ppo.learning_rate = lr;
    }
    if let Some(h) = args.get(4).and_then(|s| s.parse::<u32>().ok()) {
        cfg.ppo.horizon = h;
    }
    if let Some(g) = args.get(5).and_then(|s| s.parse::<f64>().ok()) {
        cfg.ppo.gamma = g;
    }
    if let Some(ls) = args.get(6).and_then(|s| s.parse::<f64>().ok()) {
        cfg.ppo.log_std_init = ls;
    }
    if task == TaskKind::BiGathering {
        cfg.perturb.count = 0;
        cfg.curriculum.enabled = true;
    }
    if let Ok(e) = std::env::var("PROBE_ENT") {
        cfg.ppo.entropy_coeff = e.parse().unwrap();
    }
    if task == TaskKind::BiReorienting {
        if let Ok(w) = std::env::var("PROBE_W2") {
            cfg.reward.w2 = w.parse().unwrap();
        }
        cfg.reward.w_squeeze = 50.0;
        cfg.physics.rest_depth_mm = 1.0;
        cfg.workspace.x_min_mm = -250.0;
        cfg.workspace.x_max_mm = 250.0;
        cfg.workspace.y_min_mm = -250.0;
        cfg.workspace.y_max_mm = 250.0;
    }
    if task == TaskKind::BiPushing {
        cfg.push.advance_bias_mm = 1.0;
        if let Ok(w) = std::env::var("PROBE_W2") {
            cfg.reward.w2 = w.parse().unwrap();
            cfg.reward.w3 = cfg.reward.w2 / 10.0;
        }
        cfg.push.waypoint_advance_mm = 30.0;
        cfg.push.success_tol_mm = 30.0;
        cfg.push.waypoint_spacing_mm = 60.0;
        if let Ok(b) = std::env::var("PROBE_BIAS") {
            cfg.push.advance_bias_mm = b.parse().unwrap();
        }
        if let Ok(k) = std::env::var("PROBE_KAPPA") {
            cfg.physics.kappa_per_mm2 = k.parse().unwrap();
        }
        if let Ok(l) = std::env::var("PROBE_LIMIT") {
            cfg.episode_limit = l.parse().unwrap();
        }
        cfg.workspace.x_min_mm = -360.0;
        cfg.workspace.x_max_mm = 130.0;
        cfg.workspace.y_min_mm = -240.0;
        cfg.workspace.y_max_mm = 240.0;
    }
    let t0 = Instant::now();
    let (params, log) = ppo_train(|_| TaskEnv::new(cfg.clone()), &cfg, 1).unwrap();
    let dt = t0.elapsed().as_secs_f64();

    // one stochastic rollout with the trained policy
    let bounds = bimanip::policy::action_bounds(&cfg);
    {
        use bimanip::policy::gaussian_logp;
        let _ = gaussian_logp; // keep import shape simple
        let mut rng = bimanip::rng::SeededRng::new(777, "probe-stochastic");
        let mut env = TaskEnv::new(cfg.clone()).unwrap();
        if cfg.curriculum.enabled {
            env.set_phase(2);
        }
        let mut obs = env.reset(555).unwrap();
        let mut ret = 0.0;
        let mut min_dist = f64::INFINITY;
        while !env.is_done() {
            let norm = params.normalize_obs(&obs);
            let mean = params.pi.forward(&norm);
            let a: Vec<f64> = mean
                .iter()
                .zip(&params.log_std)
                .zip(&bounds)
                .map(|((m, ls), b)| (m + ls.exp() * rng.normal(0.0, 1.0)).clamp(-1.0, 1.0) * b)
                .collect();
            let out = env.step(&a).unwrap();
            ret += out.reward;
            obs = out.obs;
            if let Some((_, v)) = out.info.terms.iter().find(|(n, _)| *n == "goal_dist") {
                min_dist = min_dist.min(-v);
            }
            if env.step_idx() % 40 == 0 {
                let row = env.record().steps.last().unwrap();
                println!(
                    "  t={:3} idx={} obj=({:6.1},{:6.1},{:5.2}) terms={:?} d=({:.1},{:.1})",
                    env.step_idx(),
                    env.goal().current_index,
                    row.object_poses[0][0],
                    row.object_poses[0][1],
                    row.object_poses[0][2],
                    row.terms.iter().map(|(n, v)| format!("{n}={v:.1}")).collect::<Vec<_>>(),
                    row.depths[0],
                    row.depths[1],
                );
            }
        }
        println!(
            "stochastic: status {:?} len {} ret {:.0} goal_idx {}/{} min_goal_dist {:.1} obj end ({:.0},{:.0},{:.2})",
            env.record().status,
            env.record().steps.len(),
            ret,
            env.goal().current_index,
            env.goal().waypoints.len(),
            min_dist,
            env.record().steps.last().unwrap().object_poses[0][0],
            env.record().steps.last().unwrap().object_poses[0][1],
            env.record().steps.last().unwrap().object_poses[0][2],
        );
    }
    for ep in 0..3u64 {
        let mut env = TaskEnv::new(cfg.clone()).unwrap();
        if cfg.curriculum.enabled {
            env.set_phase(2);
        }
        let mut obs = env.reset(1000 + ep).unwrap();
        while !env.is_done() {
            let a = params.mean_action(&obs, &bounds);
            obs = env.step(&a).unwrap().obs;
        }
        let r = env.record();
        let last = r.steps.last().unwrap();
        println!(
            "greedy ep{ep}: status {:?} len {} goal_idx {}/{} obj end ({:.0},{:.0},{:.2}) depths ({:.1},{:.1})",
            r.status,
            r.steps.len(),
            env.goal().current_index,
            env.goal().waypoints.len(),
            last.object_poses[0][0],
            last.object_poses[0][1],
            last.object_poses[0][2],
            last.depths[0],
            last.depths[1],
        );
    }
    for r in log.rows.iter().step_by(10) {
        println!(
            "iter {:3} steps {:6} len {:6.1} ret {:9.1} succ {:.2} kl {:.4} ent {:.2} pl {:+.4} vl {:.4}",
            r.iteration, r.env_steps, r.mean_ep_len, r.mean_return, r.success_rate, r.approx_kl, r.entropy,
            r.policy_loss, r.value_loss
        );
    }
    let head = log.head_mean_ep_len(0.1);
    let tail = log.tail_mean_ep_len(0.1);
    println!(
        "head {head:.1} tail {tail:.1} ratio {:.3}  wall {dt:.1}s  ({:.1}k steps/s)",
        tail / head,
        log.rows.last().map(|r| r.env_steps).unwrap_or(0) as f64 / dt / 1000.0
    );
}
