//! The quasi-static contact model: a tip carrying a box, a squeeze that
//! saturates at the depth clamp, and the perturbation displacement map.
//!
//! ```bash
//! cargo run --example quasistatic_pushing
//! ```

use bimanip::geom::Pose2;
use bimanip::sim::{
    perturbation_displacement_mm, Effector, Perturbation, PhysicsParams, PoseDelta, RigidObject,
    Shape, World,
};

fn tip(x: f64, y: f64, theta: f64) -> Effector {
    Effector { pose: Pose2::new(x, y, theta), tip_radius: 15.0, max_step_mm: 2.0, max_step_rad: 0.05 }
}

fn main() -> bimanip::Result<()> {
    let cube = RigidObject::new(
        Shape::rect(100.0, 100.0)?,
        Pose2::identity(),
        200.0,
        0.5,
    )?;
    let mut world = World::new(
        vec![cube],
        vec![tip(-65.0, 0.0, 0.0), tip(65.0, 0.0, std::f64::consts::PI)],
        PhysicsParams::default(),
    );

    println!("-- carry: the left tip pushes 1.5 mm per step");
    for step in 0..10 {
        world.step(&[PoseDelta { dx: 1.5, dy: 0.0, dtheta: 0.0 }, PoseDelta::default()])?;
        if step % 3 == 0 {
            println!(
                "step {step}: cube x = {:6.2} mm, held depth = {:.2} mm",
                world.objects[0].pose.x, world.contacts[0].depth
            );
        }
    }

    println!("-- squeeze: both tips advance; depth saturates at the clamp");
    for _ in 0..12 {
        world.step(&[
            PoseDelta { dx: 2.0, dy: 0.0, dtheta: 0.0 },
            PoseDelta { dx: 2.0, dy: 0.0, dtheta: 0.0 },
        ])?;
    }
    println!(
        "cube x = {:.2} mm, depths = ({:.2}, {:.2}) mm",
        world.objects[0].pose.x, world.contacts[0].depth, world.contacts[1].depth
    );

    println!("-- perturbation: displacement scales linearly with force");
    for force in [1.0, 2.5, 5.0] {
        let d = perturbation_displacement_mm(1.0, force, 200.0, 0.5);
        println!("{force:.1} N on a 200 g object -> {d:.1} mm");
    }
    world.apply_perturbation(&Perturbation {
        target_object: 0,
        force: 5.0,
        direction: std::f64::consts::FRAC_PI_2,
        apply_step: 0,
    })?;
    println!("after a 5 N upward kick: cube y = {:.1} mm", world.objects[0].pose.y);

    println!("-- snapshot round-trip");
    let json = world.snapshot_json()?;
    let back = World::from_snapshot_json(&json)?;
    println!("snapshot bytes: {}, poses preserved: {}", json.len(), back == world);
    Ok(())
}
