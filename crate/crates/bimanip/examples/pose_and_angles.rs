//! Planar pose algebra and the angular metric used by every reward term.
//!
//! ```bash
//! cargo run --example pose_and_angles
//! ```

use bimanip::geom::{angle_dist, wrap_angle, Pose2};

fn main() -> bimanip::Result<()> {
    // the angular metric: 1 - cos(phi - psi), in [0, 2]
    for (phi, psi) in [(0.3, 0.3), (0.0, std::f64::consts::PI), (1.5, -1.5)] {
        println!("S({phi:5.2}, {psi:5.2}) = {:.6}", angle_dist(phi, psi)?);
    }

    // wrapping convention: (-pi, pi], -pi maps to +pi
    for theta in [3.0 * std::f64::consts::PI, -std::f64::consts::PI, 0.5] {
        println!("wrap({theta:8.4}) = {:8.4}", wrap_angle(theta)?);
    }

    // poses compose like rigid transforms
    let arm_base = Pose2::new(0.0, -350.0, std::f64::consts::FRAC_PI_2);
    let tool_in_base = Pose2::new(120.0, 30.0, 0.1);
    let tool = arm_base.compose(&tool_in_base);
    println!("tool in world: ({:.1}, {:.1}, {:.3})", tool.x, tool.y, tool.theta);

    let back = arm_base.inverse().compose(&tool);
    println!(
        "recovered in base frame: ({:.1}, {:.1}, {:.3})",
        back.x, back.y, back.theta
    );

    // a world point seen from the tool
    let p = tool.inverse_transform_point([0.0, 0.0]);
    println!("world origin in tool frame: ({:.1}, {:.1})", p[0], p[1]);
    Ok(())
}
