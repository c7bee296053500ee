//! The goal-update mechanism in isolation: equally spaced points along a
//! target line between two anchors and the per-object subgoal assignment.
//!
//! ```bash
//! cargo run --example subgoal_lines
//! ```

use bimanip::tasks::{gum_build, AnchorMode};

fn main() -> bimanip::Result<()> {
    // canonical line: anchors 180 mm apart, ten points, 20 mm spacing
    let objects = [[-90.0, 0.0], [90.0, 0.0]];
    let g = gum_build(AnchorMode::ObjectCentres, objects[0], objects[1], 10, &objects)?;
    println!("line angle {:.2} rad, points:", g.theta_c);
    for (i, p) in g.points.iter().enumerate() {
        let mark = if g.assigned.contains(&i) { " <- assigned" } else { "" };
        println!("  [{i}] ({:6.1}, {:6.1}){mark}", p[0], p[1]);
    }

    // objects that have made progress get subgoals ahead of them
    let moved = [[-38.0, 4.0], [52.0, -3.0]];
    let g = gum_build(AnchorMode::ObjectCentres, moved[0], moved[1], 10, &moved)?;
    println!(
        "after progress: object 1 -> point {} at ({:.1}, {:.1}); object 2 -> point {} at ({:.1}, {:.1})",
        g.assigned[0],
        g.subgoal(0)[0],
        g.subgoal(0)[1],
        g.assigned[1],
        g.subgoal(1)[0],
        g.subgoal(1)[1],
    );

    // coincident anchors cannot define a line
    let err = gum_build(AnchorMode::Tcps, [5.0, 5.0], [5.0, 5.0], 10, &moved);
    println!("degenerate anchors -> {err:?}");
    Ok(())
}
