//! Synthetic tactile frames over the calibrated depth and tilt ranges,
//! dumped as PGM images for visual inspection.
//!
//! ```bash
//! cargo run --example tactile_rendering [out_dir]
//! ```

use bimanip::sim::ContactState;
use bimanip::tactile::{render_tactile, TactileParams};

fn main() -> bimanip::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/tactile".into());
    std::fs::create_dir_all(&out)?;
    let params = TactileParams::default();

    let contact = |depth: f64, tilt_deg: f64| ContactState {
        in_contact: depth > 0.0,
        depth,
        tilt: tilt_deg.to_radians(),
        point: [0.0, 0.0],
        normal: [1.0, 0.0],
    };

    println!("depth sweep at zero tilt (pixel sum grows monotonically):");
    for depth in [0.5, 1.0, 2.0, 4.0, 6.0, 8.0] {
        let img = render_tactile(&contact(depth, 0.0), &params, None)?;
        let path = format!("{out}/depth_{depth:.1}mm.pgm");
        std::fs::write(&path, img.to_pgm())?;
        println!("  {depth:.1} mm -> sum {:8.2}  ({path})", img.sum());
    }

    println!("tilt sweep at 4 mm (first moment tracks the tilt sign):");
    for tilt in [-30.0, -15.0, 0.0, 15.0, 30.0] {
        let img = render_tactile(&contact(4.0, tilt), &params, None)?;
        let path = format!("{out}/tilt_{tilt:+.0}deg.pgm");
        std::fs::write(&path, img.to_pgm())?;
        println!("  {tilt:+5.1} deg -> moment {:+9.2}  ({path})", img.moment_x(params.tip_radius));
    }
    Ok(())
}
