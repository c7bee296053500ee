//! Synthetic tactile sensing.
//!
//! Each tip renders its contact as a small depth image: a flat surface
//! indenting a spherical dome. Pixel `(u, v)` covers physical coordinates
//! `(x_u, y_v)` on the dome's tangent plane and reads
//!
//! ```text
//! clamp01( (depth + tan(tilt) * x_u - dome(x_u, y_v)) / max_depth )
//! ```
//!
//! where `dome(x, y) = r - sqrt(r^2 - x^2 - y^2)` is the spherical-cap sag.
//! No contact renders an all-zero image. Depth is clamped to the sensing
//! range and tilt to the calibrated band before rendering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::sim::ContactState;

/// Renderer parameters (derived from config at env construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TactileParams {
    pub grid: usize,
    /// Dome (tip) radius, mm; also the half-extent of the imaged patch.
    pub tip_radius: f64,
    /// Depth mapped to pixel value 1.0, mm.
    pub max_depth: f64,
    /// Tilt clamp, rad.
    pub max_tilt: f64,
    /// Additive Gaussian pixel noise std (0 disables).
    pub noise_std: f64,
}

impl TactileParams {
    pub fn from_config(cfg: &crate::config::TactileConfig, tip_radius: f64) -> Self {
        TactileParams {
            grid: cfg.grid as usize,
            tip_radius,
            max_depth: cfg.max_depth_mm,
            max_tilt: cfg.max_tilt_deg.to_radians(),
            noise_std: cfg.noise_std,
        }
    }
}

impl Default for TactileParams {
    fn default() -> Self {
        TactileParams { grid: 32, tip_radius: 15.0, max_depth: 8.0, max_tilt: 30f64.to_radians(), noise_std: 0.0 }
    }
}

/// A single sensor frame: `grid x grid` values in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TactileImage {
    pub grid: usize,
    pub pixels: Vec<f64>,
}

impl TactileImage {
    pub fn zeros(grid: usize) -> Self {
        TactileImage { grid, pixels: vec![0.0; grid * grid] }
    }

    pub fn pixel(&self, u: usize, v: usize) -> f64 {
        self.pixels[v * self.grid + u]
    }

    pub fn sum(&self) -> f64 {
        self.pixels.iter().sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.pixels.iter().all(|&p| p == 0.0)
    }

    /// First moment of intensity along the x (tilt) axis, mm.
    pub fn moment_x(&self, tip_radius: f64) -> f64 {
        let g = self.grid;
        let mut m = 0.0;
        for v in 0..g {
            for u in 0..g {
                m += self.pixel(u, v) * pixel_coord(u, g, tip_radius);
            }
        }
        m
    }

    /// Binary PGM (P5) dump, 8-bit grayscale.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.grid, self.grid).into_bytes();
        out.extend(self.pixels.iter().map(|&p| (p.clamp(0.0, 1.0) * 255.0).round() as u8));
        out
    }
}

/// Physical coordinate of pixel index `i` in a `grid`-wide image spanning
/// `[-tip_radius, tip_radius]`, sampled at pixel centres.
#[inline]
fn pixel_coord(i: usize, grid: usize, tip_radius: f64) -> f64 {
    let t = (i as f64 + 0.5) / grid as f64; // (0, 1)
    (2.0 * t - 1.0) * tip_radius
}

/// Render one contact into a depth image.
///
/// Deterministic; when `noise` is provided, adds per-pixel Gaussian noise
/// from that stream (contact frames only) and re-clamps.
pub fn render_tactile(
    contact: &ContactState,
    params: &TactileParams,
    mut noise: Option<&mut SeededRng>,
) -> Result<TactileImage> {
    if !contact.depth.is_finite() || !contact.tilt.is_finite() {
        return Err(Error::domain("non-finite contact fields"));
    }
    let g = params.grid;
    if !contact.in_contact || contact.depth <= 0.0 {
        return Ok(TactileImage::zeros(g));
    }
    let depth = contact.depth.clamp(0.0, params.max_depth);
    let tilt = contact.tilt.clamp(-params.max_tilt, params.max_tilt);
    let slope = tilt.tan();
    let r = params.tip_radius;
    let mut img = TactileImage::zeros(g);
    for v in 0..g {
        let y = pixel_coord(v, g, r);
        for u in 0..g {
            let x = pixel_coord(u, g, r);
            let rho2 = x * x + y * y;
            if rho2 >= r * r {
                continue; // outside the dome footprint
            }
            let sag = r - (r * r - rho2).sqrt();
            let indent = depth + slope * x - sag;
            let mut p = (indent / params.max_depth).clamp(0.0, 1.0);
            if let Some(rng) = noise.as_deref_mut() {
                if params.noise_std > 0.0 {
                    p = (p + rng.normal(0.0, params.noise_std)).clamp(0.0, 1.0);
                }
            }
            img.pixels[v * g + u] = p;
        }
    }
    Ok(img)
}

/// Two sensor frames in a fixed (left, right) order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TactileObs {
    pub left: TactileImage,
    pub right: TactileImage,
    /// Concatenation order tag; constant across a run.
    pub layout: &'static str,
}

pub const TACTILE_LAYOUT: &str = "left-right";

impl TactileObs {
    pub fn new(left: TactileImage, right: TactileImage) -> Self {
        TactileObs { left, right, layout: TACTILE_LAYOUT }
    }
}

/// Flatten `left grid || right grid || proprio` into one observation vector.
///
/// `expected_proprio` guards the task's fixed layout.
pub fn make_observation(
    tactile: &TactileObs,
    proprio: &[f64],
    expected_proprio: usize,
) -> Result<Vec<f64>> {
    if proprio.len() != expected_proprio {
        return Err(Error::contract(format!(
            "proprio length {} does not match the task layout {}",
            proprio.len(),
            expected_proprio
        )));
    }
    let mut obs =
        Vec::with_capacity(tactile.left.pixels.len() + tactile.right.pixels.len() + proprio.len());
    obs.extend_from_slice(&tactile.left.pixels);
    obs.extend_from_slice(&tactile.right.pixels);
    obs.extend_from_slice(proprio);
    Ok(obs)
}
