//! Shapes and contact geometry: circle-tip vs rectangle/circle penetration
//! and rectangle-rectangle overlap for object separation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Pose2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Axis extents in the body frame: `half_w` along local x, `half_l` along local y.
    Rect { half_w: f64, half_l: f64 },
    Circle { radius: f64 },
}

impl Shape {
    pub fn rect(width_mm: f64, length_mm: f64) -> Result<Shape> {
        if width_mm <= 0.0 || length_mm <= 0.0 {
            return Err(Error::contract(format!(
                "rectangle dimensions must be positive, got {width_mm} x {length_mm}"
            )));
        }
        Ok(Shape::Rect { half_w: width_mm / 2.0, half_l: length_mm / 2.0 })
    }

    pub fn circle(radius_mm: f64) -> Result<Shape> {
        if radius_mm <= 0.0 {
            return Err(Error::contract(format!("circle radius must be positive, got {radius_mm}")));
        }
        Ok(Shape::Circle { radius: radius_mm })
    }

    pub fn bounding_radius(&self) -> f64 {
        match self {
            Shape::Rect { half_w, half_l } => (half_w * half_w + half_l * half_l).sqrt(),
            Shape::Circle { radius } => *radius,
        }
    }
}

/// A rigid object on the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidObject {
    pub shape: Shape,
    pub pose: Pose2,
    pub mass_g: f64,
    pub friction: f64,
}

impl RigidObject {
    pub fn new(shape: Shape, pose: Pose2, mass_g: f64, friction: f64) -> Result<Self> {
        if mass_g <= 0.0 {
            return Err(Error::contract(format!("mass must be positive, got {mass_g} g")));
        }
        if friction < 0.0 {
            return Err(Error::contract(format!("friction must be >= 0, got {friction}")));
        }
        Ok(RigidObject { shape, pose, mass_g, friction })
    }
}

/// A velocity-commanded TCP with a circular tip footprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Effector {
    pub pose: Pose2,
    pub tip_radius: f64,
    /// Per-step translation clamp per axis, mm.
    pub max_step_mm: f64,
    /// Per-step rotation clamp, rad.
    pub max_step_rad: f64,
}

/// Contact between a tip and an object surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactState {
    pub in_contact: bool,
    /// Indentation depth, mm; positive iff in contact, clamped by the caller.
    pub depth: f64,
    /// Signed angle between the tip axis and the inward surface normal, rad.
    pub tilt: f64,
    /// Nearest point on the object surface, world frame.
    pub point: [f64; 2],
    /// Outward unit surface normal (object surface toward the tip).
    pub normal: [f64; 2],
}

impl Default for ContactState {
    fn default() -> Self {
        ContactState { in_contact: false, depth: 0.0, tilt: 0.0, point: [0.0, 0.0], normal: [1.0, 0.0] }
    }
}

/// Unclamped circle-vs-shape penetration. `None` when separated.
pub(crate) struct RawContact {
    pub depth: f64,
    /// Outward unit normal of the object surface at the contact.
    pub normal: [f64; 2],
    pub point: [f64; 2],
}

pub(crate) fn tip_object_contact(
    tip_center: [f64; 2],
    tip_radius: f64,
    object: &RigidObject,
) -> Option<RawContact> {
    match object.shape {
        Shape::Circle { radius } => {
            let c = object.pose.position();
            let d = geom::point_dist(tip_center, c);
            let depth = tip_radius + radius - d;
            if depth <= 0.0 {
                return None;
            }
            let normal = if d > 1e-12 {
                [(tip_center[0] - c[0]) / d, (tip_center[1] - c[1]) / d]
            } else {
                [1.0, 0.0]
            };
            Some(RawContact {
                depth,
                normal,
                point: [c[0] + radius * normal[0], c[1] + radius * normal[1]],
            })
        }
        Shape::Rect { half_w, half_l } => {
            let local = object.pose.inverse_transform_point(tip_center);
            let cx = local[0].clamp(-half_w, half_w);
            let cy = local[1].clamp(-half_l, half_l);
            let dx = local[0] - cx;
            let dy = local[1] - cy;
            let dist = (dx * dx + dy * dy).sqrt();
            if dist > 1e-12 {
                // centre outside the rectangle
                let depth = tip_radius - dist;
                if depth <= 0.0 {
                    return None;
                }
                let n_local = [dx / dist, dy / dist];
                Some(RawContact {
                    depth,
                    normal: object.pose.rotate_vec(n_local),
                    point: object.pose.transform_point([cx, cy]),
                })
            } else {
                // centre inside: nearest face
                let to_xp = half_w - local[0];
                let to_xm = local[0] + half_w;
                let to_yp = half_l - local[1];
                let to_ym = local[1] + half_l;
                let (inside, n_local, p_local) = [
                    (to_xp, [1.0, 0.0], [half_w, local[1]]),
                    (to_xm, [-1.0, 0.0], [-half_w, local[1]]),
                    (to_yp, [0.0, 1.0], [local[0], half_l]),
                    (to_ym, [0.0, -1.0], [local[0], -half_l]),
                ]
                .into_iter()
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap();
                Some(RawContact {
                    depth: tip_radius + inside,
                    normal: object.pose.rotate_vec(n_local),
                    point: object.pose.transform_point(p_local),
                })
            }
        }
    }
}

/// Exact circle-vs-object contact with depth clamped to `depth_clamp` and
/// the tilt derived from the effector heading vs the inward normal.
pub fn resolve_contact(
    effector: &Effector,
    object: &RigidObject,
    depth_clamp: f64,
) -> ContactState {
    match tip_object_contact(effector.pose.position(), effector.tip_radius, object) {
        None => ContactState::default(),
        Some(raw) => {
            let inward = (-raw.normal[1]).atan2(-raw.normal[0]);
            ContactState {
                in_contact: true,
                depth: raw.depth.min(depth_clamp),
                tilt: crate::geom::wrap(effector.pose.theta - inward),
                point: raw.point,
                normal: raw.normal,
            }
        }
    }
}

/// Minimum translation to separate two objects: `(depth, axis)` where moving
/// `a` by `+depth/2 * axis` and `b` by `-depth/2 * axis` resolves the overlap.
pub(crate) fn object_overlap(a: &RigidObject, b: &RigidObject) -> Option<(f64, [f64; 2])> {
    match (&a.shape, &b.shape) {
        (Shape::Circle { radius: ra }, Shape::Circle { radius: rb }) => {
            let pa = a.pose.position();
            let pb = b.pose.position();
            let d = geom::point_dist(pa, pb);
            let depth = ra + rb - d;
            if depth <= 0.0 {
                return None;
            }
            let axis = if d > 1e-12 {
                [(pa[0] - pb[0]) / d, (pa[1] - pb[1]) / d]
            } else {
                [1.0, 0.0]
            };
            Some((depth, axis))
        }
        (Shape::Circle { radius }, Shape::Rect { .. }) => {
            let raw = tip_object_contact(a.pose.position(), *radius, b)?;
            Some((raw.depth, raw.normal))
        }
        (Shape::Rect { .. }, Shape::Circle { radius }) => {
            let raw = tip_object_contact(b.pose.position(), *radius, a)?;
            Some((raw.depth, [-raw.normal[0], -raw.normal[1]]))
        }
        (Shape::Rect { .. }, Shape::Rect { .. }) => rect_rect_overlap(a, b),
    }
}

/// Separating-axis test for two oriented rectangles.
fn rect_rect_overlap(a: &RigidObject, b: &RigidObject) -> Option<(f64, [f64; 2])> {
    let corners = |o: &RigidObject| -> [[f64; 2]; 4] {
        let (hw, hl) = match o.shape {
            Shape::Rect { half_w, half_l } => (half_w, half_l),
            _ => unreachable!(),
        };
        [
            o.pose.transform_point([hw, hl]),
            o.pose.transform_point([-hw, hl]),
            o.pose.transform_point([-hw, -hl]),
            o.pose.transform_point([hw, -hl]),
        ]
    };
    let ca = corners(a);
    let cb = corners(b);
    let axes = [
        a.pose.rotate_vec([1.0, 0.0]),
        a.pose.rotate_vec([0.0, 1.0]),
        b.pose.rotate_vec([1.0, 0.0]),
        b.pose.rotate_vec([0.0, 1.0]),
    ];
    let mut best: Option<(f64, [f64; 2])> = None;
    for axis in axes {
        let proj = |cs: &[[f64; 2]; 4]| -> (f64, f64) {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for c in cs {
                let p = geom::dot2(*c, axis);
                lo = lo.min(p);
                hi = hi.max(p);
            }
            (lo, hi)
        };
        let (alo, ahi) = proj(&ca);
        let (blo, bhi) = proj(&cb);
        let overlap = ahi.min(bhi) - alo.max(blo);
        if overlap <= 0.0 {
            return None;
        }
        // orient the axis from b toward a
        let centred = geom::dot2([a.pose.x - b.pose.x, a.pose.y - b.pose.y], axis);
        let oriented = if centred >= 0.0 { axis } else { [-axis[0], -axis[1]] };
        if best.map_or(true, |(d, _)| overlap < d) {
            best = Some((overlap, oriented));
        }
    }
    best
}
