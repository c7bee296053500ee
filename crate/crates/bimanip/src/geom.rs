//! Planar poses and the angular metric shared by every other module.
//!
//! Conventions: millimetres and radians everywhere; angles wrap to
//! `(-pi, pi]` with `-pi` mapping to `+pi` so equality tests are unambiguous.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Wrap an angle into `(-pi, pi]`. Internal, assumes a finite input.
#[inline]
pub(crate) fn wrap(theta: f64) -> f64 {
    debug_assert!(theta.is_finite());
    let t = theta.rem_euclid(2.0 * PI); // [0, 2*pi)
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Wrap an angle into `(-pi, pi]`; `-pi` maps to `+pi`.
pub fn wrap_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::domain(format!("wrap_angle: non-finite input {theta}")));
    }
    Ok(wrap(theta))
}

/// Cosine distance between two angles: `1 - cos(phi - psi)`, in `[0, 2]`.
///
/// Symmetric and 2*pi-periodic in both arguments.
pub fn angle_dist(phi: f64, psi: f64) -> Result<f64> {
    if !phi.is_finite() || !psi.is_finite() {
        return Err(Error::domain(format!(
            "angle_dist: non-finite input ({phi}, {psi})"
        )));
    }
    Ok(1.0 - (phi - psi).cos())
}

/// Unchecked variant for hot paths where inputs are already validated.
#[inline]
pub(crate) fn angle_dist_raw(phi: f64, psi: f64) -> f64 {
    1.0 - (phi - psi).cos()
}

/// A planar pose: position in millimetres, heading in radians.
///
/// `theta` is always in `(-pi, pi]` after construction or any operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose2 { x, y, theta: wrap(theta) }
    }

    pub fn identity() -> Self {
        Pose2 { x: 0.0, y: 0.0, theta: 0.0 }
    }

    /// SE(2) composition: `self` then `other` expressed in `self`'s frame.
    pub fn compose(&self, other: &Pose2) -> Pose2 {
        let (s, c) = self.theta.sin_cos();
        Pose2 {
            x: self.x + c * other.x - s * other.y,
            y: self.y + s * other.x + c * other.y,
            theta: wrap(self.theta + other.theta),
        }
    }

    /// SE(2) inverse: `compose(p, p.inverse())` is the identity.
    pub fn inverse(&self) -> Pose2 {
        let (s, c) = self.theta.sin_cos();
        Pose2 {
            x: -(c * self.x + s * self.y),
            y: s * self.x - c * self.y,
            theta: wrap(-self.theta),
        }
    }

    /// Map a point from this pose's local frame to the world frame.
    pub fn transform_point(&self, local: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [
            self.x + c * local[0] - s * local[1],
            self.y + s * local[0] + c * local[1],
        ]
    }

    /// Map a world point into this pose's local frame.
    pub fn inverse_transform_point(&self, world: [f64; 2]) -> [f64; 2] {
        let dx = world[0] - self.x;
        let dy = world[1] - self.y;
        let (s, c) = self.theta.sin_cos();
        [c * dx + s * dy, -s * dx + c * dy]
    }

    /// Rotate a direction vector from local into world coordinates.
    pub fn rotate_vec(&self, local: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c * local[0] - s * local[1], s * local[0] + c * local[1]]
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    /// Euclidean distance between the positions of two poses.
    pub fn distance_to(&self, other: &Pose2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Euclidean norm of the difference of two points.
#[inline]
pub fn point_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// z-component of the 2D cross product `a x b`.
#[inline]
pub fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm2(a: [f64; 2]) -> f64 {
    (a[0] * a[0] + a[1] * a[1]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn angle_dist_identity_antipodal_quarter() {
        assert_eq!(angle_dist(0.3, 0.3).unwrap(), 0.0);
        assert!((angle_dist(0.0, PI).unwrap() - 2.0).abs() < 1e-12);
        assert!((angle_dist(PI / 2.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angle_dist_rejects_non_finite() {
        assert!(angle_dist(f64::NAN, 0.0).is_err());
        assert!(angle_dist(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn wrap_angle_boundaries() {
        assert!((wrap_angle(3.0 * PI).unwrap() - PI).abs() < 1e-12);
        assert_eq!(wrap_angle(-PI).unwrap(), PI);
        assert_eq!(wrap_angle(0.5).unwrap(), 0.5);
        assert!(wrap_angle(f64::NAN).is_err());
    }

    #[test]
    fn wrap_angle_idempotent() {
        for i in 0..1000 {
            let t = -50.0 + 0.1 * i as f64;
            let w = wrap_angle(t).unwrap();
            assert_eq!(wrap_angle(w).unwrap(), w);
            assert!(w > -PI && w <= PI);
            // equivalent modulo 2*pi
            assert!(((t - w) / (2.0 * PI) - ((t - w) / (2.0 * PI)).round()).abs() < 1e-9);
        }
    }

    #[test]
    fn compose_identity_and_quarter_turn() {
        let p = Pose2::new(3.0, -4.0, 0.7);
        let id = Pose2::identity();
        let q = id.compose(&p);
        assert!((q.x - p.x).abs() < TOL && (q.y - p.y).abs() < TOL);

        let inv = Pose2::new(1.0, 0.0, 0.0).inverse();
        assert!((inv.x + 1.0).abs() < TOL && inv.y.abs() < TOL && inv.theta.abs() < TOL);

        let r = Pose2::new(0.0, 0.0, PI / 2.0).compose(&Pose2::new(1.0, 0.0, 0.0));
        assert!(r.x.abs() < TOL);
        assert!((r.y - 1.0).abs() < TOL);
        assert!((r.theta - PI / 2.0).abs() < TOL);
    }

    fn arb_pose() -> impl Strategy<Value = Pose2> {
        (-500.0..500.0f64, -500.0..500.0f64, -10.0..10.0f64)
            .prop_map(|(x, y, t)| Pose2::new(x, y, t))
    }

    proptest! {
        #[test]
        fn se2_group_axioms(a in arb_pose(), b in arb_pose(), c in arb_pose()) {
            // identity
            let id = Pose2::identity();
            let ai = a.compose(&id);
            prop_assert!((ai.x - a.x).abs() < TOL && (ai.y - a.y).abs() < TOL);
            // inverse
            let e = a.compose(&a.inverse());
            prop_assert!(e.x.abs() < TOL && e.y.abs() < TOL && wrap(e.theta).abs() < TOL);
            // associativity
            let l = a.compose(&b).compose(&c);
            let r = a.compose(&b.compose(&c));
            prop_assert!((l.x - r.x).abs() < TOL);
            prop_assert!((l.y - r.y).abs() < TOL);
            prop_assert!(wrap(l.theta - r.theta).abs() < TOL);
        }

        #[test]
        fn angle_dist_symmetric_periodic(phi in -10.0..10.0f64, psi in -10.0..10.0f64, k in -3i32..4) {
            let d1 = angle_dist(phi, psi).unwrap();
            let d2 = angle_dist(psi, phi).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
            let d3 = angle_dist(phi + 2.0 * PI * k as f64, psi).unwrap();
            prop_assert!((d1 - d3).abs() < 1e-11);
            prop_assert!((0.0..=2.0 + 1e-15).contains(&d1));
        }

        #[test]
        fn transform_roundtrip(p in arb_pose(), x in -300.0..300.0f64, y in -300.0..300.0f64) {
            let w = p.transform_point([x, y]);
            let l = p.inverse_transform_point(w);
            prop_assert!((l[0] - x).abs() < 1e-9);
            prop_assert!((l[1] - y).abs() < 1e-9);
        }
    }
}
