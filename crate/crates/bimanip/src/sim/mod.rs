//! Planar quasi-static rigid-body world.
//!
//! Two TCP effectors with circular tips push rigid objects on a frictional
//! plane. There is no inertia: objects move only while being pushed.
//!
//! Motion model, per step:
//! 1. each TCP moves by its commanded delta (clamped per axis) in its own frame;
//! 2. per tip-object contact, the *drive* is the new indentation created this
//!    step: `drive = max(0, depth_now - max(depth_before, rest_depth))`;
//! 3. the object translates to absorb the drives (damped simultaneous
//!    resolution, so opposing tips squeeze instead of shoving) and rotates by
//!    `d_theta = kappa * (50 / R)^2 * sum_i cross(r_i, drive_i * push_dir_i)`
//!    where `r_i` is the lever arm from the object centre to the contact
//!    point and `R` the object's bounding radius in mm (the frictional
//!    resistance to rotation grows with the contact patch, so `kappa` is
//!    specified at a 50 mm reference radius);
//! 4. object-object overlap resolves by symmetric rigid separation;
//! 5. any tip indented deeper than `depth_clamp` is retracted to the clamp.
//!
//! A tip therefore carries an object at a steady indentation: pressing
//! deeper than `rest_depth` transfers motion, easing off releases contact.
//! Perturbations displace an object's centre of mass directly through the
//! documented impulse map `disp_mm = k_p * force / (mass_kg * friction)`.

pub mod contact;

pub use contact::{resolve_contact, ContactState, Effector, RigidObject, Shape};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Pose2};

/// Snapshot format version.
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    /// Rotation coupling, rad per mm^2 of (lever x drive).
    pub kappa: f64,
    /// Max sensed/held indentation, mm.
    pub depth_clamp: f64,
    /// Indentation a tip sustains before motion transfers, mm.
    pub rest_depth: f64,
    /// Residual object-object overlap tolerance, mm.
    pub overlap_tol: f64,
    /// Cap on object displacement per total commanded tip translation.
    pub push_gain_max: f64,
    /// Perturbation impulse-to-displacement gain, mm kg / N.
    pub k_p: f64,
    /// Hard reach limit: commanded TCP positions clamp into this rectangle
    /// (the arm stops at its boundary instead of leaving it).
    pub reach: Option<WorkspaceBounds>,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        PhysicsParams {
            kappa: 0.001,
            depth_clamp: 8.0,
            rest_depth: 0.5,
            overlap_tol: 0.1,
            push_gain_max: 1.5,
            k_p: 1.0,
            reach: None,
        }
    }
}

/// Commanded TCP displacement in the TCP's own frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PoseDelta {
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
}

impl PoseDelta {
    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite() && self.dtheta.is_finite()
    }
}

/// A scheduled impulsive force on an object's centre of mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub target_object: usize,
    /// Force magnitude, newtons.
    pub force: f64,
    /// World-frame direction, radians.
    pub direction: f64,
    /// Step index at which the force applies.
    pub apply_step: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkspaceStatus {
    Ok,
    /// The given arm's TCP left its reachable rectangle.
    Violation(usize),
}

/// Reachable rectangle for the TCPs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Full planar world state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub objects: Vec<RigidObject>,
    pub effectors: Vec<Effector>,
    /// Post-step contact per arm (deepest contact across objects).
    pub contacts: Vec<ContactState>,
    pub params: PhysicsParams,
    pub step_count: u64,
}

impl World {
    pub fn new(objects: Vec<RigidObject>, effectors: Vec<Effector>, params: PhysicsParams) -> Self {
        let contacts = vec![ContactState::default(); effectors.len()];
        let mut w = World { objects, effectors, contacts, params, step_count: 0 };
        w.refresh_contacts();
        w
    }

    /// Deepest contact of each tip across all objects.
    fn refresh_contacts(&mut self) {
        for (i, eff) in self.effectors.iter().enumerate() {
            let mut best = ContactState::default();
            for obj in &self.objects {
                let c = resolve_contact(eff, obj, self.params.depth_clamp);
                if c.in_contact && c.depth > best.depth {
                    best = c;
                }
            }
            self.contacts[i] = best;
        }
    }

    /// Advance the world by one commanded step.
    ///
    /// Deterministic given `(self, deltas)`. Wrong arity is a contract error,
    /// non-finite components a domain error.
    pub fn step(&mut self, deltas: &[PoseDelta]) -> Result<()> {
        if deltas.len() != self.effectors.len() {
            return Err(Error::contract(format!(
                "expected {} arm deltas, got {}",
                self.effectors.len(),
                deltas.len()
            )));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::domain("non-finite action component"));
        }

        // depth baselines from the previous step's resolved state
        let depth_before: Vec<Vec<f64>> = self
            .effectors
            .iter()
            .map(|eff| {
                self.objects
                    .iter()
                    .map(|obj| {
                        contact::tip_object_contact(eff.pose.position(), eff.tip_radius, obj)
                            .map_or(0.0, |c| c.depth)
                    })
                    .collect()
            })
            .collect();

        // clamped TCP motion in each tip's own frame
        let mut total_translation = 0.0;
        for (eff, d) in self.effectors.iter_mut().zip(deltas) {
            let dx = d.dx.clamp(-eff.max_step_mm, eff.max_step_mm);
            let dy = d.dy.clamp(-eff.max_step_mm, eff.max_step_mm);
            let dth = d.dtheta.clamp(-eff.max_step_rad, eff.max_step_rad);
            total_translation += (dx * dx + dy * dy).sqrt();
            let mut next = eff.pose.compose(&Pose2::new(dx, dy, dth));
            if let Some(reach) = &self.params.reach {
                next.x = next.x.clamp(reach.x_min, reach.x_max);
                next.y = next.y.clamp(reach.y_min, reach.y_max);
            }
            eff.pose = next;
        }

        self.resolve_pushes(&depth_before, total_translation);
        self.separate_objects();
        self.retract_overdeep_tips();
        self.refresh_contacts();
        self.step_count += 1;
        Ok(())
    }

    /// Translate/rotate each object according to the drives of this step.
    fn resolve_pushes(&mut self, depth_before: &[Vec<f64>], total_translation: f64) {
        let rest = self.params.rest_depth;
        for (oi, obj) in self.objects.iter_mut().enumerate() {
            // frozen contact set after TCP motion
            struct Drive {
                amount: f64,
                dir: [f64; 2], // pushes the object away from the tip
                lever: [f64; 2],
            }
            let mut drives: Vec<Drive> = Vec::new();
            for (ei, eff) in self.effectors.iter().enumerate() {
                if let Some(c) =
                    contact::tip_object_contact(eff.pose.position(), eff.tip_radius, obj)
                {
                    let baseline = depth_before[ei][oi].max(rest);
                    let amount = (c.depth - baseline).max(0.0);
                    if amount > 1e-12 {
                        drives.push(Drive {
                            amount,
                            dir: [-c.normal[0], -c.normal[1]],
                            lever: [c.point[0] - obj.pose.x, c.point[1] - obj.pose.y],
                        });
                    }
                }
            }
            if drives.is_empty() {
                continue;
            }

            // damped simultaneous resolution of the drives
            let mut dp = [0.0, 0.0];
            for _ in 0..64 {
                let mut step = [0.0, 0.0];
                for d in &drives {
                    let residual = d.amount - geom::dot2(dp, d.dir);
                    if residual > 1e-12 {
                        step[0] += 0.5 * residual * d.dir[0];
                        step[1] += 0.5 * residual * d.dir[1];
                    }
                }
                dp[0] += step[0];
                dp[1] += step[1];
                if geom::norm2(step) < 1e-10 {
                    break;
                }
            }

            // displacement cap (slip safeguard)
            let cap = self.params.push_gain_max * total_translation;
            let norm = geom::norm2(dp);
            let mut scale = 1.0;
            if norm > cap {
                scale = if norm > 1e-12 { cap / norm } else { 0.0 };
                dp[0] *= scale;
                dp[1] *= scale;
            }

            // rotation from lever arms of the (scaled) drives
            let mut torque = 0.0;
            for d in &drives {
                let push = [d.amount * scale * d.dir[0], d.amount * scale * d.dir[1]];
                torque += geom::cross2(d.lever, push);
            }
            let dtheta = rotation_gain(self.params.kappa, &obj.shape) * torque;

            obj.pose = Pose2::new(obj.pose.x + dp[0], obj.pose.y + dp[1], obj.pose.theta + dtheta);
        }
    }

    /// Rigid symmetric separation of overlapping objects (no stacking).
    fn separate_objects(&mut self) {
        for _ in 0..8 {
            let mut any = false;
            for i in 0..self.objects.len() {
                for j in (i + 1)..self.objects.len() {
                    let (a, b) = {
                        let (l, r) = self.objects.split_at_mut(j);
                        (&mut l[i], &mut r[0])
                    };
                    if let Some((depth, axis)) = contact::object_overlap(a, b) {
                        if depth > 1e-9 {
                            let half = depth / 2.0;
                            a.pose = Pose2::new(
                                a.pose.x + half * axis[0],
                                a.pose.y + half * axis[1],
                                a.pose.theta,
                            );
                            b.pose = Pose2::new(
                                b.pose.x - half * axis[0],
                                b.pose.y - half * axis[1],
                                b.pose.theta,
                            );
                            any = true;
                        }
                    }
                }
            }
            if !any {
                break;
            }
        }
    }

    /// A tip cannot indent deeper than `depth_clamp`; a stalled arm backs off.
    fn retract_overdeep_tips(&mut self) {
        for _ in 0..4 {
            let mut any = false;
            for eff in self.effectors.iter_mut() {
                for obj in &self.objects {
                    if let Some(c) =
                        contact::tip_object_contact(eff.pose.position(), eff.tip_radius, obj)
                    {
                        let excess = c.depth - self.params.depth_clamp;
                        if excess > 1e-9 {
                            eff.pose = Pose2::new(
                                eff.pose.x + excess * c.normal[0],
                                eff.pose.y + excess * c.normal[1],
                                eff.pose.theta,
                            );
                            any = true;
                        }
                    }
                }
            }
            if !any {
                break;
            }
        }
    }

    /// Apply an impulsive force to an object's centre of mass.
    ///
    /// Displacement follows `disp_mm = k_p * force_newton / (mass_kg * friction)`
    /// along the force direction; heavier or rougher objects move less.
    /// Doubling the force exactly doubles the displacement.
    pub fn apply_perturbation(&mut self, p: &Perturbation) -> Result<()> {
        let obj = self
            .objects
            .get_mut(p.target_object)
            .ok_or_else(|| Error::contract(format!("unknown object id {}", p.target_object)))?;
        if !p.force.is_finite() || !p.direction.is_finite() {
            return Err(Error::domain("non-finite perturbation"));
        }
        let disp = perturbation_displacement_mm(
            self.params.k_p,
            p.force,
            obj.mass_g,
            obj.friction.max(1e-6),
        );
        obj.pose = Pose2::new(
            obj.pose.x + disp * p.direction.cos(),
            obj.pose.y + disp * p.direction.sin(),
            obj.pose.theta,
        );
        self.separate_objects();
        // a perturbed object cannot lodge deeper than the clamp into a tip:
        // slide it back out along the contact normal
        for _ in 0..4 {
            let mut any = false;
            for obj in self.objects.iter_mut() {
                for eff in &self.effectors {
                    if let Some(c) =
                        contact::tip_object_contact(eff.pose.position(), eff.tip_radius, obj)
                    {
                        let excess = c.depth - self.params.depth_clamp;
                        if excess > 1e-9 {
                            obj.pose = Pose2::new(
                                obj.pose.x - excess * c.normal[0],
                                obj.pose.y - excess * c.normal[1],
                                obj.pose.theta,
                            );
                            any = true;
                        }
                    }
                }
            }
            if !any {
                break;
            }
        }
        self.refresh_contacts();
        Ok(())
    }

    /// Flag any TCP outside the reachable rectangle.
    pub fn workspace_check(&self, bounds: &WorkspaceBounds) -> WorkspaceStatus {
        for (i, eff) in self.effectors.iter().enumerate() {
            let p = eff.pose;
            if p.x < bounds.x_min || p.x > bounds.x_max || p.y < bounds.y_min || p.y > bounds.y_max
            {
                return WorkspaceStatus::Violation(i);
            }
        }
        WorkspaceStatus::Ok
    }

    /// Versioned JSON snapshot for replay and debugging.
    pub fn snapshot_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Snap<'a> {
            version: u32,
            world: &'a World,
        }
        Ok(serde_json::to_string_pretty(&Snap { version: SNAPSHOT_VERSION, world: self })?)
    }

    pub fn from_snapshot_json(text: &str) -> Result<World> {
        #[derive(Deserialize)]
        struct Snap {
            version: u32,
            world: World,
        }
        let snap: Snap = serde_json::from_str(text)?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::contract(format!(
                "snapshot version {} not supported (expected {SNAPSHOT_VERSION})",
                snap.version
            )));
        }
        Ok(snap.world)
    }
}

/// Closed form of the perturbation impulse-to-displacement map.
pub fn perturbation_displacement_mm(k_p: f64, force_n: f64, mass_g: f64, friction: f64) -> f64 {
    k_p * force_n / ((mass_g / 1000.0) * friction)
}

/// Effective rotation coupling for a shape: `kappa` is specified at a 50 mm
/// bounding radius; larger objects resist rotation with the square of size.
pub fn rotation_gain(kappa: f64, shape: &Shape) -> f64 {
    let r = shape.bounding_radius().max(1.0);
    kappa * (50.0 / r).powi(2)
}
