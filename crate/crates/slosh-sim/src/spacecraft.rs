//! Rigid-body spacecraft state and Newton–Euler dynamics.

use crate::error::SimError;
use crate::scalar::Real;
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

/// Rigid-body pose and rates. The rotation angle is left unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacecraftState<S: Real> {
    pub position: Vec2<S>,
    pub theta: S,
    pub velocity: Vec2<S>,
    pub omega: S,
}

impl<S: Real> SpacecraftState<S> {
    pub fn at_rest() -> Self {
        SpacecraftState {
            position: Vec2::zero(),
            theta: S::zero(),
            velocity: Vec2::zero(),
            omega: S::zero(),
        }
    }

    pub fn is_finite_val(&self) -> bool {
        self.position.is_finite_val()
            && self.theta.is_finite_val()
            && self.velocity.is_finite_val()
            && self.omega.is_finite_val()
    }
}

impl SpacecraftState<f64> {
    pub fn lift<S: Real>(&self) -> SpacecraftState<S> {
        SpacecraftState {
            position: Vec2::from_f64(self.position.x, self.position.y),
            theta: S::from_f64(self.theta),
            velocity: Vec2::from_f64(self.velocity.x, self.velocity.y),
            omega: S::from_f64(self.omega),
        }
    }
}

/// Physical satellite parameters (Table-1 schema).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacecraftParams {
    pub mass: f64,
    pub inertia: f64,
    pub tank_radius: f64,
    /// Tank centre expressed in the body frame.
    pub tank_center_body: [f64; 2],
    /// Fraction of the tank cross-section available to the fluid.
    pub fill_ratio: f64,
}

impl SpacecraftParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let checks = [
            (self.mass > 0.0, "mass must be > 0"),
            (self.inertia > 0.0, "inertia must be > 0"),
            (self.tank_radius > 0.0, "tank_radius must be > 0"),
            (
                self.fill_ratio > 0.0 && self.fill_ratio < 1.0,
                "fill_ratio must be in (0, 1)",
            ),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(SimError::Config(msg.to_string()));
            }
        }
        Ok(())
    }

    pub fn tank_center_body_vec(&self) -> Vec2<f64> {
        Vec2::new(self.tank_center_body[0], self.tank_center_body[1])
    }
}

/// Thruster force and torque applied at the centre of mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlInput<S: Real> {
    pub force: Vec2<S>,
    pub torque: S,
}

impl<S: Real> ControlInput<S> {
    pub fn zero() -> Self {
        ControlInput {
            force: Vec2::zero(),
            torque: S::zero(),
        }
    }

    pub fn new(ux: S, uy: S, tau: S) -> Self {
        ControlInput {
            force: Vec2::new(ux, uy),
            torque: tau,
        }
    }
}

impl ControlInput<f64> {
    pub fn from_array(u: [f64; 3]) -> Self {
        ControlInput::new(u[0], u[1], u[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.force.x, self.force.y, self.torque]
    }

    pub fn lift<S: Real>(&self) -> ControlInput<S> {
        ControlInput {
            force: Vec2::from_f64(self.force.x, self.force.y),
            torque: S::from_f64(self.torque),
        }
    }
}

/// Newton–Euler equations of planar motion:
/// `m r̈ = Σ F_g + F_ext` and `J θ̈ = Σ (r_g − r) × F_g + T_ext`,
/// where `F_g` are the per-ghost reaction forces from the fluid.
pub fn rigid_body_acceleration<S: Real>(
    ghost_reaction_forces: &[Vec2<S>],
    ghost_world_positions: &[Vec2<S>],
    sc: &SpacecraftState<S>,
    params: &SpacecraftParams,
    u: &ControlInput<S>,
) -> (Vec2<S>, S) {
    let mut force = u.force;
    let mut torque = u.torque;
    for (f, pos) in ghost_reaction_forces.iter().zip(ghost_world_positions) {
        force += *f;
        let arm = *pos - sc.position;
        torque = torque + arm.cross(*f);
    }
    let inv_m = S::from_f64(1.0 / params.mass);
    let inv_j = S::from_f64(1.0 / params.inertia);
    (force.scale(inv_m), torque * inv_j)
}
