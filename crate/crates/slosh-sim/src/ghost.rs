//! Ghost boundary particles and their kinematic coupling to the rigid body.
//!
//! The tank wall is sampled by a single layer of ghost particles whose
//! positions are fixed in the body frame. World-frame snapshots follow the
//! spacecraft pose.

use crate::error::SimError;
use crate::scalar::Real;
use crate::spacecraft::SpacecraftState;
use crate::vec2::Vec2;

/// Single-layer boundary particle set.
#[derive(Debug, Clone)]
pub struct GhostLayer<S: Real> {
    /// Positions fixed in the body frame; constant after construction.
    pub body_positions: Vec<Vec2<f64>>,
    /// World-frame positions for the current pose.
    pub world_positions: Vec<Vec2<S>>,
    /// World-frame velocities for the current pose and rates.
    pub world_velocities: Vec<Vec2<S>>,
    pub mass_per_particle: f64,
}

impl<S: Real> GhostLayer<S> {
    pub fn len(&self) -> usize {
        self.body_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body_positions.is_empty()
    }

    /// Refresh world positions and velocities from the spacecraft pose:
    /// `r_g = R(θ) r_g^B + r` and `ṙ_g = ṙ + θ̇ × (r_g − r)`.
    pub fn update_kinematics(&mut self, sc: &SpacecraftState<S>) {
        let (sin_t, cos_t) = (sc.theta.sin(), sc.theta.cos());
        for (i, body) in self.body_positions.iter().enumerate() {
            let bx = S::from_f64(body.x);
            let by = S::from_f64(body.y);
            let rel = Vec2::new(cos_t * bx - sin_t * by, sin_t * bx + cos_t * by);
            self.world_positions[i] = rel + sc.position;
            self.world_velocities[i] = sc.velocity + Vec2::rot_cross(sc.omega, rel);
        }
    }
}

impl GhostLayer<f64> {
    /// Build a ghost layer from explicit body-frame positions; world frame is
    /// initialized at the identity pose.
    pub fn from_body_positions(body_positions: Vec<Vec2<f64>>, mass_per_particle: f64) -> Self {
        let world_positions = body_positions.clone();
        let world_velocities = vec![Vec2::zero(); body_positions.len()];
        GhostLayer {
            body_positions,
            world_positions,
            world_velocities,
            mass_per_particle,
        }
    }

    /// Uniformly sample a circle of radius `radius` centred at `center`
    /// (body frame) with `count` ghost particles.
    ///
    /// The arc spacing must not exceed the fluid particle length, otherwise
    /// fluid particles can slip between wall samples.
    pub fn circle(
        center: Vec2<f64>,
        radius: f64,
        count: usize,
        mass_per_particle: f64,
        max_spacing: f64,
    ) -> Result<Self, SimError> {
        if count == 0 || radius <= 0.0 {
            return Err(SimError::Config(
                "ghost circle needs count > 0 and radius > 0".into(),
            ));
        }
        let spacing = 2.0 * std::f64::consts::PI * radius / count as f64;
        if spacing > max_spacing {
            return Err(SimError::Config(format!(
                "ghost arc spacing {spacing:.4} m exceeds fluid particle length {max_spacing:.4} m"
            )));
        }
        let body = (0..count)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                center + Vec2::new(radius * phi.cos(), radius * phi.sin())
            })
            .collect();
        Ok(Self::from_body_positions(body, mass_per_particle))
    }

    /// Lift into another scalar type with constant entries; world-frame data
    /// must be refreshed with `update_kinematics` afterwards.
    pub fn lift<S: Real>(&self) -> GhostLayer<S> {
        GhostLayer {
            body_positions: self.body_positions.clone(),
            world_positions: self
                .world_positions
                .iter()
                .map(|p| Vec2::from_f64(p.x, p.y))
                .collect(),
            world_velocities: self
                .world_velocities
                .iter()
                .map(|v| Vec2::from_f64(v.x, v.y))
                .collect(),
            mass_per_particle: self.mass_per_particle,
        }
    }
}
