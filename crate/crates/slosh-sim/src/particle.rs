//! Fluid particle state and fluid parameters.

use crate::error::SimError;
use crate::scalar::Real;
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

/// Structure-of-arrays fluid particle field.
///
/// Positions and velocities are the dynamic state; densities and pressures
/// are derived fields refreshed by the solver each evaluation.
#[derive(Debug, Clone)]
pub struct ParticleField<S: Real> {
    pub positions: Vec<Vec2<S>>,
    pub velocities: Vec<Vec2<S>>,
    pub mass_per_particle: f64,
    pub densities: Vec<S>,
    pub pressures: Vec<S>,
}

impl<S: Real> ParticleField<S> {
    pub fn new(positions: Vec<Vec2<S>>, velocities: Vec<Vec2<S>>, mass_per_particle: f64) -> Self {
        assert_eq!(positions.len(), velocities.len());
        let n = positions.len();
        ParticleField {
            positions,
            velocities,
            mass_per_particle,
            densities: vec![S::zero(); n],
            pressures: vec![S::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn max_speed(&self) -> f64 {
        self.velocities
            .iter()
            .map(|v| v.val().norm())
            .fold(0.0, f64::max)
    }
}

impl ParticleField<f64> {
    /// Lift an `f64` field into another scalar type with constant (zero-
    /// derivative) entries.
    pub fn lift<S: Real>(&self) -> ParticleField<S> {
        ParticleField {
            positions: self
                .positions
                .iter()
                .map(|p| Vec2::from_f64(p.x, p.y))
                .collect(),
            velocities: self
                .velocities
                .iter()
                .map(|v| Vec2::from_f64(v.x, v.y))
                .collect(),
            mass_per_particle: self.mass_per_particle,
            densities: vec![S::zero(); self.len()],
            pressures: vec![S::zero(); self.len()],
        }
    }
}

/// Physical fluid parameters (Table-2 schema).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    /// Rest density ρ₀ (kg/m² in 2D).
    pub rest_density: f64,
    /// Stiffness coefficient k of the state equation P = k(ρ − ρ₀).
    pub stiffness: f64,
    /// Artificial-viscosity factor α for fluid-fluid interactions.
    pub viscous_factor: f64,
    /// Viscosity factor β between fluid and the solid boundary.
    pub boundary_viscous_factor: f64,
    /// Boundary density correcting factor γ₁.
    pub gamma1: f64,
    /// Singularity-regularization ε in the viscous denominators.
    pub epsilon: f64,
    /// Side length of a fluid particle footprint (m); sets the particle mass
    /// m = ρ₀ · particle_length².
    pub particle_length: f64,
    /// Clamp negative pressures to zero before force evaluation.
    #[serde(default)]
    pub clamp_negative_pressure: bool,
}

impl FluidParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let checks = [
            (self.rest_density > 0.0, "rest_density must be > 0"),
            (self.stiffness > 0.0, "stiffness must be > 0"),
            (self.viscous_factor >= 0.0, "viscous_factor must be >= 0"),
            (
                self.boundary_viscous_factor >= 0.0,
                "boundary_viscous_factor must be >= 0",
            ),
            (
                self.gamma1 > 0.0 && self.gamma1 <= 1.0,
                "gamma1 must be in (0, 1]",
            ),
            (self.epsilon > 0.0, "epsilon must be > 0"),
            (self.particle_length > 0.0, "particle_length must be > 0"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(SimError::Config(msg.to_string()));
            }
        }
        Ok(())
    }

    /// Particle mass consistent with the rest density and footprint.
    pub fn particle_mass(&self) -> f64 {
        self.rest_density * self.particle_length * self.particle_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FluidParams {
        FluidParams {
            rest_density: 1017.0,
            stiffness: 3.0,
            viscous_factor: 8.32e-4,
            boundary_viscous_factor: 4e-4,
            gamma1: 0.5,
            epsilon: 0.01,
            particle_length: 0.006,
            clamp_negative_pressure: false,
        }
    }

    #[test]
    fn mass_from_rest_density_and_footprint() {
        let p = params();
        assert!((p.particle_mass() - 1017.0 * 0.006 * 0.006).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_gamma1() {
        let mut p = params();
        p.gamma1 = 0.0;
        assert!(p.validate().is_err());
        p.gamma1 = 1.5;
        assert!(p.validate().is_err());
        p.gamma1 = 1.0;
        assert!(p.validate().is_ok());
    }
}
