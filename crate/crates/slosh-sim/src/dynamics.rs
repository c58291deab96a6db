//! Coupled fluid/rigid-body state transition.
//!
//! One evaluation runs the full pipeline: ghost kinematics from the current
//! pose, density and pressure evaluation, fluid-internal forces, boundary
//! exchange forces, fluid accelerations and the Newton–Euler accelerations of
//! the spacecraft. The function is generic over the scalar so the same code
//! path provides plain evaluations and forward-mode directional derivatives.

use crate::error::SimError;
use crate::forces;
use crate::ghost::GhostLayer;
use crate::grid::{find_neighbors, SpatialGrid};
use crate::kernel::SmoothingKernel;
use crate::particle::{FluidParams, ParticleField};
use crate::scalar::Real;
use crate::spacecraft::{
    rigid_body_acceleration, ControlInput, SpacecraftParams, SpacecraftState,
};
use crate::vec2::Vec2;

/// Absolute bound on any state component before the run is declared blown up.
pub const BLOWUP_LIMIT: f64 = 1e9;

/// Time-invariant description of the coupled plant.
#[derive(Debug, Clone)]
pub struct Plant {
    pub sc_params: SpacecraftParams,
    pub fluid_params: FluidParams,
    /// Cubic spline kernel for density and fluid-internal forces.
    pub cubic: SmoothingKernel,
    /// Spiky kernel for the boundary exchange forces.
    pub spiky: SmoothingKernel,
    /// Boundary layer in the body frame (world data refreshed per evaluation).
    pub ghosts: GhostLayer<f64>,
}

impl Plant {
    pub fn new(
        sc_params: SpacecraftParams,
        fluid_params: FluidParams,
        smoothing_length: f64,
        ghosts: GhostLayer<f64>,
    ) -> Result<Self, SimError> {
        sc_params.validate()?;
        fluid_params.validate()?;
        Ok(Plant {
            sc_params,
            fluid_params,
            cubic: SmoothingKernel::cubic(smoothing_length)?,
            spiky: SmoothingKernel::spiky(smoothing_length)?,
            ghosts,
        })
    }

    pub fn n_ghosts(&self) -> usize {
        self.ghosts.len()
    }
}

/// Full dynamic state: spacecraft pose/rates plus fluid positions/velocities.
#[derive(Debug, Clone)]
pub struct SystemState<S: Real> {
    pub spacecraft: SpacecraftState<S>,
    pub fluid: ParticleField<S>,
}

impl<S: Real> SystemState<S> {
    pub fn n_fluid(&self) -> usize {
        self.fluid.len()
    }

    /// Dimension of the packed state vector `[r θ r_f ṙ θ̇ ṙ_f]`.
    pub fn dim(&self) -> usize {
        6 + 4 * self.n_fluid()
    }

    /// Largest absolute value over all state components.
    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        let sc = &self.spacecraft;
        for v in [
            sc.position.x.val(),
            sc.position.y.val(),
            sc.theta.val(),
            sc.velocity.x.val(),
            sc.velocity.y.val(),
            sc.omega.val(),
        ] {
            m = m.max(v.abs());
        }
        for (p, v) in self.fluid.positions.iter().zip(&self.fluid.velocities) {
            m = m
                .max(p.x.val().abs())
                .max(p.y.val().abs())
                .max(v.x.val().abs())
                .max(v.y.val().abs());
        }
        m
    }

    pub fn check_finite(&self, step: usize) -> Result<(), SimError> {
        let bad = !self.spacecraft.is_finite_val()
            || self
                .fluid
                .positions
                .iter()
                .zip(&self.fluid.velocities)
                .any(|(p, v)| !p.is_finite_val() || !v.is_finite_val());
        if bad || self.max_abs() > BLOWUP_LIMIT {
            return Err(SimError::NumericBlowup {
                step: Some(step),
                detail: format!("state magnitude {:.3e}", self.max_abs()),
            });
        }
        Ok(())
    }
}

impl SystemState<f64> {
    pub fn lift<S: Real>(&self) -> SystemState<S> {
        SystemState {
            spacecraft: self.spacecraft.lift(),
            fluid: self.fluid.lift(),
        }
    }

    /// Measured output `y = [r_x r_y θ ṙ_x ṙ_y θ̇]`.
    pub fn output(&self) -> [f64; 6] {
        let sc = &self.spacecraft;
        [
            sc.position.x,
            sc.position.y,
            sc.theta,
            sc.velocity.x,
            sc.velocity.y,
            sc.omega,
        ]
    }
}

/// Accelerations produced by one dynamics evaluation.
#[derive(Debug, Clone)]
pub struct Accelerations<S: Real> {
    pub sc_acc: Vec2<S>,
    pub sc_alpha: S,
    pub fluid_acc: Vec<Vec2<S>>,
}

/// Evaluate the state transition. Refreshes the derived density/pressure
/// fields of `state.fluid` and returns all accelerations.
pub fn eval_dynamics<S: Real>(
    plant: &Plant,
    state: &mut SystemState<S>,
    u: &ControlInput<S>,
) -> Result<Accelerations<S>, SimError> {
    let n = state.fluid.len();
    let params = &plant.fluid_params;

    // Ghost kinematics for the current pose.
    let mut ghosts: GhostLayer<S> = plant.ghosts.lift();
    ghosts.update_kinematics(&state.spacecraft);

    // Neighbor search on primal positions. The cubic support is the largest
    // interaction radius; spiky pairs are a subset and the kernels vanish
    // smoothly at their own support, so extra candidates contribute zero.
    let support = plant.cubic.support_radius();
    let fluid_pos: Vec<Vec2<f64>> = state.fluid.positions.iter().map(|p| p.val()).collect();
    let ghost_pos: Vec<Vec2<f64>> = ghosts.world_positions.iter().map(|p| p.val()).collect();
    let fluid_grid = SpatialGrid::build(&fluid_pos, support);
    let ff = find_neighbors(&fluid_pos, &fluid_pos, &fluid_grid, support, true);
    let (fg, gf) = if ghosts.is_empty() {
        (
            find_neighbors(&fluid_pos, &[], &SpatialGrid::build(&[], support), support, false),
            find_neighbors(&[], &fluid_pos, &fluid_grid, support, false),
        )
    } else {
        let ghost_grid = SpatialGrid::build(&ghost_pos, support);
        (
            find_neighbors(&fluid_pos, &ghost_pos, &ghost_grid, support, false),
            find_neighbors(&ghost_pos, &fluid_pos, &fluid_grid, plant.spiky.support_radius(), false),
        )
    };

    forces::compute_densities(&mut state.fluid, &ghosts, &ff, &fg, params, &plant.cubic)?;
    forces::compute_pressures(&mut state.fluid, params);

    let mut f_pressure = vec![Vec2::zero(); n];
    let mut f_viscous = vec![Vec2::zero(); n];
    let mut g2f = vec![Vec2::zero(); n];
    let mut f2g = vec![Vec2::zero(); ghosts.len()];
    forces::pressure_forces(&state.fluid, &ff, &plant.cubic, &mut f_pressure);
    forces::viscous_forces(&state.fluid, &ff, params, &plant.cubic, &mut f_viscous);
    forces::ghost_fluid_forces(
        &state.fluid,
        &ghosts,
        &fg,
        &gf,
        params,
        &plant.spiky,
        &mut g2f,
        &mut f2g,
    );

    // Fluid acceleration: m⁻¹(−F_pressure + F_viscous + F_g2f); there are no
    // external fluid forces in zero gravity.
    let inv_m = S::from_f64(1.0 / state.fluid.mass_per_particle);
    let fluid_acc: Vec<Vec2<S>> = (0..n)
        .map(|i| (-f_pressure[i] + f_viscous[i] + g2f[i]).scale(inv_m))
        .collect();

    let (sc_acc, sc_alpha) = rigid_body_acceleration(
        &f2g,
        &ghosts.world_positions,
        &state.spacecraft,
        &plant.sc_params,
        u,
    );

    for (i, a) in fluid_acc.iter().enumerate() {
        if !a.is_finite_val() {
            return Err(SimError::NumericBlowup {
                step: None,
                detail: format!("fluid acceleration of particle {i} is non-finite"),
            });
        }
    }
    if !sc_acc.is_finite_val() || !sc_alpha.is_finite_val() {
        return Err(SimError::NumericBlowup {
            step: None,
            detail: "spacecraft acceleration is non-finite".into(),
        });
    }

    Ok(Accelerations {
        sc_acc,
        sc_alpha,
        fluid_acc,
    })
}

/// Pack a state into the canonical vector layout `[r θ r_f ṙ θ̇ ṙ_f]`.
pub fn pack_state(state: &SystemState<f64>) -> Vec<f64> {
    let n = state.n_fluid();
    let mut x = Vec::with_capacity(6 + 4 * n);
    x.push(state.spacecraft.position.x);
    x.push(state.spacecraft.position.y);
    x.push(state.spacecraft.theta);
    for p in &state.fluid.positions {
        x.push(p.x);
        x.push(p.y);
    }
    x.push(state.spacecraft.velocity.x);
    x.push(state.spacecraft.velocity.y);
    x.push(state.spacecraft.omega);
    for v in &state.fluid.velocities {
        x.push(v.x);
        x.push(v.y);
    }
    x
}

/// Rebuild a state from packed components (the template supplies the particle
/// mass and count).
pub fn state_from_components<S: Real>(
    template: &SystemState<f64>,
    x: &[S],
) -> SystemState<S> {
    let n = template.n_fluid();
    assert_eq!(x.len(), 6 + 4 * n);
    let pos_base = 3;
    let vel_base = 3 + 2 * n + 3;
    let spacecraft = SpacecraftState {
        position: Vec2::new(x[0], x[1]),
        theta: x[2],
        velocity: Vec2::new(x[pos_base + 2 * n], x[pos_base + 2 * n + 1]),
        omega: x[pos_base + 2 * n + 2],
    };
    let positions: Vec<Vec2<S>> = (0..n)
        .map(|i| Vec2::new(x[pos_base + 2 * i], x[pos_base + 2 * i + 1]))
        .collect();
    let velocities: Vec<Vec2<S>> = (0..n)
        .map(|i| Vec2::new(x[vel_base + 2 * i], x[vel_base + 2 * i + 1]))
        .collect();
    SystemState {
        spacecraft,
        fluid: ParticleField::new(positions, velocities, template.fluid.mass_per_particle),
    }
}

/// State transition `ẋ = f(x, u)` in the packed layout
/// `[ṙ θ̇ ṙ_f r̈ θ̈ r̈_f]`.
pub fn state_transition<S: Real>(
    plant: &Plant,
    state: &SystemState<S>,
    u: &ControlInput<S>,
) -> Result<Vec<S>, SimError> {
    let mut st = state.clone();
    let acc = eval_dynamics(plant, &mut st, u)?;
    let n = st.n_fluid();
    let mut xdot = Vec::with_capacity(6 + 4 * n);
    xdot.push(st.spacecraft.velocity.x);
    xdot.push(st.spacecraft.velocity.y);
    xdot.push(st.spacecraft.omega);
    for v in &st.fluid.velocities {
        xdot.push(v.x);
        xdot.push(v.y);
    }
    xdot.push(acc.sc_acc.x);
    xdot.push(acc.sc_acc.y);
    xdot.push(acc.sc_alpha);
    for a in &acc.fluid_acc {
        xdot.push(a.x);
        xdot.push(a.y);
    }
    Ok(xdot)
}
