//! Scenario construction: particle spawning and the settling pre-run.

use crate::dynamics::{eval_dynamics, Plant, SystemState};
use crate::error::SimError;
use crate::integrate::symplectic_euler_step;
use crate::particle::ParticleField;
use crate::spacecraft::{ControlInput, SpacecraftState};
use crate::vec2::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Spawn `n` fluid particles on a seeded jittered lattice centred on the
/// tank, at the identity spacecraft pose.
///
/// Lattice points are ranked by distance from the tank centre so the spawn
/// region is a compact disk; the jitter breaks the perfect symmetry the same
/// way for every run with the same seed.
pub fn spawn_particles(
    plant: &Plant,
    n: usize,
    spacing: f64,
    jitter_frac: f64,
    seed: u64,
) -> Result<ParticleField<f64>, SimError> {
    if n == 0 || spacing <= 0.0 {
        return Err(SimError::Config(
            "spawn needs n > 0 and spacing > 0".into(),
        ));
    }
    let center = plant.sc_params.tank_center_body_vec();
    let tank_radius = plant.sc_params.tank_radius;
    let margin = plant.fluid_params.particle_length / 2.0 + jitter_frac * spacing;
    let max_radius = tank_radius - margin;
    if max_radius <= 0.0 {
        return Err(SimError::Config("tank too small for the particle size".into()));
    }

    let k_max = (max_radius / spacing).ceil() as i64 + 1;
    let mut lattice: Vec<(i64, i64)> = Vec::new();
    for iy in -k_max..=k_max {
        for ix in -k_max..=k_max {
            let r = ((ix * ix + iy * iy) as f64).sqrt() * spacing;
            if r <= max_radius {
                lattice.push((ix, iy));
            }
        }
    }
    if lattice.len() < n {
        return Err(SimError::Config(format!(
            "tank fits only {} particles at spacing {spacing} (requested {n})",
            lattice.len()
        )));
    }
    lattice.sort_by(|a, b| {
        let ra = a.0 * a.0 + a.1 * a.1;
        let rb = b.0 * b.0 + b.1 * b.1;
        ra.cmp(&rb).then(a.1.cmp(&b.1)).then(a.0.cmp(&b.0))
    });
    lattice.truncate(n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = jitter_frac * spacing;
    let positions: Vec<Vec2<f64>> = lattice
        .into_iter()
        .map(|(ix, iy)| {
            let jx = if jitter > 0.0 { rng.gen_range(-jitter..jitter) } else { 0.0 };
            let jy = if jitter > 0.0 { rng.gen_range(-jitter..jitter) } else { 0.0 };
            center + Vec2::new(ix as f64 * spacing + jx, iy as f64 * spacing + jy)
        })
        .collect();

    Ok(ParticleField::new(
        positions,
        vec![Vec2::zero(); n],
        plant.fluid_params.particle_mass(),
    ))
}

/// Settling controls.
#[derive(Debug, Clone)]
pub struct SettleOptions {
    /// Maximum particle speed at convergence (m/s).
    pub tolerance: f64,
    /// Simulated time budget (s).
    pub max_time: f64,
    /// Fast integration step (s).
    pub dt: f64,
    /// Artificial-viscosity factor used during settling only. The fluid
    /// equilibrium is viscosity-independent (viscous forces vanish at rest),
    /// so a strongly damped pre-run reaches the same rest state much sooner
    /// than the weakly damped flight parameters would.
    pub viscous_factor: f64,
}

impl Default for SettleOptions {
    fn default() -> Self {
        SettleOptions {
            tolerance: 1e-4,
            max_time: 20.0,
            dt: 1e-3,
            viscous_factor: 0.3,
        }
    }
}

/// Let the spawned fluid relax with the spacecraft held fixed until every
/// particle is slower than the tolerance.
///
/// A state only counts as settled when the accelerations are small enough
/// that one step cannot push any particle back over the speed tolerance;
/// otherwise a freshly spawned lattice (zero velocities, unbalanced rim
/// forces) would pass trivially.
///
/// Returns the converged state with the spacecraft pose at the origin and
/// rates zeroed, and verifies that all particles sit strictly inside the
/// tank.
pub fn settle_fluid(
    plant: &Plant,
    fluid: ParticleField<f64>,
    opts: &SettleOptions,
) -> Result<SystemState<f64>, SimError> {
    let mut settle_plant = plant.clone();
    settle_plant.fluid_params.viscous_factor = opts.viscous_factor;

    let mut state = SystemState {
        spacecraft: SpacecraftState::at_rest(),
        fluid,
    };
    let u = ControlInput::zero();
    let max_steps = (opts.max_time / opts.dt).ceil() as usize;
    let check_every = 50;
    let accel_limit = opts.tolerance / opts.dt;

    let converged = |state: &mut SystemState<f64>| -> Result<bool, SimError> {
        if state.fluid.max_speed() >= opts.tolerance {
            return Ok(false);
        }
        let acc = eval_dynamics(&settle_plant, state, &u)?;
        let max_acc = acc
            .fluid_acc
            .iter()
            .map(|a| a.norm())
            .fold(0.0, f64::max);
        Ok(max_acc < accel_limit)
    };

    if converged(&mut state)? {
        check_inside_tank(plant, &state)?;
        return Ok(state);
    }

    let mut max_speed = state.fluid.max_speed();
    for step in 0..max_steps {
        let mut acc = eval_dynamics(&settle_plant, &mut state, &u)?;
        // The spacecraft is clamped during the pre-run.
        acc.sc_acc = Vec2::zero();
        acc.sc_alpha = 0.0;
        symplectic_euler_step(&mut state, &acc, opts.dt);
        state.spacecraft = SpacecraftState::at_rest();
        state.check_finite(step)?;

        if (step + 1) % check_every == 0 {
            max_speed = state.fluid.max_speed();
            if max_speed < opts.tolerance && converged(&mut state)? {
                check_inside_tank(plant, &state)?;
                return Ok(state);
            }
        }
    }

    Err(SimError::SettlingFailed {
        simulated_time: opts.max_time,
        max_speed,
    })
}

fn check_inside_tank(plant: &Plant, state: &SystemState<f64>) -> Result<(), SimError> {
    let center = plant.sc_params.tank_center_body_vec();
    let r = plant.sc_params.tank_radius;
    for (i, p) in state.fluid.positions.iter().enumerate() {
        if (*p - center).norm() >= r {
            return Err(SimError::Config(format!(
                "settled particle {i} is outside the tank radius"
            )));
        }
    }
    Ok(())
}
