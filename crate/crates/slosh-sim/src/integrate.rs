//! First-order symplectic (semi-implicit) Euler integration.
//!
//! Velocities are updated from the current accelerations first, positions
//! then advance with the *new* velocities. The reverse order would be the
//! explicit Euler scheme, which is not symplectic.

use crate::dynamics::{eval_dynamics, Accelerations, Plant, SystemState};
use crate::error::SimError;
use crate::scalar::Real;
use crate::spacecraft::ControlInput;

/// One velocity-first update of paired scalar sequences:
/// `v ← v + a·dt`, then `x ← x + v·dt`.
pub fn symplectic_update<S: Real>(pos: &mut [S], vel: &mut [S], acc: &[S], dt: S) {
    debug_assert_eq!(pos.len(), vel.len());
    debug_assert_eq!(pos.len(), acc.len());
    for i in 0..pos.len() {
        vel[i] = vel[i] + acc[i] * dt;
        pos[i] = pos[i] + vel[i] * dt;
    }
}

/// Apply one symplectic Euler step to the full coupled state.
pub fn symplectic_euler_step<S: Real>(
    state: &mut SystemState<S>,
    acc: &Accelerations<S>,
    dt: S,
) {
    let sc = &mut state.spacecraft;
    sc.velocity += acc.sc_acc.scale(dt);
    sc.position += sc.velocity.scale(dt);
    sc.omega = sc.omega + acc.sc_alpha * dt;
    sc.theta = sc.theta + sc.omega * dt;
    for ((p, v), a) in state
        .fluid
        .positions
        .iter_mut()
        .zip(state.fluid.velocities.iter_mut())
        .zip(&acc.fluid_acc)
    {
        *v += a.scale(dt);
        *p += v.scale(dt);
    }
}

/// Evaluate the dynamics and advance one fast substep, with blowup checks.
pub fn step_plant(
    plant: &Plant,
    state: &mut SystemState<f64>,
    u: &ControlInput<f64>,
    dt: f64,
    step_index: usize,
) -> Result<(), SimError> {
    let acc = eval_dynamics(plant, state, u).map_err(|e| match e {
        SimError::NumericBlowup { detail, .. } => SimError::NumericBlowup {
            step: Some(step_index),
            detail,
        },
        other => other,
    })?;
    symplectic_euler_step(state, &acc, dt);
    state.check_finite(step_index)
}
