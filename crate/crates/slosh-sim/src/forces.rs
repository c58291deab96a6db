//! Density, pressure and pairwise force evaluation.
//!
//! All routines are pure maps over particle indices reading an immutable
//! snapshot; per-particle accumulation follows the canonical neighbor order
//! from [`crate::grid`], so results are independent of worker count.
//!
//! Sign conventions: `pressure_forces` and `viscous_forces` return the force
//! sums exactly as defined in the momentum equations; the acceleration
//! assembly applies the leading minus to the pressure term. The
//! ghost-to-fluid pressure force is oriented so that a compressed fluid
//! particle (P > 0) is pushed away from the wall, matching the fluid-internal
//! convention; without this, walls would attract compressed fluid and
//! particles would tunnel through the boundary.

use crate::error::SimError;
use crate::ghost::GhostLayer;
use crate::grid::{NeighborLists, PAR_THRESHOLD};
use crate::kernel::SmoothingKernel;
use crate::particle::{FluidParams, ParticleField};
use crate::scalar::Real;
use crate::vec2::Vec2;
use rayon::prelude::*;

fn par_fill<S, F>(out: &mut [S], f: F)
where
    S: Send + Sync,
    F: Fn(usize) -> S + Send + Sync,
{
    if out.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
    } else {
        for (i, o) in out.iter_mut().enumerate() {
            *o = f(i);
        }
    }
}

/// Corrected density summation
/// `ρ_i = m_i (Σ_f W_{i,f} + γ₁ Σ_g W_{i,g})`,
/// including the self contribution `W(0)` in the fluid sum.
pub fn compute_densities<S: Real>(
    fluid: &mut ParticleField<S>,
    ghosts: &GhostLayer<S>,
    ff: &NeighborLists,
    fg: &NeighborLists,
    params: &FluidParams,
    cubic: &SmoothingKernel,
) -> Result<(), SimError> {
    let mass = S::from_f64(fluid.mass_per_particle);
    let gamma1 = S::from_f64(params.gamma1);
    let w_self = cubic.eval(S::zero());
    let positions = &fluid.positions;
    let ghost_positions = &ghosts.world_positions;

    par_fill(&mut fluid.densities, |i| {
        let pi = positions[i];
        let mut fluid_sum = w_self;
        for &j in ff.of(i) {
            let d = (pi - positions[j as usize]).norm();
            fluid_sum = fluid_sum + cubic.eval(d);
        }
        let mut ghost_sum = S::zero();
        for &g in fg.of(i) {
            let d = (pi - ghost_positions[g as usize]).norm();
            ghost_sum = ghost_sum + cubic.eval(d);
        }
        mass * (fluid_sum + gamma1 * ghost_sum)
    });

    for (i, rho) in fluid.densities.iter().enumerate() {
        let v = rho.val();
        if !v.is_finite() || v <= 0.0 {
            return Err(SimError::NumericBlowup {
                step: None,
                detail: format!("density of particle {i} is {v}"),
            });
        }
    }
    Ok(())
}

/// State equation `P_i = k (ρ_i − ρ₀)`.
///
/// Negative pressures are kept unless `clamp_negative_pressure` is set.
pub fn compute_pressures<S: Real>(fluid: &mut ParticleField<S>, params: &FluidParams) {
    let k = S::from_f64(params.stiffness);
    let rho0 = S::from_f64(params.rest_density);
    let clamp = params.clamp_negative_pressure;
    let densities = &fluid.densities;
    par_fill(&mut fluid.pressures, |i| {
        let p = k * (densities[i] - rho0);
        if clamp {
            p.max(S::zero())
        } else {
            p
        }
    });
}

/// Momentum-conserving pressure force sum
/// `F_i = m_i Σ_j m_j (P_i/ρ_i² + P_j/ρ_j²) ∇_i W_{i,j}`.
///
/// The acceleration equation applies this with a leading minus.
pub fn pressure_forces<S: Real>(
    fluid: &ParticleField<S>,
    ff: &NeighborLists,
    cubic: &SmoothingKernel,
    out: &mut [Vec2<S>],
) {
    let mass = S::from_f64(fluid.mass_per_particle);
    let positions = &fluid.positions;
    let densities = &fluid.densities;
    let pressures = &fluid.pressures;

    par_fill(out, |i| {
        let pi = positions[i];
        let self_term = pressures[i] / (densities[i] * densities[i]);
        let mut force = Vec2::zero();
        for &j in ff.of(i) {
            let j = j as usize;
            let r_ij = pi - positions[j];
            let dist = r_ij.norm();
            let grad = cubic.grad_with_dist(r_ij, dist);
            let bracket = self_term + pressures[j] / (densities[j] * densities[j]);
            force += grad.scale(mass * mass * bracket);
        }
        force
    });
}

/// Artificial viscosity force sum
/// `F_i = m_i Σ_j m_j 2αh/(ρ_i+ρ_j) · (ṙ_ij·r_ij)/(‖r_ij‖² + εh²) ∇_i W_{i,j}`.
pub fn viscous_forces<S: Real>(
    fluid: &ParticleField<S>,
    ff: &NeighborLists,
    params: &FluidParams,
    cubic: &SmoothingKernel,
    out: &mut [Vec2<S>],
) {
    let h = cubic.h();
    let mass = S::from_f64(fluid.mass_per_particle);
    let two_alpha_h = S::from_f64(2.0 * params.viscous_factor * h);
    let eps_h2 = S::from_f64(params.epsilon * h * h);
    let positions = &fluid.positions;
    let velocities = &fluid.velocities;
    let densities = &fluid.densities;

    par_fill(out, |i| {
        let pi = positions[i];
        let vi = velocities[i];
        let mut force = Vec2::zero();
        for &j in ff.of(i) {
            let j = j as usize;
            let r_ij = pi - positions[j];
            let v_ij = vi - velocities[j];
            let dist = r_ij.norm();
            let grad = cubic.grad_with_dist(r_ij, dist);
            let coeff = two_alpha_h / (densities[i] + densities[j]) * v_ij.dot(r_ij)
                / (r_ij.norm_sq() + eps_h2);
            force += grad.scale(mass * mass * coeff);
        }
        force
    });
}

/// Force a single ghost particle exerts on a fluid particle, with
/// `r_rel = r_fluid − r_ghost` and `v_rel = ṙ_fluid − ṙ_ghost`.
///
/// Both directions of the exchange call this with identical arguments, so
/// each action–reaction pair cancels bitwise.
#[inline(always)]
fn ghost_pair_force<S: Real>(
    pressure_i: S,
    density_i: S,
    mass: S,
    r_rel: Vec2<S>,
    v_rel: Vec2<S>,
    spiky: &SmoothingKernel,
    two_beta: S,
    eps_h2: S,
) -> Vec2<S> {
    let dist = r_rel.norm();
    let grad = spiky.grad_with_dist(r_rel, dist);
    // Repulsive pressure exchange: ghosts mirror the fluid particle's own
    // pressure state, doubling its bracket term.
    let pressure_coeff = -(S::from_f64(2.0) * mass * mass * pressure_i
        / (density_i * density_i));
    // Ghosts inherit the fluid particle's density; approach-only damping.
    let approach = v_rel.dot(r_rel).min(S::zero());
    let viscous_coeff =
        mass * mass * two_beta / (density_i + density_i) * approach / (r_rel.norm_sq() + eps_h2);
    grad.scale(pressure_coeff + viscous_coeff)
}

/// Ghost-boundary interaction forces using the spiky kernel.
///
/// Returns per-fluid-particle forces in `g2f` and the per-ghost reactions
/// (flipped sign) in `f2g`. `fg` lists ghosts near each fluid particle and
/// `gf` lists fluid particles near each ghost.
#[allow(clippy::too_many_arguments)]
pub fn ghost_fluid_forces<S: Real>(
    fluid: &ParticleField<S>,
    ghosts: &GhostLayer<S>,
    fg: &NeighborLists,
    gf: &NeighborLists,
    params: &FluidParams,
    spiky: &SmoothingKernel,
    g2f: &mut [Vec2<S>],
    f2g: &mut [Vec2<S>],
) {
    let h = spiky.h();
    let mass = S::from_f64(fluid.mass_per_particle);
    let two_beta = S::from_f64(2.0 * params.boundary_viscous_factor);
    let eps_h2 = S::from_f64(params.epsilon * h * h);

    par_fill(g2f, |i| {
        let mut force = Vec2::zero();
        for &g in fg.of(i) {
            let g = g as usize;
            let r_rel = fluid.positions[i] - ghosts.world_positions[g];
            let v_rel = fluid.velocities[i] - ghosts.world_velocities[g];
            force += ghost_pair_force(
                fluid.pressures[i],
                fluid.densities[i],
                mass,
                r_rel,
                v_rel,
                spiky,
                two_beta,
                eps_h2,
            );
        }
        force
    });

    par_fill(f2g, |g| {
        let mut force = Vec2::zero();
        for &i in gf.of(g) {
            let i = i as usize;
            let r_rel = fluid.positions[i] - ghosts.world_positions[g];
            let v_rel = fluid.velocities[i] - ghosts.world_velocities[g];
            force -= ghost_pair_force(
                fluid.pressures[i],
                fluid.densities[i],
                mass,
                r_rel,
                v_rel,
                spiky,
                two_beta,
                eps_h2,
            );
        }
        force
    });
}

/// Analytic estimate of the boundary correcting factor γ₁ from a
/// representative flat-wall template.
///
/// For every fluid particle that sees the boundary layer, the missing kernel
/// mass is `ρ₀/m − Σ_f W` (the ideal full-support sum minus the actual
/// fluid-side sum); dividing by the single-layer sum `Σ_g W` and averaging
/// gives the correction.
pub fn estimate_gamma1(
    fluid: &ParticleField<f64>,
    ghosts: &GhostLayer<f64>,
    cubic: &SmoothingKernel,
    params: &FluidParams,
) -> Result<f64, SimError> {
    let ideal = params.rest_density / fluid.mass_per_particle;
    let mut total = 0.0;
    let mut count = 0usize;
    for pi in &fluid.positions {
        let mut ghost_sum = 0.0;
        for g in &ghosts.world_positions {
            ghost_sum += cubic.eval((*pi - *g).norm());
        }
        if ghost_sum == 0.0 {
            // Far from any wall: nothing is missing, excluded from the average.
            continue;
        }
        let mut fluid_sum = 0.0;
        for pj in &fluid.positions {
            fluid_sum += cubic.eval((*pi - *pj).norm());
        }
        total += (ideal - fluid_sum) / ghost_sum;
        count += 1;
    }
    if count == 0 {
        return Err(SimError::Config(
            "gamma1 template has no fluid particles within reach of the boundary".into(),
        ));
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{find_neighbors, SpatialGrid};

    const PI: f64 = std::f64::consts::PI;

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

    fn field(positions: Vec<Vec2<f64>>, velocities: Vec<Vec2<f64>>, mass: f64) -> ParticleField<f64> {
        ParticleField::new(positions, velocities, mass)
    }

    fn empty_ghosts() -> GhostLayer<f64> {
        GhostLayer::from_body_positions(Vec::new(), 0.0)
    }

    fn fluid_lists(fluid: &ParticleField<f64>, cubic: &SmoothingKernel) -> NeighborLists {
        let radius = cubic.support_radius();
        let grid = SpatialGrid::build(&fluid.positions, radius);
        find_neighbors(&fluid.positions, &fluid.positions, &grid, radius, true)
    }

    fn ghost_lists(
        fluid: &ParticleField<f64>,
        ghosts: &GhostLayer<f64>,
        radius: f64,
    ) -> (NeighborLists, NeighborLists) {
        if ghosts.is_empty() {
            let empty_from_fluid = NeighborLists::default();
            let fg = find_neighbors(
                &fluid.positions,
                &[],
                &SpatialGrid::build(&[], radius),
                radius,
                false,
            );
            let _ = empty_from_fluid;
            return (fg, NeighborLists::default());
        }
        let ghost_grid = SpatialGrid::build(&ghosts.world_positions, radius);
        let fg = find_neighbors(
            &fluid.positions,
            &ghosts.world_positions,
            &ghost_grid,
            radius,
            false,
        );
        let fluid_grid = SpatialGrid::build(&fluid.positions, radius);
        let gf = find_neighbors(
            &ghosts.world_positions,
            &fluid.positions,
            &fluid_grid,
            radius,
            false,
        );
        (fg, gf)
    }

    #[test]
    fn isolated_particle_density_is_self_term() {
        let cubic = SmoothingKernel::cubic(1.0).unwrap();
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 1.0);
        let ghosts = empty_ghosts();
        let ff = fluid_lists(&fluid, &cubic);
        let (fg, _) = ghost_lists(&fluid, &ghosts, cubic.support_radius());
        compute_densities(&mut fluid, &ghosts, &ff, &fg, &params(), &cubic).unwrap();
        // m · W(0; 1) with the normalized cubic spline = 10/(7π)
        assert!((fluid.densities[0] - 10.0 / (7.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn distant_pair_only_sees_self_term() {
        let cubic = SmoothingKernel::cubic(1.0).unwrap();
        let mut fluid = field(
            vec![Vec2::zero(), Vec2::new(2.5, 0.0)],
            vec![Vec2::zero(); 2],
            1.0,
        );
        let ghosts = empty_ghosts();
        let ff = fluid_lists(&fluid, &cubic);
        let (fg, _) = ghost_lists(&fluid, &ghosts, cubic.support_radius());
        compute_densities(&mut fluid, &ghosts, &ff, &fg, &params(), &cubic).unwrap();
        let self_term = 10.0 / (7.0 * PI);
        assert!((fluid.densities[0] - self_term).abs() < 1e-12);
        assert!((fluid.densities[1] - self_term).abs() < 1e-12);
    }

    #[test]
    fn ghost_contribution_scaled_by_gamma1() {
        let cubic = SmoothingKernel::cubic(1.0).unwrap();
        let mut p = params();
        p.gamma1 = 0.5;
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 1.0);
        let ghosts = GhostLayer::from_body_positions(vec![Vec2::new(0.5, 0.0)], 1.0);
        let ff = fluid_lists(&fluid, &cubic);
        let (fg, _) = ghost_lists(&fluid, &ghosts, cubic.support_radius());
        compute_densities(&mut fluid, &ghosts, &ff, &fg, &p, &cubic).unwrap();
        let expected = cubic.eval(0.0) + 0.5 * cubic.eval(0.5);
        assert!((fluid.densities[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn pressure_at_rest_density_is_zero() {
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 1.0);
        fluid.densities[0] = 1017.0;
        compute_pressures(&mut fluid, &params());
        assert_eq!(fluid.pressures[0], 0.0);
        fluid.densities[0] = 1018.0;
        compute_pressures(&mut fluid, &params());
        assert!((fluid.pressures[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_pressure_kept_unless_clamped() {
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 1.0);
        fluid.densities[0] = 1016.0;
        let mut p = params();
        compute_pressures(&mut fluid, &p);
        assert!((fluid.pressures[0] + 3.0).abs() < 1e-12);
        p.clamp_negative_pressure = true;
        compute_pressures(&mut fluid, &p);
        assert_eq!(fluid.pressures[0], 0.0);
    }

    #[test]
    fn pressure_pair_forces_cancel_exactly() {
        let cubic = SmoothingKernel::cubic(0.01).unwrap();
        let mut fluid = field(
            vec![Vec2::new(0.001, 0.002), Vec2::new(0.007, -0.003)],
            vec![Vec2::zero(); 2],
            0.036,
        );
        fluid.densities = vec![1020.0, 1015.0];
        fluid.pressures = vec![9.0, -6.0];
        let ff = fluid_lists(&fluid, &cubic);
        let mut out = vec![Vec2::zero(); 2];
        pressure_forces(&fluid, &ff, &cubic, &mut out);
        assert_eq!(out[0].x, -out[1].x);
        assert_eq!(out[0].y, -out[1].y);
        assert!(out[0].norm() > 0.0);
    }

    #[test]
    fn interior_lattice_particle_feels_no_net_pressure_force() {
        let cubic = SmoothingKernel::cubic(0.0094).unwrap();
        let s = 0.006;
        let mut positions = Vec::new();
        for ix in -4i32..=4 {
            for iy in -4i32..=4 {
                positions.push(Vec2::new(ix as f64 * s, iy as f64 * s));
            }
        }
        let center = positions
            .iter()
            .position(|p| p.x == 0.0 && p.y == 0.0)
            .unwrap();
        let n = positions.len();
        let mut fluid = field(positions, vec![Vec2::zero(); n], 0.036);
        fluid.densities = vec![1017.0; n];
        fluid.pressures = vec![12.0; n];
        let ff = fluid_lists(&fluid, &cubic);
        let mut out = vec![Vec2::zero(); n];
        pressure_forces(&fluid, &ff, &cubic, &mut out);
        // Symmetric neighborhoods cancel pairwise; allow roundoff relative to
        // the magnitude of a single pair contribution.
        let pair_scale: f64 =
            0.036f64.powi(2) * 2.0 * (12.0 / 1017.0f64.powi(2)) * cubic.deriv(s).abs();
        assert!(out[center].norm() < 1e-10 * pair_scale, "net = {}", out[center].norm());
    }

    #[test]
    fn closed_fluid_configuration_conserves_momentum() {
        use rand::{Rng, SeedableRng};
        let cubic = SmoothingKernel::cubic(0.0094).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 60;
        let positions: Vec<Vec2<f64>> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(-0.02..0.02), rng.gen_range(-0.02..0.02)))
            .collect();
        let velocities: Vec<Vec2<f64>> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)))
            .collect();
        let mut fluid = field(positions, velocities, 0.036);
        let ghosts = empty_ghosts();
        let ff = fluid_lists(&fluid, &cubic);
        let (fg, _) = ghost_lists(&fluid, &ghosts, cubic.support_radius());
        compute_densities(&mut fluid, &ghosts, &ff, &fg, &params(), &cubic).unwrap();
        compute_pressures(&mut fluid, &params());
        let mut fp = vec![Vec2::zero(); n];
        let mut fv = vec![Vec2::zero(); n];
        pressure_forces(&fluid, &ff, &cubic, &mut fp);
        viscous_forces(&fluid, &ff, &params(), &cubic, &mut fv);
        let sum_p: Vec2<f64> = fp.iter().fold(Vec2::zero(), |a, b| a + *b);
        let sum_v: Vec2<f64> = fv.iter().fold(Vec2::zero(), |a, b| a + *b);
        let scale: f64 = fp.iter().chain(fv.iter()).map(|f| f.norm()).sum::<f64>();
        assert!(sum_p.norm() <= 1e-13 * scale.max(1e-12));
        assert!(sum_v.norm() <= 1e-13 * scale.max(1e-12));
    }

    #[test]
    fn uniform_velocity_has_no_viscous_force() {
        let cubic = SmoothingKernel::cubic(0.01).unwrap();
        let v = Vec2::new(0.3, -0.2);
        let mut fluid = field(
            vec![Vec2::zero(), Vec2::new(0.004, 0.0), Vec2::new(0.0, 0.005)],
            vec![v; 3],
            0.036,
        );
        fluid.densities = vec![1017.0; 3];
        let ff = fluid_lists(&fluid, &cubic);
        let mut out = vec![Vec2::zero(); 3];
        viscous_forces(&fluid, &ff, &params(), &cubic, &mut out);
        for f in out {
            assert_eq!(f, Vec2::zero());
        }
    }

    #[test]
    fn coincident_particles_stay_finite() {
        let cubic = SmoothingKernel::cubic(0.01).unwrap();
        let mut fluid = field(
            vec![Vec2::zero(), Vec2::zero()],
            vec![Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0)],
            0.036,
        );
        fluid.densities = vec![1017.0; 2];
        let ff = fluid_lists(&fluid, &cubic);
        let mut out = vec![Vec2::zero(); 2];
        viscous_forces(&fluid, &ff, &params(), &cubic, &mut out);
        for f in out {
            assert!(f.is_finite_val());
        }
    }

    #[test]
    fn viscous_force_decelerates_closing_pair() {
        let cubic = SmoothingKernel::cubic(0.01).unwrap();
        let d = 0.006;
        let mut fluid = field(
            vec![Vec2::zero(), Vec2::new(d, 0.0)],
            vec![Vec2::new(0.1, 0.0), Vec2::new(-0.1, 0.0)],
            0.036,
        );
        fluid.densities = vec![1017.0; 2];
        let ff = fluid_lists(&fluid, &cubic);
        let mut out = vec![Vec2::zero(); 2];
        viscous_forces(&fluid, &ff, &params(), &cubic, &mut out);

        // Hand oracle for the pair term on particle 0:
        // coeff = 2αh/(ρ+ρ) · (v_ij·r_ij)/(d² + εh²), F = m² coeff ∇W.
        let p = params();
        let h = 0.01;
        let m = 0.036;
        let v_dot_r = 0.2 * (-d);
        let coeff = 2.0 * p.viscous_factor * h / (2.0 * 1017.0) * v_dot_r / (d * d + p.epsilon * h * h);
        let grad_x = cubic.deriv(d) * (-d) / d;
        let expected = m * m * coeff * grad_x;
        assert!((out[0].x - expected).abs() < 1e-18);
        // Particle 0 moves +x toward particle 1; the force must push it -x.
        assert!(out[0].x < 0.0);
        assert_eq!(out[1].x, -out[0].x);
    }

    #[test]
    fn ghost_forces_vanish_beyond_support() {
        let spiky = SmoothingKernel::spiky(0.01).unwrap();
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::new(0.1, 0.0)], 0.036);
        fluid.densities = vec![1017.0];
        fluid.pressures = vec![5.0];
        let ghosts = GhostLayer::from_body_positions(vec![Vec2::new(0.05, 0.0)], 0.03);
        let (fg, gf) = ghost_lists(&fluid, &ghosts, spiky.support_radius());
        let mut g2f = vec![Vec2::zero(); 1];
        let mut f2g = vec![Vec2::zero(); 1];
        ghost_fluid_forces(&fluid, &ghosts, &fg, &gf, &params(), &spiky, &mut g2f, &mut f2g);
        assert_eq!(g2f[0], Vec2::zero());
        assert_eq!(f2g[0], Vec2::zero());
    }

    #[test]
    fn ghost_exchange_is_newton_pair() {
        let spiky = SmoothingKernel::spiky(0.01).unwrap();
        let positions = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.004, 0.001),
            Vec2::new(-0.003, 0.002),
        ];
        let velocities = vec![
            Vec2::new(0.05, 0.0),
            Vec2::new(-0.02, 0.03),
            Vec2::new(0.0, -0.04),
        ];
        let mut fluid = field(positions, velocities, 0.036);
        fluid.densities = vec![1020.0, 1016.0, 1018.0];
        fluid.pressures = vec![9.0, -3.0, 3.0];
        let ghosts = GhostLayer::from_body_positions(
            vec![Vec2::new(0.005, 0.0), Vec2::new(0.0, 0.006), Vec2::new(-0.004, -0.004)],
            0.03,
        );
        let (fg, gf) = ghost_lists(&fluid, &ghosts, spiky.support_radius());
        let mut g2f = vec![Vec2::zero(); 3];
        let mut f2g = vec![Vec2::zero(); 3];
        ghost_fluid_forces(&fluid, &ghosts, &fg, &gf, &params(), &spiky, &mut g2f, &mut f2g);
        let total: Vec2<f64> = g2f.iter().chain(f2g.iter()).fold(Vec2::zero(), |a, b| a + *b);
        let scale: f64 = g2f.iter().map(|f| f.norm()).sum::<f64>().max(1e-30);
        assert!(g2f.iter().any(|f| f.norm() > 0.0));
        assert!(total.norm() <= 1e-13 * scale);
    }

    #[test]
    fn separating_motion_has_no_boundary_viscosity() {
        let spiky = SmoothingKernel::spiky(0.01).unwrap();
        // Moving away from the ghost: v_rel · r_rel > 0 kills the min term,
        // and zero pressure kills the pressure term.
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::new(-0.1, 0.0)], 0.036);
        fluid.densities = vec![1017.0];
        fluid.pressures = vec![0.0];
        let ghosts = GhostLayer::from_body_positions(vec![Vec2::new(0.005, 0.0)], 0.03);
        let (fg, gf) = ghost_lists(&fluid, &ghosts, spiky.support_radius());
        let mut g2f = vec![Vec2::zero(); 1];
        let mut f2g = vec![Vec2::zero(); 1];
        ghost_fluid_forces(&fluid, &ghosts, &fg, &gf, &params(), &spiky, &mut g2f, &mut f2g);
        assert_eq!(g2f[0], Vec2::zero());
        assert_eq!(f2g[0], Vec2::zero());
    }

    #[test]
    fn compressed_particle_is_pushed_off_the_wall() {
        let spiky = SmoothingKernel::spiky(0.01).unwrap();
        // Wall to the right of the particle, positive pressure.
        let mut fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 0.036);
        fluid.densities = vec![1100.0];
        fluid.pressures = vec![249.0];
        let ghosts = GhostLayer::from_body_positions(vec![Vec2::new(0.004, 0.0)], 0.03);
        let (fg, gf) = ghost_lists(&fluid, &ghosts, spiky.support_radius());
        let mut g2f = vec![Vec2::zero(); 1];
        let mut f2g = vec![Vec2::zero(); 1];
        ghost_fluid_forces(&fluid, &ghosts, &fg, &gf, &params(), &spiky, &mut g2f, &mut f2g);
        assert!(g2f[0].x < 0.0, "fluid must be repelled from the wall");
        assert_eq!(f2g[0].x, -g2f[0].x);
    }

    /// Flat-wall template: fluid half-lattice below y = 0, one ghost row
    /// continuing the lattice at y = +s.
    fn flat_wall_template(s: f64, rows: usize, cols: i32) -> (ParticleField<f64>, GhostLayer<f64>) {
        let mut positions = Vec::new();
        for row in 0..rows {
            for col in -cols..=cols {
                positions.push(Vec2::new(col as f64 * s, -(row as f64) * s));
            }
        }
        let n = positions.len();
        let mass = 1017.0 * s * s;
        let fluid = ParticleField::new(positions, vec![Vec2::zero(); n], mass);
        let ghost_body: Vec<Vec2<f64>> = (-cols..=cols)
            .map(|col| Vec2::new(col as f64 * s, s))
            .collect();
        let ghosts = GhostLayer::from_body_positions(ghost_body, mass);
        (fluid, ghosts)
    }

    #[test]
    fn gamma1_estimate_matches_full_lattice_oracle() {
        let s = 0.006;
        let h = 1.57 * s;
        let cubic = SmoothingKernel::cubic(h).unwrap();
        let p = FluidParams {
            particle_length: s,
            ..params()
        };
        // Wide and deep enough that central near-wall particles see a full
        // half-space of fluid.
        let (fluid, ghosts) = flat_wall_template(s, 8, 12);
        let gamma = estimate_gamma1(&fluid, &ghosts, &cubic, &p).unwrap();

        // Brute-force oracle: numerator from an explicit full lattice
        // (fluid rows plus the wall row plus the missing rows above).
        let probe = Vec2::new(0.0, 0.0);
        let mut full = 0.0;
        for row in -8i32..=8 {
            for col in -12i32..=12 {
                full += cubic.eval((probe - Vec2::new(col as f64 * s, row as f64 * s)).norm());
            }
        }
        let mut fluid_sum = 0.0;
        for q in &fluid.positions {
            fluid_sum += cubic.eval((probe - *q).norm());
        }
        let mut ghost_sum = 0.0;
        for q in &ghosts.world_positions {
            ghost_sum += cubic.eval((probe - *q).norm());
        }
        let oracle = (full - fluid_sum) / ghost_sum;

        // The estimate averages over all near-wall rows; the oracle probes
        // the wall-adjacent row, so agreement is loose but the value and its
        // admissible range are pinned.
        assert!(gamma > 0.0 && gamma < 3.0, "gamma1 = {gamma}");
        assert!(oracle > 0.0 && oracle < 3.0, "oracle = {oracle}");
        assert!((gamma - oracle).abs() < 1.0, "gamma1 = {gamma}, oracle = {oracle}");
    }

    #[test]
    fn gamma1_without_boundary_neighbors_is_an_error() {
        let cubic = SmoothingKernel::cubic(0.01).unwrap();
        let fluid = field(vec![Vec2::zero()], vec![Vec2::zero()], 0.036);
        let ghosts = GhostLayer::from_body_positions(vec![Vec2::new(10.0, 0.0)], 0.03);
        assert!(estimate_gamma1(&fluid, &ghosts, &cubic, &params()).is_err());
    }
}
