//! Jacobians of the continuous-time state transition and eigenvalue traces.
//!
//! Forward mode seeds one state (or input) coordinate at a time with a dual
//! number and propagates it through the full pipeline, ghost kinematics
//! included. Central finite differences provide the independent cross-check
//! route; the two must agree wherever the dynamics are smooth.

use crate::dynamics::{
    pack_state, state_from_components, state_transition, Plant, SystemState,
};
use crate::error::SimError;
use crate::scalar::Dual;
use crate::spacecraft::ControlInput;
use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

/// Differentiation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianMethod {
    ForwardMode,
    CentralFd,
}

/// Linearized dynamics `ẋ ≈ A (x − x₀) + B (u − u₀) + f(x₀, u₀)`.
#[derive(Debug, Clone)]
pub struct LinearizedSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub time_tag: f64,
}

/// Relative step for central differences, per coordinate.
fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Jacobians ∂f/∂x and ∂f/∂u at an operating point.
pub fn jacobian(
    plant: &Plant,
    state: &SystemState<f64>,
    u: [f64; 3],
    method: JacobianMethod,
) -> Result<LinearizedSystem, SimError> {
    let x0 = pack_state(state);
    let n = x0.len();

    let columns: Result<Vec<Vec<f64>>, SimError> = match method {
        JacobianMethod::ForwardMode => (0..n + 3)
            .into_par_iter()
            .map(|seed| {
                let xs: Vec<Dual> = x0
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| Dual::new(v, if i == seed { 1.0 } else { 0.0 }))
                    .collect();
                let us = ControlInput::new(
                    Dual::new(u[0], if seed == n { 1.0 } else { 0.0 }),
                    Dual::new(u[1], if seed == n + 1 { 1.0 } else { 0.0 }),
                    Dual::new(u[2], if seed == n + 2 { 1.0 } else { 0.0 }),
                );
                let dual_state = state_from_components::<Dual>(state, &xs);
                let xdot = state_transition(plant, &dual_state, &us)?;
                Ok(xdot.iter().map(|d| d.du).collect())
            })
            .collect(),
        JacobianMethod::CentralFd => (0..n + 3)
            .into_par_iter()
            .map(|seed| {
                let eval = |x: &[f64], uu: [f64; 3]| -> Result<Vec<f64>, SimError> {
                    let st = state_from_components::<f64>(state, x);
                    state_transition(plant, &st, &ControlInput::from_array(uu))
                };
                let (fp, fm, h) = if seed < n {
                    let h = fd_step(x0[seed]);
                    let mut xp = x0.clone();
                    let mut xm = x0.clone();
                    xp[seed] += h;
                    xm[seed] -= h;
                    if xp[seed] == x0[seed] || xm[seed] == x0[seed] {
                        return Err(SimError::FdTolerance(format!(
                            "perturbation of coordinate {seed} underflows"
                        )));
                    }
                    (eval(&xp, u)?, eval(&xm, u)?, h)
                } else {
                    let c = seed - n;
                    let h = fd_step(u[c]);
                    let mut up = u;
                    let mut um = u;
                    up[c] += h;
                    um[c] -= h;
                    (eval(&x0, up)?, eval(&x0, um)?, h)
                };
                Ok(fp
                    .iter()
                    .zip(&fm)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect())
            })
            .collect(),
    };
    let columns = columns?;

    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, 3);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            if !v.is_finite() {
                return Err(SimError::NumericBlowup {
                    step: None,
                    detail: format!("Jacobian entry ({i}, {j}) is non-finite"),
                });
            }
            if j < n {
                a[(i, j)] = v;
            } else {
                b[(i, j - n)] = v;
            }
        }
    }

    Ok(LinearizedSystem { a, b, time_tag: 0.0 })
}

/// All complex eigenvalues of the linearized dynamics (unordered).
pub fn eigenvalues(lin: &LinearizedSystem) -> Result<Vec<Complex<f64>>, SimError> {
    complex_spectrum(&lin.a)
}

/// Dense unsymmetric eigensolve via the real Schur form.
pub fn complex_spectrum(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>, SimError> {
    let size = m.nrows();
    if size == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-12, 0).ok_or(
        SimError::EigenNonConvergence { size },
    )?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Spectra along a trajectory, sampled every `stride` entries; the logged
/// input is held fixed (exogenous) so the controller stays out of the loop.
pub fn eigen_trace(
    plant: &Plant,
    trajectory: &[(f64, SystemState<f64>, [f64; 3])],
    stride: usize,
    method: JacobianMethod,
) -> Result<Vec<(f64, Vec<Complex<f64>>)>, SimError> {
    let stride = stride.max(1);
    let mut out = Vec::new();
    for (t, state, u) in trajectory.iter().step_by(stride) {
        let lin = jacobian(plant, state, *u, method).map_err(|e| match e {
            SimError::NumericBlowup { step, detail } => SimError::NumericBlowup {
                step,
                detail: format!("at trajectory time {t}: {detail}"),
            },
            other => other,
        })?;
        out.push((*t, eigenvalues(&lin)?));
    }
    Ok(out)
}

/// Directed Hausdorff-style distance between two spectra: the largest
/// distance from any eigenvalue of one set to its nearest match in the other,
/// symmetrized. Zero when the spectra agree as multisets up to matching.
pub fn spectral_distance(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let one_way = |from: &[Complex<f64>], to: &[Complex<f64>]| -> f64 {
        from.iter()
            .map(|x| {
                to.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}
