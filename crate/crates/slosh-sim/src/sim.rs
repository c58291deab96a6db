//! Multi-rate closed-loop simulation.
//!
//! Dynamics are integrated at the fast step; outputs are sampled, the control
//! input is updated (zero-order hold in between) and data is logged at the
//! slow step.

use crate::control::AttitudeController;
use crate::dynamics::{Plant, SystemState};
use crate::error::SimError;
use crate::excitation::ExcitationSignal;
use crate::integrate::step_plant;
use crate::profile::ManoeuvreProfile;
use crate::spacecraft::ControlInput;
use std::time::Instant;

/// Uniformly sampled input–output record.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub sample_time: f64,
    pub t: Vec<f64>,
    pub u: Vec<[f64; 3]>,
    pub y: Vec<[f64; 6]>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Velocity-level output channels `[ṙ_x ṙ_y θ̇]`.
    pub fn velocity_outputs(&self) -> Vec<[f64; 3]> {
        self.y.iter().map(|y| [y[3], y[4], y[5]]).collect()
    }
}

/// Control-input source sampled once per slow tick.
pub trait InputProvider {
    fn update(&mut self, tick: usize, t: f64, y: &[f64; 6]) -> [f64; 3];
}

/// Zero input (free drift).
pub struct ZeroInput;

impl InputProvider for ZeroInput {
    fn update(&mut self, _tick: usize, _t: f64, _y: &[f64; 6]) -> [f64; 3] {
        [0.0; 3]
    }
}

/// Manoeuvre profile thrust with the feedback attitude controller closing
/// the torque channel.
pub struct ClosedLoopInput<'a> {
    pub profile: &'a ManoeuvreProfile,
    pub controller: AttitudeController,
}

impl InputProvider for ClosedLoopInput<'_> {
    fn update(&mut self, _tick: usize, t: f64, y: &[f64; 6]) -> [f64; 3] {
        let (ux, uy) = self.profile.thrust(t);
        let tau = self
            .controller
            .control_step(self.profile.theta_ref(t), y[2], y[5]);
        [ux, uy, tau]
    }
}

/// Open-loop replay of a precomputed input record.
pub struct SignalInput<'a> {
    pub signal: &'a ExcitationSignal,
}

impl InputProvider for SignalInput<'_> {
    fn update(&mut self, tick: usize, _t: f64, _y: &[f64; 6]) -> [f64; 3] {
        *self
            .signal
            .samples
            .get(tick)
            .unwrap_or(&[0.0, 0.0, 0.0])
    }
}

/// Time-stepping parameters.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub horizon: f64,
    pub fast_dt: f64,
    pub slow_dt: f64,
}

impl RunOptions {
    /// Number of fast substeps per slow tick; the slow step must be an
    /// integer multiple of the fast step.
    pub fn substeps(&self) -> Result<usize, SimError> {
        if self.fast_dt <= 0.0 || self.slow_dt <= 0.0 || self.horizon <= 0.0 {
            return Err(SimError::Config("time steps and horizon must be positive".into()));
        }
        let ratio = self.slow_dt / self.fast_dt;
        let rounded = ratio.round();
        if (ratio - rounded).abs() > 1e-9 * ratio.max(1.0) || rounded < 1.0 {
            return Err(SimError::Config(format!(
                "slow_dt {} is not an integer multiple of fast_dt {}",
                self.slow_dt, self.fast_dt
            )));
        }
        Ok(rounded as usize)
    }

    pub fn ticks(&self) -> usize {
        (self.horizon / self.slow_dt).round() as usize
    }
}

/// Wall-clock split between integration and data handling.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timing {
    pub dynamics_seconds: f64,
    pub logging_seconds: f64,
}

/// Successful run: the sampled record, the timing split and the final state.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub dataset: Dataset,
    pub timing: Timing,
    pub final_state: SystemState<f64>,
}

/// Failed run: the error (with the fast-step index) plus the last state that
/// was still finite.
#[derive(Debug)]
pub struct RunFailure {
    pub error: SimError,
    pub last_state: Box<SystemState<f64>>,
}

impl From<RunFailure> for SimError {
    fn from(f: RunFailure) -> Self {
        f.error
    }
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl std::error::Error for RunFailure {}

/// Run the multi-rate loop from `initial`, sampling `y_k`, updating the
/// control with zero-order hold and logging once per slow tick. An optional
/// callback receives every logged frame for snapshot export.
pub fn simulate(
    plant: &Plant,
    initial: &SystemState<f64>,
    input: &mut dyn InputProvider,
    opts: &RunOptions,
    mut frame_cb: Option<&mut dyn FnMut(usize, f64, &SystemState<f64>)>,
) -> Result<SimRun, RunFailure> {
    let wrap = |error: SimError, state: &SystemState<f64>| RunFailure {
        error,
        last_state: Box::new(state.clone()),
    };

    let substeps = opts.substeps().map_err(|e| wrap(e, initial))?;
    let ticks = opts.ticks();
    let mut state = initial.clone();
    let mut last_good = initial.clone();
    let mut dataset = Dataset {
        sample_time: opts.slow_dt,
        t: Vec::with_capacity(ticks),
        u: Vec::with_capacity(ticks),
        y: Vec::with_capacity(ticks),
    };
    let mut timing = Timing::default();

    for tick in 0..ticks {
        let t = tick as f64 * opts.slow_dt;
        let log_start = Instant::now();
        let y = state.output();
        let u = input.update(tick, t, &y);
        dataset.t.push(t);
        dataset.u.push(u);
        dataset.y.push(y);
        if let Some(cb) = frame_cb.as_deref_mut() {
            cb(tick, t, &state);
        }
        timing.logging_seconds += log_start.elapsed().as_secs_f64();

        let control = ControlInput::from_array(u);
        let dyn_start = Instant::now();
        for sub in 0..substeps {
            let step_index = tick * substeps + sub;
            step_plant(plant, &mut state, &control, opts.fast_dt, step_index)
                .map_err(|e| wrap(e, &last_good))?;
            last_good.clone_from(&state);
        }
        timing.dynamics_seconds += dyn_start.elapsed().as_secs_f64();
    }

    Ok(SimRun {
        dataset,
        timing,
        final_state: state,
    })
}
