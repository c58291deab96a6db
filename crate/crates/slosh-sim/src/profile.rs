//! Manoeuvre profiles: piecewise-constant thrust channels and the attitude
//! reference.

use crate::error::SimError;
use serde::{Deserialize, Serialize};

/// A constant-value interval `[t_start, t_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub value: f64,
}

impl Segment {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_start && t < self.t_end
    }

    pub fn impulse(&self) -> f64 {
        (self.t_end - self.t_start) * self.value
    }
}

/// Piecewise-constant input channels over a horizon. Outside all segments a
/// channel is zero; the attitude reference defaults to zero as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManoeuvreProfile {
    pub ux: Vec<Segment>,
    pub uy: Vec<Segment>,
    pub theta_ref: Vec<Segment>,
    pub horizon: f64,
}

fn eval_segments(segments: &[Segment], t: f64) -> f64 {
    segments
        .iter()
        .find(|s| s.contains(t))
        .map_or(0.0, |s| s.value)
}

impl ManoeuvreProfile {
    pub fn validate(&self) -> Result<(), SimError> {
        for (name, segs) in [("ux", &self.ux), ("uy", &self.uy), ("theta_ref", &self.theta_ref)] {
            let mut sorted = segs.clone();
            sorted.sort_by(|a, b| a.t_start.total_cmp(&b.t_start));
            for s in &sorted {
                if !(s.t_start.is_finite() && s.t_end.is_finite() && s.value.is_finite()) {
                    return Err(SimError::Config(format!("{name}: non-finite segment")));
                }
                if s.t_end <= s.t_start {
                    return Err(SimError::Config(format!("{name}: empty or inverted segment")));
                }
                if s.t_start < 0.0 || s.t_end > self.horizon {
                    return Err(SimError::Config(format!("{name}: segment outside horizon")));
                }
            }
            for w in sorted.windows(2) {
                if w[1].t_start < w[0].t_end {
                    return Err(SimError::Config(format!("{name}: overlapping segments")));
                }
            }
        }
        Ok(())
    }

    pub fn thrust(&self, t: f64) -> (f64, f64) {
        (eval_segments(&self.ux, t), eval_segments(&self.uy, t))
    }

    pub fn theta_ref(&self, t: f64) -> f64 {
        eval_segments(&self.theta_ref, t)
    }

    /// Net impulse per thrust axis.
    pub fn net_impulse(&self) -> (f64, f64) {
        (
            self.ux.iter().map(Segment::impulse).sum(),
            self.uy.iter().map(Segment::impulse).sum(),
        )
    }
}

/// Configuration of manoeuvre profile 1: constant x-thrust, an attitude
/// reference step, and a later y-axis disturbance pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileOneConfig {
    pub horizon: f64,
    pub ux: f64,
    pub theta_step: f64,
    pub theta_step_time: f64,
    pub uy_pulse: f64,
    pub uy_start: f64,
    pub uy_end: f64,
}

/// Configuration of manoeuvre profile 2: simultaneous x/y pulses, a dwell,
/// then equal-and-opposite pulses. The attitude reference stays at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTwoConfig {
    pub horizon: f64,
    pub ux: f64,
    pub uy: f64,
    pub pulse_start: f64,
    pub pulse_duration: f64,
    pub dwell: f64,
}

/// Build manoeuvre profile 1 or 2 from its configuration.
pub fn build_profile(
    id: u8,
    one: &ProfileOneConfig,
    two: &ProfileTwoConfig,
) -> Result<ManoeuvreProfile, SimError> {
    let profile = match id {
        1 => ManoeuvreProfile {
            ux: vec![Segment {
                t_start: 0.0,
                t_end: one.horizon,
                value: one.ux,
            }],
            uy: vec![Segment {
                t_start: one.uy_start,
                t_end: one.uy_end,
                value: one.uy_pulse,
            }],
            theta_ref: vec![Segment {
                t_start: one.theta_step_time,
                t_end: one.horizon,
                value: one.theta_step,
            }],
            horizon: one.horizon,
        },
        2 => {
            let first = Segment {
                t_start: two.pulse_start,
                t_end: two.pulse_start + two.pulse_duration,
                value: 0.0,
            };
            let second_start = first.t_end + two.dwell;
            let make = |value: f64| {
                vec![
                    Segment { value, ..first },
                    Segment {
                        t_start: second_start,
                        t_end: second_start + two.pulse_duration,
                        value: -value,
                    },
                ]
            };
            ManoeuvreProfile {
                ux: make(two.ux),
                uy: make(two.uy),
                theta_ref: Vec::new(),
                horizon: two.horizon,
            }
        }
        other => {
            return Err(SimError::Config(format!(
                "unknown manoeuvre profile id {other}"
            )))
        }
    };
    profile.validate()?;
    Ok(profile)
}
