//! PD attitude controller with zero-order hold.

use serde::{Deserialize, Serialize};

/// Feedback attitude controller `τ = Kp (θ̃ − θ) − Kd θ̇` with gains derived
/// from the static inertia and the desired closed-loop response:
/// `Kp = J ω²`, `Kd = 2 ξ J ω`.
///
/// The output is held constant between sampling instants by the simulation
/// loop (zero-order hold).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttitudeController {
    pub kp: f64,
    pub kd: f64,
    pub omega: f64,
    pub xi: f64,
}

impl AttitudeController {
    pub fn from_design(inertia: f64, omega: f64, xi: f64) -> Self {
        AttitudeController {
            kp: inertia * omega * omega,
            kd: 2.0 * xi * inertia * omega,
            omega,
            xi,
        }
    }

    /// One sampled control update.
    pub fn control_step(&self, theta_ref: f64, theta: f64, theta_dot: f64) -> f64 {
        self.kp * (theta_ref - theta) - self.kd * theta_dot
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_setpoint() {
        let c = AttitudeController::from_design(133.84, 0.2 * std::f64::consts::PI, 0.7);
        assert_eq!(c.control_step(0.3, 0.3, 0.0), 0.0);
    }

    #[test]
    fn benchmark_gains() {
        let c = AttitudeController::from_design(133.84, 0.2 * std::f64::consts::PI, 0.7);
        assert!((c.kp - 52.84).abs() < 0.01, "kp = {}", c.kp);
        assert!((c.kd - 117.73).abs() < 0.01, "kd = {}", c.kd);
    }

    #[test]
    fn control_law_is_linear() {
        let c = AttitudeController::from_design(133.84, 0.2 * std::f64::consts::PI, 0.7);
        for a in [0.5, -2.0, 3.25] {
            let base = c.control_step(0.2, 0.05, -0.01);
            let scaled = c.control_step(a * 0.2, a * 0.05, a * -0.01);
            assert_eq!(scaled, a * base);
        }
    }

    #[test]
    fn rigid_only_closed_loop_matches_second_order_design() {
        // Plant θ̈ = τ/J under the sampled PD law behaves like the designed
        // second-order system; estimate ξ and ω from the step response peak.
        let j = 133.84;
        let omega = 0.2 * std::f64::consts::PI;
        let xi = 0.7;
        let c = AttitudeController::from_design(j, omega, xi);
        let fast_dt = 1e-3;
        let slow_dt = 0.05;
        let steps_per_tick = (slow_dt / fast_dt) as usize;
        let theta_ref = 0.1;

        let mut theta = 0.0f64;
        let mut theta_dot = 0.0f64;
        let mut t = 0.0;
        let mut peak = (0.0, 0.0); // (theta, time)
        while t < 30.0 {
            let tau = c.control_step(theta_ref, theta, theta_dot);
            for _ in 0..steps_per_tick {
                theta_dot += tau / j * fast_dt;
                theta += theta_dot * fast_dt;
            }
            t += slow_dt;
            if theta > peak.0 {
                peak = (theta, t);
            }
        }
        let overshoot = (peak.0 - theta_ref) / theta_ref;
        let xi_est = {
            let l = overshoot.ln();
            -l / (std::f64::consts::PI.powi(2) + l * l).sqrt()
        };
        let omega_est = std::f64::consts::PI / (peak.1 * (1.0 - xi_est * xi_est).sqrt());
        assert!((xi_est - xi).abs() / xi < 0.1, "xi_est = {xi_est}");
        assert!((omega_est - omega).abs() / omega < 0.1, "omega_est = {omega_est}");
    }
}
