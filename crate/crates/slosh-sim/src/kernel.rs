//! Radially symmetric SPH smoothing kernels and their gradients.
//!
//! Two kernels are provided, both normalized over the 2D plane:
//!
//! * the cubic spline with support radius `2h`, used for density and the
//!   fluid-internal pressure/viscous forces;
//! * the spiky kernel with support radius `h`, used for the fluid-boundary
//!   forces because its gradient does not vanish near the centre.

use crate::error::SimError;
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Kernel families supported by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KernelKind {
    CubicSpline,
    Spiky3,
}

/// A smoothing kernel with fixed smoothing length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingKernel {
    kind: KernelKind,
    h: f64,
}

// 2D normalization constants. The cubic spline in the bracketed form
// (2−q)³ − 4(1−q)³ integrates over the plane to 14πh²/5 · C, so C = 5/(14π)
// makes ∬W dA = 1; the spiky constant 10/π is already normalized.
const CUBIC_NORM_2D: f64 = 5.0 / (14.0 * std::f64::consts::PI);
const SPIKY_NORM_2D: f64 = 10.0 / std::f64::consts::PI;

/// Cubic spline kernel value at distance `x` for smoothing length `h`.
///
/// Vanishes for `x ≥ 2h`. Errors on non-finite or negative input.
pub fn eval_cubic_spline(x: f64, h: f64) -> Result<f64, SimError> {
    check_kernel_args(x, h)?;
    Ok(cubic_spline_w(x, h))
}

/// Spiky kernel value at distance `x` for smoothing length `h`.
///
/// Vanishes for `x ≥ h`. Errors on non-finite or negative input.
pub fn eval_spiky3(x: f64, h: f64) -> Result<f64, SimError> {
    check_kernel_args(x, h)?;
    Ok(spiky3_w(x, h))
}

fn check_kernel_args(x: f64, h: f64) -> Result<(), SimError> {
    if !x.is_finite() || x < 0.0 {
        return Err(SimError::Domain(format!("kernel distance {x} invalid")));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(SimError::Domain(format!("smoothing length {h} invalid")));
    }
    Ok(())
}

#[inline(always)]
fn cubic_spline_w<S: Real>(x: S, h: f64) -> S {
    let c = S::from_f64(CUBIC_NORM_2D / (h * h));
    let q = x * S::from_f64(1.0 / h);
    let two = S::from_f64(2.0);
    let one = S::one();
    if q.val() < 1.0 {
        let a = two - q;
        let b = one - q;
        c * (a * a * a - S::from_f64(4.0) * (b * b * b))
    } else if q.val() < 2.0 {
        let a = two - q;
        c * (a * a * a)
    } else {
        S::zero()
    }
}

/// d/dx of the cubic spline. The two branches agree in value and slope at
/// q = 1, so evaluating the first branch on [0, 1) is unambiguous.
#[inline(always)]
fn cubic_spline_dw<S: Real>(x: S, h: f64) -> S {
    let c = S::from_f64(CUBIC_NORM_2D / (h * h * h));
    let q = x * S::from_f64(1.0 / h);
    let two = S::from_f64(2.0);
    let one = S::one();
    if q.val() < 1.0 {
        let a = two - q;
        let b = one - q;
        c * (S::from_f64(-3.0) * a * a + S::from_f64(12.0) * (b * b))
    } else if q.val() < 2.0 {
        let a = two - q;
        c * (S::from_f64(-3.0) * a * a)
    } else {
        S::zero()
    }
}

#[inline(always)]
fn spiky3_w<S: Real>(x: S, h: f64) -> S {
    if x.val() < h {
        let c = S::from_f64(SPIKY_NORM_2D / (h * h * h * h * h));
        let d = S::from_f64(h) - x;
        c * d * d * d
    } else {
        S::zero()
    }
}

#[inline(always)]
fn spiky3_dw<S: Real>(x: S, h: f64) -> S {
    if x.val() < h {
        let c = S::from_f64(-3.0 * SPIKY_NORM_2D / (h * h * h * h * h));
        let d = S::from_f64(h) - x;
        c * d * d
    } else {
        S::zero()
    }
}

impl SmoothingKernel {
    pub fn new(kind: KernelKind, h: f64) -> Result<Self, SimError> {
        if !h.is_finite() || h <= 0.0 {
            return Err(SimError::Domain(format!("smoothing length {h} invalid")));
        }
        Ok(SmoothingKernel { kind, h })
    }

    pub fn cubic(h: f64) -> Result<Self, SimError> {
        Self::new(KernelKind::CubicSpline, h)
    }

    pub fn spiky(h: f64) -> Result<Self, SimError> {
        Self::new(KernelKind::Spiky3, h)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Distance beyond which the kernel and its gradient are exactly zero.
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            KernelKind::CubicSpline => 2.0 * self.h,
            KernelKind::Spiky3 => self.h,
        }
    }

    /// Kernel value at distance `x ≥ 0`.
    #[inline(always)]
    pub fn eval<S: Real>(&self, x: S) -> S {
        match self.kind {
            KernelKind::CubicSpline => cubic_spline_w(x, self.h),
            KernelKind::Spiky3 => spiky3_w(x, self.h),
        }
    }

    /// Radial derivative dW/dx at distance `x ≥ 0`.
    #[inline(always)]
    pub fn deriv<S: Real>(&self, x: S) -> S {
        match self.kind {
            KernelKind::CubicSpline => cubic_spline_dw(x, self.h),
            KernelKind::Spiky3 => spiky3_dw(x, self.h),
        }
    }

    /// Gradient with respect to the first particle's coordinates,
    /// `∇_i W(‖r_ij‖) = dW/dr · r_ij / ‖r_ij‖` for `r_ij = r_i − r_j`.
    ///
    /// Returns the zero vector at zero separation and outside the support.
    #[inline(always)]
    pub fn grad<S: Real>(&self, r_ij: Vec2<S>) -> Vec2<S> {
        let dist = r_ij.norm_sq();
        let support = self.support_radius();
        if dist.val() <= 0.0 || dist.val() >= support * support {
            return Vec2::zero();
        }
        let dist = dist.sqrt();
        let dw = self.deriv(dist);
        r_ij.scale(dw / dist)
    }

    /// Gradient given a precomputed separation distance (must equal
    /// `r_ij.norm()`); saves the square root in the inner force loops.
    #[inline(always)]
    pub fn grad_with_dist<S: Real>(&self, r_ij: Vec2<S>, dist: S) -> Vec2<S> {
        if dist.val() <= 0.0 || dist.val() >= self.support_radius() {
            return Vec2::zero();
        }
        let dw = self.deriv(dist);
        r_ij.scale(dw / dist)
    }
}
