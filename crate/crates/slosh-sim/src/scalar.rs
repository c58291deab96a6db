//! Scalar abstraction for the simulation pipeline.
//!
//! The whole force/dynamics pipeline is written generically over [`Real`] so
//! the same code evaluates with plain `f64` during time stepping and with
//! [`Dual`] numbers when forward-mode derivatives of the state transition are
//! required.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar type the SPH pipeline is generic over.
///
/// Branch decisions (kernel support checks, `min` selection) are taken on the
/// primal value, which is the standard convention for forward-mode dual
/// arithmetic.
pub trait Real:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_f64(v: f64) -> Self;
    /// Primal (value) part.
    fn val(self) -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    /// Branch on the primal value; the derivative follows the chosen branch.
    fn min(self, other: Self) -> Self {
        if self.val() <= other.val() {
            self
        } else {
            other
        }
    }
    fn max(self, other: Self) -> Self {
        if self.val() >= other.val() {
            self
        } else {
            other
        }
    }
    fn is_finite_val(self) -> bool {
        self.val().is_finite()
    }
}

impl Real for f64 {
    #[inline(always)]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline(always)]
    fn val(self) -> f64 {
        self
    }
    #[inline(always)]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline(always)]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline(always)]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline(always)]
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// First-order dual number for single-direction forward-mode differentiation.
///
/// Carries a value `re` and the directional derivative `du` along one seed
/// direction. Seeding one coordinate at a time and running the full pipeline
/// yields one Jacobian column per pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    #[inline(always)]
    pub fn new(re: f64, du: f64) -> Self {
        Dual { re, du }
    }

    /// A constant: zero derivative.
    #[inline(always)]
    pub fn constant(re: f64) -> Self {
        Dual { re, du: 0.0 }
    }

    /// The seeded variable: unit derivative.
    #[inline(always)]
    pub fn variable(re: f64) -> Self {
        Dual { re, du: 1.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline(always)]
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline(always)]
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline(always)]
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.re * rhs.re, self.du * rhs.re + self.re * rhs.du)
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline(always)]
    fn div(self, rhs: Dual) -> Dual {
        let inv = 1.0 / rhs.re;
        Dual::new(
            self.re * inv,
            (self.du * rhs.re - self.re * rhs.du) * inv * inv,
        )
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline(always)]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.du)
    }
}

impl PartialOrd for Dual {
    #[inline(always)]
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.re.partial_cmp(&other.re)
    }
}

impl Real for Dual {
    #[inline(always)]
    fn from_f64(v: f64) -> Self {
        Dual::constant(v)
    }
    #[inline(always)]
    fn val(self) -> f64 {
        self.re
    }
    #[inline(always)]
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.du / (2.0 * s))
    }
    #[inline(always)]
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }
    #[inline(always)]
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -self.du * self.re.sin())
    }
    #[inline(always)]
    fn abs(self) -> Self {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn dual_product_rule() {
        let x = Dual::variable(3.0);
        let y = x * x; // d(x^2)/dx = 2x
        assert!(close(y.re, 9.0));
        assert!(close(y.du, 6.0));
    }

    #[test]
    fn dual_quotient_rule() {
        let x = Dual::variable(2.0);
        let y = Dual::constant(1.0) / x; // d(1/x)/dx = -1/x^2
        assert!(close(y.re, 0.5));
        assert!(close(y.du, -0.25));
    }

    #[test]
    fn dual_sqrt_chain() {
        let x = Dual::variable(4.0);
        let y = x.sqrt();
        assert!(close(y.re, 2.0));
        assert!(close(y.du, 0.25));
    }

    #[test]
    fn dual_trig() {
        let x = Dual::variable(0.7);
        assert!(close(x.sin().du, 0.7f64.cos()));
        assert!(close(x.cos().du, -(0.7f64.sin())));
    }

    #[test]
    fn min_follows_primal_branch() {
        let a = Dual::new(1.0, 5.0);
        let b = Dual::new(2.0, 7.0);
        let m = Real::min(a, b);
        assert!(close(m.du, 5.0));
    }
}
