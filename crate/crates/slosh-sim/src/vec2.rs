//! Minimal 2D vector generic over the simulation scalar.

use crate::scalar::Real;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2<S: Real> {
    pub x: S,
    pub y: S,
}

impl<S: Real> Vec2<S> {
    #[inline(always)]
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    #[inline(always)]
    pub fn zero() -> Self {
        Vec2::new(S::zero(), S::zero())
    }

    #[inline(always)]
    pub fn from_f64(x: f64, y: f64) -> Self {
        Vec2::new(S::from_f64(x), S::from_f64(y))
    }

    #[inline(always)]
    pub fn dot(self, rhs: Self) -> S {
        self.x * rhs.x + self.y * rhs.y
    }

    #[inline(always)]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline(always)]
    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    /// Scalar 2D cross product `a × b = a_x b_y − a_y b_x`.
    #[inline(always)]
    pub fn cross(self, rhs: Self) -> S {
        self.x * rhs.y - self.y * rhs.x
    }

    /// Cross product of a scalar angular rate with this vector:
    /// `ω × v = (−ω v_y, ω v_x)`.
    #[inline(always)]
    pub fn rot_cross(omega: S, v: Self) -> Self {
        Vec2::new(-omega * v.y, omega * v.x)
    }

    #[inline(always)]
    pub fn scale(self, s: S) -> Self {
        Vec2::new(self.x * s, self.y * s)
    }

    #[inline(always)]
    pub fn val(self) -> Vec2<f64> {
        Vec2::new(self.x.val(), self.y.val())
    }

    pub fn is_finite_val(self) -> bool {
        self.x.is_finite_val() && self.y.is_finite_val()
    }
}

impl<S: Real> Add for Vec2<S> {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Real> Sub for Vec2<S> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<S: Real> Neg for Vec2<S> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<S: Real> AddAssign for Vec2<S> {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<S: Real> SubAssign for Vec2<S> {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<S: Real> Mul<S> for Vec2<S> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, s: S) -> Self {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_sign_convention() {
        // x̂ × ŷ = +1 and ω × x̂ = ω ŷ
        let ex = Vec2::new(1.0, 0.0);
        let ey = Vec2::new(0.0, 1.0);
        assert_eq!(ex.cross(ey), 1.0);
        assert_eq!(Vec2::rot_cross(2.0, ex), Vec2::new(0.0, 2.0));
        assert_eq!(Vec2::rot_cross(2.0, ey), Vec2::new(-2.0, 0.0));
    }
}
