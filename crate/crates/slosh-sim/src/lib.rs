//! 2D weakly compressible SPH fuel-slosh simulator with two-way rigid-body
//! coupling.
//!
//! The crate provides:
//!
//! * normalized smoothing kernels and their gradients ([`kernel`]);
//! * fluid particle state, density/pressure evaluation and all pairwise
//!   forces, including the ghost-particle boundary exchange ([`forces`]);
//! * rigid-body dynamics, the coupled state transition and multi-rate
//!   symplectic time integration ([`dynamics`], [`integrate`], [`sim`]);
//! * scenario construction: particle spawning and fluid settling
//!   ([`scenario`]);
//! * Jacobians of the continuous-time dynamics by forward-mode dual numbers
//!   or central finite differences, with eigenvalue traces ([`linearize`]);
//! * the PD attitude controller, manoeuvre profiles and the identification
//!   excitation signal ([`control`], [`profile`], [`excitation`]).

pub mod control;
pub mod dynamics;
pub mod error;
pub mod excitation;
pub mod forces;
pub mod ghost;
pub mod grid;
pub mod integrate;
pub mod kernel;
pub mod linearize;
pub mod particle;
pub mod profile;
pub mod scalar;
pub mod scenario;
pub mod sim;
pub mod spacecraft;
pub mod vec2;

pub use dynamics::{Plant, SystemState};
pub use error::SimError;
pub use kernel::{KernelKind, SmoothingKernel};
pub use particle::{FluidParams, ParticleField};
pub use scalar::{Dual, Real};
pub use spacecraft::{ControlInput, SpacecraftParams, SpacecraftState};
pub use vec2::Vec2;
