//! Exact computations with lattices in the oscillator group Osc₁(ω_r, λB_{x,y}).
//!
//! The crate normalizes lattice presentations, classifies lattices up to
//! automorphism by the data `(r, λ, (x,y), ξ₀)`, and recomputes the table of
//! canonical `ξ₀` by orbit enumeration.

pub mod automorphism;
pub mod classify;
pub mod error;
pub mod group;
pub mod heisnorm;
pub mod intlin;
pub mod scalar;
pub mod verify;

pub use error::{OscError, Result};
