//! Simulation and analysis toolkit for a quadratic three-dimensional chaotic
//! system with four coexisting attractors.
//!
//! The crate is organised bottom-up:
//!
//! - [`dynamics`]: the vector field, its amplitude-scaled and robot-coupled
//!   forms, Jacobian and divergence.
//! - [`integrate`]: fixed-step RK4 and adaptive Dormand–Prince integration with
//!   event detection.
//! - [`equilibria`]: closed-form equilibria and eigenvalue stability.
//! - [`lyapunov`]: Lyapunov spectrum, Kaplan–Yorke dimension, mean divergence.
//! - [`bifurcation`]: continuation scans over `a8` and the chaos mask.
//! - [`basin`]: attractor classification, basin grids and basin-size scaling.
//! - [`circuit`]: analog realization (resistor synthesis, dynamic range).
//! - [`robot`]: chaos-driven differential-drive navigation and coverage.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basin;
pub mod bifurcation;
pub mod circuit;
pub mod dynamics;
pub mod equilibria;
mod error;
pub mod export;
pub mod integrate;
pub mod lyapunov;
pub mod robot;

pub use dynamics::{Params, ScaleSpec, State3, State6};
pub use error::{Error, Result};
