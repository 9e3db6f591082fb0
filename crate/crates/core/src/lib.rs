//! Kink–antikink dynamics for the (1+1)-dimensional φ⁶ wave equation
//! `φ_tt − φ_xx + U'(φ) = 0` with `U(φ) = φ²(1−φ²)²`.
//!
//! * [`potential_kinks`]: the potential and closed-form kink profiles.
//! * [`functionals`]: quadrature, energies, interaction energy, norms.
//! * [`pde`]: initial data and velocity-Verlet evolution.
//! * [`modulation`]: orthogonal decomposition into kinks plus remainder.
//! * [`effective_ode`]: reduced two-body dynamics of the separation.
//! * [`experiments`]: scenarios, envelope verdicts and report files.

// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod effective_ode;
pub mod error;
pub mod experiments;
pub mod functionals;
pub mod grid;
pub mod modulation;
pub mod pde;
pub mod potential_kinks;

pub use error::{Error, Result};
