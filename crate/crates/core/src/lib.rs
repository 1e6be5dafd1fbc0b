//! Cold quark-gluon plasma hydrodynamics: equation of state, the coefficients of
//! the Kadomtsev-Petviashvili family of wave equations for baryon-density
//! perturbations, their exact solitons, and pseudo-spectral integrators used to
//! check those solitons numerically.
//!
//! Everything is computed in fm-based natural units (`ħ = c = 1`). Masses given in
//! MeV are converted once, through [`units::HBAR_C_MEV_FM`].
//!
//! The crate is organised as
//!
//! - [`eos`]: uniform and gradient-dependent energy density and pressure, the
//!   background constant `A` and the speed of sound.
//! - [`kp_model`]: nonlinear/dispersive coefficients and the wave-equation
//!   bundles (cartesian KP, cylindrical KP, KdV, breaking-wave, non-relativistic).
//! - [`solitons`]: closed-form solitons, existence conditions and region scans.
//! - [`solver`]: pseudo-spectral KdV / breaking-wave / KP integration and the
//!   finite-difference residual check of analytic solutions.
//! - [`acoustics`]: linearised pressure waves.
//! - [`experiments`], [`figures`]: the numerical checks and the pinned figure data.
//! - [`cli`], [`config`], [`table`], [`sweep`]: the command line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acoustics;
pub mod cli;
pub mod config;
pub mod eos;
pub mod error;
pub mod experiments;
pub mod field;
pub mod figures;
pub mod kp_model;
pub mod solitons;
pub mod solver;
pub mod spectral;
pub mod sweep;
pub mod table;
pub mod units;

pub use eos::{EosParameters, MediumCoefficients};
pub use error::{Error, Result};
pub use field::ScalarField3D;
pub use kp_model::{build_wave_spec, WaveEquationKind, WaveEquationSpec};
