//! Solvers for axisymmetric nematic films spanning two coaxial rings.
//!
//! A film is described by its profile curve `rho` on `[-h, h]` with
//! `rho(±h) = r`. Its energy is
//!
//! ```text
//! E_c(rho) = ∫ rho √(1 + rho'²) + c rho'² / (rho √(1 + rho'²)) dx
//! ```
//!
//! where `c = kappa / (2 gamma)` weighs the nematic term against surface
//! tension. The crate covers the `c = 0` catenoid/Goldschmidt picture
//! ([`catenary`]), discrete profiles and their convex envelopes
//! ([`profile`]), exact evaluation of the discrete functional and of the
//! full director energy ([`energy`]), shooting solutions of the
//! Euler-Lagrange equation ([`elsolver`]), direct minimization
//! ([`minimizer`]) and the revolution surface itself ([`geometry`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catenary;
pub mod elsolver;
pub mod energy;
pub mod error;
pub mod format;
pub mod geometry;
pub mod minimizer;
pub mod params;
pub mod profile;
mod roots;

pub use error::{Error, Result};
pub use params::Parameters;
