//! Continuous normalization flow for Hamiltonians near a nonresonant
//! elliptic fixed point.
//!
//! The Hamiltonian `H_2 + H_⋄` with `H_2 = sum omega_j z_j zbar_j` is
//! deformed along `dH/ddelta = -{xi H, H_2 + H}`. In the rescaled
//! coefficients `calH_k = e^{omega_{k'} delta} H_k` the system is nilpotent,
//! so every coefficient is an exact finite sum of `delta^s e^{-nu delta}`
//! terms and the limit `delta -> +inf` is the Birkhoff normal form.

pub mod algebra;
pub mod asymptotic;
pub mod birkhoff;
pub mod cli;
pub mod error;
pub mod exp_poly;
pub mod flow;
pub mod io;
pub mod majorant;

pub use error::{Error, Result};
