//! Numerical laboratory for environment-induced decoherence.
//!
//! The crate is organised by model family:
//!
//! * [`qcore`]: spatial grids, wave packets, density matrices and the ideal
//!   (von Neumann) measurement map.
//! * [`rates`]: closed-form decoherence factors and rates (scattering
//!   localisation, QED vacuum polarisation and pair creation, Newtonian
//!   gravity).
//! * [`master`]: time integration of the free-particle decoherence master
//!   equation and the Caldeira–Leggett equation.
//! * [`wigner`]: Wigner transform of spatial density matrices and harmonic
//!   oscillator eigenstates.
//! * [`zeno`]: quantum Zeno analysis, the continuous pointer model and the
//!   chiral two-level model.
//! * [`cli`]: scenario files, the experiment runner and CSV output used by the
//!   `decolab` binary.
//!
//! All dynamics run in natural units (ħ = 1, default mass 1). CGS numbers are
//! produced only by the closed-form estimates in [`rates`] and
//! [`master::decoherence_relaxation_ratio`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
mod fft;
pub mod master;
pub mod qcore;
pub mod rates;
pub mod tolerance;
pub mod units;
pub mod wigner;
pub mod zeno;

pub use error::{Error, Result};
pub use qcore::{DensityMatrix, SpatialGrid, WaveFunction};
