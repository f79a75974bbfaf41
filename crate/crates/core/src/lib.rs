//! Simulation of identical particles condensed in a single spatial mode, the
//! mode-splitting and mode-mixing maps that move them onto distinguishable
//! modes, and the entanglement carried along the way.
//!
//! The crate is organised bottom-up:
//!
//! - [`states`]: symmetric two-level states of `N` bosons in first and second
//!   quantization, ladder operators, reduced states and collective spin moments.
//! - [`splitting`]: beamsplitters and passive multimode networks, sector
//!   projection under particle-number superselection, and Schmidt
//!   decompositions in the mode and particle pictures.
//! - [`mixing`]: block-structured maps between two-mode sector spaces, the
//!   commutation test against collective (de-)excitation, and its
//!   first-quantization counterpart.
//! - [`protocol`]: Monte Carlo simulation of the repeat-until-success extraction
//!   protocol.
//! - [`entanglement`]: Schmidt entropy, concurrence, tangle, the monogamy chain
//!   and spin-squeezing bounds.
//! - [`cli`]: state-spec parsing, run records and the command implementations
//!   behind the `modesplit` binary.

pub mod cli;
pub mod entanglement;
mod error;
pub mod mixing;
pub mod numeric;
pub mod protocol;
pub mod splitting;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tolerance for normalization and equality checks on amplitudes.
pub const EPS_NORM: f64 = 1e-10;

/// Singular values below this are treated as exact zeros.
pub const EPS_RANK: f64 = 1e-9;

/// Largest particle number for which dense first-quantization vectors are built
/// by default (`2^14` amplitudes).
pub const DEFAULT_MAX_FIRST_QUANTIZATION: usize = 14;
