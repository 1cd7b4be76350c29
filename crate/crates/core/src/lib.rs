//! Entanglement dynamics of two-level atoms in anisotropic band-gap
//! photonic reservoirs.
//!
//! The crate has four layers:
//!
//! - [`cspecfun`]: error function and Faddeeva function of complex argument,
//!   the special-function core behind the analytic amplitude.
//! - [`amplitude`]: reservoir parameters, the closed-form excited-state
//!   amplitude c(t), the band-edge memory kernel and the late-time trapped
//!   amplitude.
//! - [`oracle`]: a brute-force verification path that discretizes the
//!   reservoir into explicit modes and integrates the full coupled
//!   Schroedinger amplitudes.
//! - [`entanglement`]: density-matrix evolution of one and two qubits under
//!   the amplitude map, Wootters concurrence (general and closed-form), and
//!   finite-time disentanglement search.
//!
//! [`sweep`] binds these together for grid evaluation, CSV export and the
//! command-line front end.

pub mod amplitude;
pub mod cspecfun;
pub mod entanglement;
pub mod error;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};

/// Pervasive complex scalar; modulus and phase via `norm()` / `arg()`.
pub type C64 = num_complex::Complex64;
