//! Gaussian-state toolkit for the squeezed vacuum `V(λ, γ)|00⟩` (OTCSS),
//! which mixes local and two-mode squeezing through
//! `V = exp[-i(λe^γ Q1P2 + λe^{-γ} Q2P1)]`.
//!
//! Every closed form (covariance matrix, Wigner and characteristic
//! functions, logarithmic negativity, displaced-parity Bell function,
//! teleportation fidelity) has an independent numerical counterpart in
//! [`fock`], which builds the state in a truncated two-mode Fock space.
//!
//! Conventions: `Q = (a + a†)/√2`, `P = (a - a†)/(i√2)`, phase-space
//! ordering `(q1, p1, q2, p2)`, vacuum covariance `I/2`.

pub mod bell;
pub mod error;
pub mod fock;
pub mod gaussian;
mod linalg;
pub mod otcss;
pub mod teleport;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{CovMatrix4, PhasePoint4, SymplecticSpectrum};
pub use otcss::{Coefficients, OtcssParams};

/// Library version, stamped into sweep metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
