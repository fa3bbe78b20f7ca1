//! Exact simulation of discrete-time unitary quantum dynamics interrupted by
//! stochastic resets.
//!
//! A state `|0>` is repeatedly hit by a gate `U(theta) = exp(i theta H)`. At
//! every step the system is instead sent back to `|0>` with a probability
//! `r_n` that depends only on the number `n` of gates applied since the last
//! reset. The crate provides
//!
//! * [`ensemble`]: the exact mixture `rho(t) = sum_n P_n(t) |n><n|` for any
//!   [`ResetSchedule`], with convergence tracking;
//! * [`poisson`]: constant-rate resetting, where the steady state is known in
//!   closed form, its weak-reset limit, and gate resonances;
//! * [`observables`]: two-qubit correlators, concurrence and local quantum
//!   uncertainty;
//! * [`montecarlo`]: trajectory sampling used to cross-check the ensemble.
//!
//! All matrix code is generic over [`Real`]; the `f64` aliases below are what
//! most callers want.

pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod models;
pub mod montecarlo;
pub mod observables;
pub mod poisson;
pub mod scalar;
pub mod schedules;
pub mod table;

pub use error::{Error, Result};
pub use scalar::Real;
pub use schedules::ResetSchedule;

/// Double precision complex scalar.
pub type C64 = linalg::Complex<f64>;
/// Double precision dense matrix.
pub type ComplexMatrix = linalg::Matrix<f64>;
/// Single precision dense matrix.
pub type ComplexMatrix32 = linalg::Matrix<f32>;
/// Double precision spectral decomposition.
pub type SpectralDecomposition = linalg::Spectral<f64>;
/// Double precision gate model.
pub type GateModel = models::GateModel<f64>;
/// Double precision ensemble state.
pub type EnsembleState = ensemble::EnsembleState<f64>;
