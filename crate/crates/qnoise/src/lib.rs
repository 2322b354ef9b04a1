//! Simulator and measurement toolkit for the entanglement dynamics of four
//! non-interacting qubits subject to classical random telegraph noise, in a
//! common environment or in independent environments.
//!
//! The crate provides:
//! - dense complex linear algebra on few-qubit Hilbert spaces ([`matrix`]),
//! - exact RTN trajectory sampling and the characteristic function β_κ(t)
//!   ([`noise`]),
//! - GHZ/W initial states and entanglement witnesses ([`states`]),
//! - closed-form and Monte Carlo time evolution ([`evolution`]),
//! - negativity, a concurrence lower bound, witness expectations, entropies
//!   and the quantum Jensen–Shannon divergence ([`measures`]),
//! - sweep plumbing, table serialization and a validation suite
//!   ([`sweep`], [`emit`], [`validate`]).

pub mod emit;
pub mod error;
pub mod evolution;
pub mod matrix;
pub mod measures;
pub mod noise;
pub mod states;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
