//! Simulation and verification toolkit for multi-target quantum search over
//! power-of-four embedded databases.
//!
//! * [`embedding`]: enlarged databases, symbol assignment, oracles.
//! * [`statevector`]: dense real-amplitude simulation of the iteration.
//! * [`analytic`]: closed-form success probabilities for any size.
//! * [`cost`]: oracle-call accounting and recursive execution.
//! * [`strategy`]: iteration choice, single searches, cross-path checks.

pub mod analytic;
pub mod cost;
pub mod dense;
pub mod embedding;
pub mod error;
pub mod statevector;
pub mod strategy;

pub use embedding::{Embedding, OracleSet, ProblemSpec};
pub use error::{Error, Result};
pub use statevector::StateVector;
