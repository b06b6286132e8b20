//! Circuit cutting of two-qubit Z rotations with quasi-probability sampling.
//!
//! Layers of `R_zz(θ)` gates that straddle a partition `A | B` are replaced
//! by signed mixtures of local operations. Three schemes are provided:
//! independent cuts, joint virtual gate teleportation with one ancilla per
//! gate and side, and an ancilla-free joint decomposition for gates in one
//! time slice. Every decomposition can be checked against the exact channel
//! and executed as independent fragments on the bundled simulator.

pub mod circuit;
pub mod cli;
pub mod cutting;
pub mod error;
pub mod estimator;
pub mod observable;
pub mod qpd;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
