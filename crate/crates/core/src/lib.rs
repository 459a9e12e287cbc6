//! Two identical two-level atoms coupled to a lossy single-mode cavity,
//! with and without the rotating-wave approximation.
//!
//! The crate evolves the atoms+cavity density matrix under the cavity-loss
//! master equation starting from the zero-excitation state `|g,g,0⟩`, reduces
//! it to the two-atom X state and evaluates concurrence, quantum discord,
//! mutual information and classical correlations along the trajectory.

pub mod config;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod output;
pub mod pipeline;
pub mod reduction;

pub use config::{InitialState, SimConfig};
pub use error::{Error, Result};
