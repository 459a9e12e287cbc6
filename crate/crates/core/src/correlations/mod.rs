//! Entanglement and discord between the atoms, plus cavity observables.

mod concurrence;
mod discord;
pub mod entropy;
pub mod random;

pub use concurrence::{concurrence_branches, concurrence_general, concurrence_x};
pub use discord::{
    discord_bruteforce, discord_x, discord_x_branches, mutual_information, BruteForceDiscord,
    MeasurementGrid,
};

use log::debug;

use crate::dynamics::{Diagnostics, SystemState};
use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, C64};

/// Imaginary parts of `Tr(ρ O)` at or above this are an error.
pub const EXPECTATION_IMAG_LIMIT: f64 = 1e-8;

/// One output row of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub t: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub mutual_info: f64,
    /// `I − D`
    pub classical_corr: f64,
    /// `⟨N_T⟩`
    pub n_total: f64,
    /// `⟨N_A⟩`
    pub n_atoms: f64,
    pub trace_dev: f64,
    pub herm_dev: f64,
    pub min_eig: f64,
}

impl CorrelationRecord {
    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            trace_dev: self.trace_dev,
            herm_dev: self.herm_dev,
            min_eig: self.min_eig,
        }
    }
}

/// `Tr(ρ O)` for Hermitian `O`.
pub fn expectation(state: &SystemState, op: &OperatorMatrix) -> Result<f64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: op.dim(),
        });
    }
    // Tr(ρ O) = Σ_k Σ_i O_ki ρ_ik
    let mut acc = C64::new(0.0, 0.0);
    for (k, i, v) in op.triplets() {
        acc += v * state.rho[[i, k]];
    }
    if acc.im.abs() >= EXPECTATION_IMAG_LIMIT {
        return Err(Error::NonHermitianExpectation { imag: acc.im });
    }
    if acc.im.abs() >= 1e-10 {
        debug!(
            "discarding imaginary part {:e} of expectation value",
            acc.im
        );
    }
    Ok(acc.re)
}
