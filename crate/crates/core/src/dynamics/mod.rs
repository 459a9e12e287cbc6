//! Hamiltonians, the Lindblad right-hand side and time integration.

mod evolve;
mod hamiltonian;
mod integrator;
mod liouvillian;
mod state;
mod steady;

pub use evolve::{
    drive, evolve, evolve_with, sample_times, EvolveSummary, Evolver, Schedule, Stepping,
};
pub use hamiltonian::build_hamiltonian;
pub use integrator::{Dopri5, OdeSystem, StepStats};
pub use liouvillian::{lindblad_rhs, Liouvillian};
pub use state::{
    hermitian_deviation, hermitian_eigenvalues, max_abs_diff, min_hermitian_eigenvalue, symmetrize,
    Diagnostics, SystemState, STATE_TOL,
};
pub use steady::{detect_steady_state, SteadyState, SteadyStateMonitor};
