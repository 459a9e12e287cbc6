//! Experiment orchestration: single runs, parameter sweeps and the
//! Fock-truncation convergence study.

mod convergence;
mod sweep;

pub use convergence::{convergence_study, ConvergenceReport, CONVERGENCE_TOL};
pub use sweep::{run_sweep, SweepAxis, SweepPoint, SweepSpec};

use std::ops::ControlFlow;

use crate::config::SimConfig;
use crate::correlations::{
    concurrence_x, discord_x, expectation, mutual_information, CorrelationRecord,
};
use crate::dynamics::{
    drive, Diagnostics, EvolveSummary, Evolver, SteadyStateMonitor, Stepping, SystemState,
};
use crate::error::Result;
use crate::hilbert::{excitation_operators, BasisSpec, OperatorMatrix};
use crate::reduction::{partial_trace_cavity, to_xstate, XState};

/// Turns sampled states into correlation records.
pub struct RecordBuilder {
    basis: BasisSpec,
    n_total: OperatorMatrix,
    n_atoms: OperatorMatrix,
}

impl RecordBuilder {
    pub fn new(basis: BasisSpec) -> Self {
        let (n_total, n_atoms) = excitation_operators(&basis);
        Self {
            basis,
            n_total,
            n_atoms,
        }
    }

    pub fn xstate(&self, state: &SystemState) -> Result<XState> {
        to_xstate(&partial_trace_cavity(state, &self.basis)?)
    }

    pub fn record(
        &self,
        state: &SystemState,
        diag: &Diagnostics,
    ) -> Result<(CorrelationRecord, XState)> {
        let x = self.xstate(state)?;
        let discord = discord_x(&x);
        let mutual_info = mutual_information(&x.to_matrix());
        let rec = CorrelationRecord {
            t: state.t,
            discord,
            concurrence: concurrence_x(&x),
            mutual_info,
            classical_corr: mutual_info - discord,
            n_total: expectation(state, &self.n_total)?,
            n_atoms: expectation(state, &self.n_atoms)?,
            trace_dev: diag.trace_dev,
            herm_dev: diag.herm_dev,
            min_eig: diag.min_eig,
        };
        Ok((rec, x))
    }
}

/// Everything a single run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: SimConfig,
    pub records: Vec<CorrelationRecord>,
    /// Whether the trailing-window criterion held at the last sample.
    pub steady_reached: bool,
    /// Largest elementwise change of `ρ` over the trailing window at the end.
    pub steady_max_change: f64,
    /// Reduced atomic state at the last sample.
    pub final_xstate: XState,
    pub final_state: SystemState,
    /// Largest off-X residual seen along the trajectory.
    pub max_residual_offx: f64,
    pub summary: EvolveSummary,
}

impl RunOutput {
    pub fn terminal(&self) -> &CorrelationRecord {
        self.records
            .last()
            .expect("a run has at least the initial sample")
    }
}

/// Correlation records of one run, one per sample.
pub fn run_single(config: &SimConfig) -> Result<Vec<CorrelationRecord>> {
    Ok(run_detailed(config, Stepping::Adaptive)?.records)
}

/// Like [`run_single`] but keeps the steady-state verdict, the final state
/// and the integrator summary.
pub fn run_detailed(config: &SimConfig, stepping: Stepping<'_>) -> Result<RunOutput> {
    let mut ev = Evolver::new(config)?;
    let builder = RecordBuilder::new(*ev.basis());
    let mut monitor = SteadyStateMonitor::new(
        config.steady_window,
        config.steady_tol,
        config.sample_interval,
    );
    let mut records = Vec::new();
    let mut last_x = None;
    let mut steady = (false, f64::INFINITY);
    let mut max_residual: f64 = 0.0;
    let mut failure = None;

    let summary = drive(&mut ev, stepping, |state, diag| {
        match builder.record(state, diag) {
            Ok((rec, x)) => {
                max_residual = max_residual.max(x.residual_offx);
                records.push(rec);
                last_x = Some(x);
            }
            Err(e) => {
                failure = Some(e.context(format!("sample t = {}", state.t)));
                return ControlFlow::Break(());
            }
        }
        let s = monitor.push(state);
        steady = (s.reached, s.max_change);
        if s.reached && config.stop_at_steady {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(RunOutput {
        config: config.clone(),
        records,
        steady_reached: steady.0,
        steady_max_change: steady.1,
        final_xstate: last_x.expect("at least one sample"),
        final_state: ev.state().clone(),
        max_residual_offx: max_residual,
        summary,
    })
}

/// Zero/positive structure of a concurrence trajectory. Zero means exactly
/// `0.0`, which the `max{0, …}` form produces whenever both branches are
/// non-positive.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeathBirthCount {
    /// Transitions from positive to zero.
    pub deaths: usize,
    /// Transitions from zero back to positive.
    pub births: usize,
    /// Start of the final zero stretch when the trajectory ends dead.
    pub final_death: Option<f64>,
}

pub fn death_birth_count(records: &[CorrelationRecord]) -> DeathBirthCount {
    let mut out = DeathBirthCount::default();
    let mut prev: Option<bool> = None;
    for r in records {
        let alive = r.concurrence > 0.0;
        match (prev, alive) {
            (Some(true), false) => {
                out.deaths += 1;
                out.final_death = Some(r.t);
            }
            (Some(false), true) => {
                out.births += 1;
                out.final_death = None;
            }
            (None, false) => out.final_death = Some(r.t),
            _ => {}
        }
        prev = Some(alive);
    }
    out
}
