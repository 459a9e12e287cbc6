use std::ops::ControlFlow;

use crate::config::{InitialState, SimConfig};
use crate::error::{Error, Result};
use crate::hilbert::{build_basis, BasisSpec, OperatorMatrix, C64};

use super::hamiltonian::build_hamiltonian;
use super::integrator::{Dopri5, OdeSystem, StepStats};
use super::liouvillian::Liouvillian;
use super::state::{Diagnostics, SystemState, STATE_TOL};

impl OdeSystem for Liouvillian {
    fn dim(&self) -> usize {
        Liouvillian::dim(self).pow(2)
    }

    fn rhs(&self, y: &[C64], dy: &mut [C64]) {
        self.apply_flat(y, dy);
    }
}

/// Accepted step sizes, one list per sampling interval.
pub type Schedule = Vec<Vec<f64>>;

/// Stateful integrator for one configuration.
pub struct Evolver {
    config: SimConfig,
    basis: BasisSpec,
    hamiltonian: OperatorMatrix,
    liouvillian: Liouvillian,
    integrator: Dopri5,
    state: SystemState,
    herm_removed: f64,
}

impl Evolver {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let basis = build_basis(config.n_max);
        let initial = match config.initial_state {
            InitialState::Vacuum => SystemState::vacuum(&basis),
        };
        Self::with_initial(config, initial)
    }

    pub fn with_initial(config: &SimConfig, initial: SystemState) -> Result<Self> {
        config.validate()?;
        let basis = build_basis(config.n_max);
        initial.check_dim(&basis)?;
        let hamiltonian = build_hamiltonian(config, &basis);
        let liouvillian = Liouvillian::cavity(&hamiltonian, &basis, config.kappa)?;
        let integrator = Dopri5::new(
            basis.dim() * basis.dim(),
            config.integrator_rel_tol,
            config.integrator_abs_tol,
        );
        let mut state = initial;
        state.rho = state.rho.as_standard_layout().into_owned();
        Ok(Self {
            config: config.clone(),
            basis,
            hamiltonian,
            liouvillian,
            integrator,
            state,
            herm_removed: 0.0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    pub fn state(&self) -> &SystemState {
        &self.state
    }

    pub fn stats(&self) -> StepStats {
        self.integrator.stats()
    }

    /// Adaptive integration up to `t_end`, symmetrizing after every step.
    pub fn advance_to(&mut self, t_end: f64, log: Option<&mut Vec<f64>>) -> Result<()> {
        let n = self.basis.dim();
        let removed = &mut self.herm_removed;
        let rho = self.state.rho.as_slice_mut().expect("standard layout");
        self.integrator.advance(
            &self.liouvillian,
            &mut self.state.t,
            rho,
            t_end,
            |y| *removed = removed.max(symmetrize_flat(y, n)),
            log,
        )
    }

    /// Integration up to `t_end` along a previously recorded step list.
    pub fn replay_to(&mut self, t_end: f64, steps: &[f64]) {
        let n = self.basis.dim();
        let removed = &mut self.herm_removed;
        let rho = self.state.rho.as_slice_mut().expect("standard layout");
        self.integrator.advance_fixed(
            &self.liouvillian,
            &mut self.state.t,
            rho,
            t_end,
            steps,
            |y| *removed = removed.max(symmetrize_flat(y, n)),
        );
    }

    /// Diagnostics of the current state. The Hermiticity deviation is the
    /// largest one removed by symmetrization since the previous call.
    pub fn take_diagnostics(&mut self) -> Diagnostics {
        let mut d = self.state.diagnostics();
        d.herm_dev = d.herm_dev.max(self.herm_removed);
        self.herm_removed = 0.0;
        d
    }
}

fn symmetrize_flat(y: &mut [C64], n: usize) -> f64 {
    let mut view = ndarray::ArrayViewMut2::from_shape((n, n), y).expect("square buffer");
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let a = view[[i, j]];
            let b = view[[j, i]];
            dev = dev.max((a - b.conj()).norm());
            let avg = (a + b.conj()) * 0.5;
            view[[i, j]] = avg;
            view[[j, i]] = avg.conj();
        }
    }
    dev
}

/// Output times `0, Δ, 2Δ, …` up to `t_max`, with `t_max` appended when it is
/// not a multiple of `Δ`.
pub fn sample_times(config: &SimConfig) -> Vec<f64> {
    let dt = config.sample_interval;
    let count = (config.t_max / dt + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=count).map(|k| k as f64 * dt).collect();
    let last = *times.last().unwrap();
    if config.t_max - last > 1e-9 * config.t_max {
        times.push(config.t_max);
    }
    times
}

#[derive(Debug, Clone, Default)]
pub struct EvolveSummary {
    pub samples: usize,
    pub stopped_early: bool,
    pub stats: StepStats,
    pub schedule: Option<Schedule>,
}

/// How the integrator picks its steps.
#[derive(Debug, Clone, Copy, Default)]
pub enum Stepping<'a> {
    #[default]
    Adaptive,
    /// Adaptive, recording the accepted steps.
    Record,
    /// Replays a recorded schedule; sample times must match.
    Replay(&'a Schedule),
}

/// Integrates `evolver` over the sample grid of its config, handing each
/// sample to `observer`. A sample whose diagnostics exceed `STATE_TOL`
/// aborts the run.
pub fn drive<F>(
    evolver: &mut Evolver,
    stepping: Stepping<'_>,
    mut observer: F,
) -> Result<EvolveSummary>
where
    F: FnMut(&SystemState, &Diagnostics) -> ControlFlow<()>,
{
    let times = sample_times(evolver.config());
    let mut recorded: Schedule = Vec::new();
    if let Stepping::Replay(s) = stepping {
        if s.len() + 1 != times.len() {
            return Err(Error::invalid(
                "schedule",
                format!(
                    "has {} intervals, sample grid needs {}",
                    s.len(),
                    times.len() - 1
                ),
            ));
        }
    }
    let mut summary = EvolveSummary::default();
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            match stepping {
                Stepping::Adaptive => evolver.advance_to(t, None)?,
                Stepping::Record => {
                    let mut log = Vec::new();
                    evolver.advance_to(t, Some(&mut log))?;
                    recorded.push(log);
                }
                Stepping::Replay(s) => evolver.replay_to(t, &s[k - 1]),
            }
        }
        let d = evolver.take_diagnostics();
        if !d.within(STATE_TOL) {
            return Err(Error::InvariantViolation {
                t,
                trace_dev: d.trace_dev,
                herm_dev: d.herm_dev,
                min_eig: d.min_eig,
            });
        }
        summary.samples += 1;
        if observer(evolver.state(), &d).is_break() {
            summary.stopped_early = k + 1 < times.len();
            break;
        }
    }
    summary.stats = evolver.stats();
    if matches!(stepping, Stepping::Record) {
        summary.schedule = Some(recorded);
    }
    Ok(summary)
}

/// Streams samples of the configured run to `observer`.
pub fn evolve_with<F>(config: &SimConfig, observer: F) -> Result<EvolveSummary>
where
    F: FnMut(&SystemState, &Diagnostics) -> ControlFlow<()>,
{
    let mut ev = Evolver::new(config)?;
    drive(&mut ev, Stepping::Adaptive, observer)
}

/// All samples of the configured run, starting with the initial state.
pub fn evolve(config: &SimConfig) -> Result<Vec<SystemState>> {
    let mut out = Vec::new();
    evolve_with(config, |s, _| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
