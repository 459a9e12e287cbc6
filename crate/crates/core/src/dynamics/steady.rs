use std::collections::VecDeque;

use super::state::SystemState;

/// Outcome of a steady-state check.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub reached: bool,
    /// Last state of the trajectory.
    pub rho_ss: SystemState,
    /// Largest elementwise deviation from `rho_ss` inside the window.
    pub max_change: f64,
}

/// Declares a trajectory steady when every state from the window start on
/// differs from the final one by less than `tol` elementwise. The window
/// start is the last state at or before `t_end − window`, so the trajectory
/// must span the whole window and coarse sampling cannot make the check
/// vacuous.
///
/// Panics on an empty trajectory.
pub fn detect_steady_state(trajectory: &[SystemState], window: f64, tol: f64) -> SteadyState {
    let last = trajectory.last().expect("non-empty trajectory");
    let start = last.t - window + 1e-12 * window.max(1.0);
    let first = trajectory.iter().rposition(|s| s.t <= start);
    let max_change = trajectory[first.unwrap_or(0)..]
        .iter()
        .map(|s| s.max_abs_diff(last))
        .fold(0.0, f64::max);
    SteadyState {
        reached: first.is_some() && max_change < tol,
        rho_ss: last.clone(),
        max_change,
    }
}

/// Online detector keeping checkpoints spaced `window / CHECKPOINTS` apart.
#[derive(Debug, Clone)]
pub struct SteadyStateMonitor {
    window: f64,
    tol: f64,
    spacing: f64,
    checkpoints: VecDeque<SystemState>,
}

impl SteadyStateMonitor {
    pub const CHECKPOINTS: usize = 40;

    pub fn new(window: f64, tol: f64, sample_interval: f64) -> Self {
        Self {
            window,
            tol,
            spacing: (window / Self::CHECKPOINTS as f64).max(sample_interval),
            checkpoints: VecDeque::new(),
        }
    }

    /// Feeds the next sample; returns the check against the stored
    /// checkpoints plus `state`.
    pub fn push(&mut self, state: &SystemState) -> SteadyState {
        let due = self
            .checkpoints
            .back()
            .is_none_or(|c| state.t - c.t >= self.spacing * (1.0 - 1e-9));
        if due {
            self.checkpoints.push_back(state.clone());
        }
        // Keep exactly one checkpoint at or before the window start.
        while self.checkpoints.len() > 1 && self.checkpoints[1].t <= state.t - self.window {
            self.checkpoints.pop_front();
        }
        let last_is_state = self.checkpoints.back().is_some_and(|c| c.t == state.t);
        let mut scratch: Vec<SystemState> = Vec::new();
        let traj: &[SystemState] = if last_is_state {
            self.checkpoints.make_contiguous()
        } else {
            scratch.extend(self.checkpoints.iter().cloned());
            scratch.push(state.clone());
            &scratch
        };
        detect_steady_state(traj, self.window, self.tol)
    }
}
