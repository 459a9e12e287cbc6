use log::info;

use crate::config::SimConfig;
use crate::dynamics::{sample_times, Evolver, STATE_TOL};
use crate::error::{Error, Result};
use crate::hilbert::BasisSpec;

/// Largest elementwise change accepted as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n_values: Vec<usize>,
    /// Per consecutive pair, max over samples of `|ρ_big − ρ_small|` with the
    /// smaller matrix zero-padded into the larger space.
    pub max_deltas: Vec<f64>,
    /// Same, restricted to the entries both spaces share.
    pub truncated_deltas: Vec<f64>,
    /// Smaller truncation of the first pair whose padded delta is below
    /// [`CONVERGENCE_TOL`].
    pub converged_at: Option<usize>,
}

impl ConvergenceReport {
    pub fn converged(&self, pair: usize) -> bool {
        self.max_deltas[pair] < CONVERGENCE_TOL
    }
}

/// `(padded, truncated)` elementwise distance between states of two
/// truncations, `small` having the lower photon cutoff.
fn truncation_delta(small: &Evolver, big: &Evolver) -> (f64, f64) {
    let (bs, bb): (&BasisSpec, &BasisSpec) = (small.basis(), big.basis());
    let (rs, rb) = (&small.state().rho, &big.state().rho);
    let ns = bs.n_max();
    let map = |i: usize| {
        let (a, b, n) = bb.decompose(i);
        (n <= ns).then(|| bs.index(a, b, n))
    };
    let small_idx: Vec<Option<usize>> = (0..bb.dim()).map(map).collect();
    let (mut padded, mut truncated): (f64, f64) = (0.0, 0.0);
    for r in 0..bb.dim() {
        for c in 0..bb.dim() {
            match (small_idx[r], small_idx[c]) {
                (Some(i), Some(j)) => {
                    let d = (rb[[r, c]] - rs[[i, j]]).norm();
                    padded = padded.max(d);
                    truncated = truncated.max(d);
                }
                _ => padded = padded.max(rb[[r, c]].norm()),
            }
        }
    }
    (padded, truncated)
}

/// Runs `config` at every cutoff in `n_values` (strictly ascending) on one
/// common step sequence, the one the adaptive controller picks for the
/// largest cutoff, and compares consecutive cutoffs at every sample.
/// Sharing the steps keeps integration error out of the comparison.
pub fn convergence_study(config: &SimConfig, n_values: &[usize]) -> Result<ConvergenceReport> {
    if n_values.len() < 2 {
        return Err(Error::invalid(
            "n_values",
            "need at least two truncations to compare",
        ));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n_values", "must be strictly ascending"));
    }
    config.validate()?;
    let mut evolvers = n_values
        .iter()
        .map(|&n| {
            Evolver::new(&SimConfig {
                n_max: n,
                ..config.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = n_values.len() - 1;
    let mut max_deltas = vec![0.0f64; pairs];
    let mut truncated_deltas = vec![0.0f64; pairs];

    let times = sample_times(config);
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            let (rest, largest) = evolvers.split_at_mut(pairs);
            let mut steps = Vec::new();
            largest[0]
                .advance_to(t, Some(&mut steps))
                .map_err(|e| e.context(format!("n_max = {}", n_values[pairs])))?;
            for ev in rest {
                ev.replay_to(t, &steps);
            }
        }
        for (ev, &n) in evolvers.iter_mut().zip(n_values) {
            let d = ev.take_diagnostics();
            if !d.within(STATE_TOL) {
                return Err(Error::InvariantViolation {
                    t,
                    trace_dev: d.trace_dev,
                    herm_dev: d.herm_dev,
                    min_eig: d.min_eig,
                }
                .context(format!("n_max = {n}")));
            }
        }
        for p in 0..pairs {
            let (padded, truncated) = truncation_delta(&evolvers[p], &evolvers[p + 1]);
            max_deltas[p] = max_deltas[p].max(padded);
            truncated_deltas[p] = truncated_deltas[p].max(truncated);
        }
        if k % 100 == 0 {
            info!("convergence study at t = {t}: deltas {max_deltas:?}");
        }
    }

    let converged_at = max_deltas
        .iter()
        .position(|&d| d < CONVERGENCE_TOL)
        .map(|p| n_values[p]);
    Ok(ConvergenceReport {
        n_values: n_values.to_vec(),
        max_deltas,
        truncated_deltas,
        converged_at,
    })
}
