//! Random two-qubit states for oracle sweeps.

use nalgebra::{Matrix2, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hilbert::C64;
use crate::reduction::{to_xstate, TwoQubitMatrix, XState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn wishart_2x2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let a = Matrix2::from_fn(|_, _| gaussian(rng));
    a * a.adjoint()
}

/// X state whose two 2×2 blocks are independent `A·A†` draws, normalized
/// jointly to unit trace. Positive by construction.
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let outer = wishart_2x2(rng);
    let inner = wishart_2x2(rng);
    let tr = (outer.trace() + inner.trace()).re;
    let mut m = TwoQubitMatrix::zeros();
    for (i, p) in [0usize, 3].into_iter().enumerate() {
        for (j, q) in [0usize, 3].into_iter().enumerate() {
            m[(p, q)] = outer[(i, j)] / tr;
        }
    }
    for (i, p) in [1usize, 2].into_iter().enumerate() {
        for (j, q) in [1usize, 2].into_iter().enumerate() {
            m[(p, q)] = inner[(i, j)] / tr;
        }
    }
    to_xstate(&m).expect("constructed X state")
}

/// Haar-random pure two-qubit state as a density matrix.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitMatrix {
    let v = Vector4::from_fn(|_, _| gaussian(rng));
    let v = v / C64::new(v.norm(), 0.0);
    v * v.adjoint()
}
