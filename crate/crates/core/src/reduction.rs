//! Partial trace over the cavity and the two-atom X state.
//!
//! Reduced matrices use the standard basis `|1⟩ = |e,e⟩, |2⟩ = |e,g⟩,
//! |3⟩ = |g,e⟩, |4⟩ = |g,g⟩`; `rho_ij` below is the 1-based entry `(i, j)`.

use log::warn;
use nalgebra::Matrix4;

use crate::dynamics::SystemState;
use crate::error::{Error, Result};
use crate::hilbert::{BasisSpec, C64};

pub type TwoQubitMatrix = Matrix4<C64>;

/// Off-X residual above which a reduced state is rejected.
pub const X_RESIDUAL_LIMIT: f64 = 1e-4;
/// Populations in `[-POPULATION_TOL, 0)` are clamped to zero.
pub const POPULATION_TOL: f64 = 1e-8;

/// Positions that must vanish in an X state.
const OFF_X: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 3),
    (2, 0),
    (2, 3),
    (3, 1),
    (3, 2),
];

/// Two-qubit density matrix with non-zero entries only on the diagonal and
/// the anti-diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: C64,
    pub rho23: C64,
    /// Largest magnitude among the entries an X state must have zero.
    pub residual_offx: f64,
}

impl XState {
    /// X state with real coherences and no residual.
    pub fn from_real(populations: [f64; 4], rho14: f64, rho23: f64) -> Self {
        Self {
            rho11: populations[0],
            rho22: populations[1],
            rho33: populations[2],
            rho44: populations[3],
            rho14: C64::new(rho14, 0.0),
            rho23: C64::new(rho23, 0.0),
            residual_offx: 0.0,
        }
    }

    pub fn populations(&self) -> [f64; 4] {
        [self.rho11, self.rho22, self.rho33, self.rho44]
    }

    pub fn trace(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// Dense 4×4 matrix with the off-X entries set to zero.
    pub fn to_matrix(&self) -> TwoQubitMatrix {
        let z = C64::new(0.0, 0.0);
        let r = |x: f64| C64::new(x, 0.0);
        Matrix4::new(
            r(self.rho11),
            z,
            z,
            self.rho14,
            z,
            r(self.rho22),
            self.rho23,
            z,
            z,
            self.rho23.conj(),
            r(self.rho33),
            z,
            self.rho14.conj(),
            z,
            z,
            r(self.rho44),
        )
    }

    /// Eigenvalues in closed form, from the two 2×2 blocks.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let block = |a: f64, d: f64, c: C64| {
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d).powi(2) + c.norm_sqr()).sqrt();
            [mean + radius, mean - radius]
        };
        let [l1, l2] = block(self.rho11, self.rho44, self.rho14);
        let [l3, l4] = block(self.rho22, self.rho33, self.rho23);
        [l1, l2, l3, l4]
    }

    /// Checks the trace, population and 2×2-block positivity invariants.
    pub fn check(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() < tol
            && self.populations().iter().all(|&p| p >= -tol)
            && self.rho14.norm() <= (self.rho11 * self.rho44).max(0.0).sqrt() + 1e-6
            && self.rho23.norm() <= (self.rho22 * self.rho33).max(0.0).sqrt() + 1e-6
    }
}

/// `ρ_AB = Tr_cavity ρ_S`.
pub fn partial_trace_cavity(state: &SystemState, basis: &BasisSpec) -> Result<TwoQubitMatrix> {
    state.check_dim(basis)?;
    let f = basis.fock_dim();
    let mut out = TwoQubitMatrix::zeros();
    for p in 0..4 {
        for q in 0..4 {
            out[(p, q)] = (0..f).map(|n| state.rho[[p * f + n, q * f + n]]).sum();
        }
    }
    Ok(out)
}

/// Extracts the X-state entries, refusing matrices whose off-X residual
/// reaches [`X_RESIDUAL_LIMIT`]. Tiny negative populations are clamped to zero.
pub fn to_xstate(rho_ab: &TwoQubitMatrix) -> Result<XState> {
    let residual_offx = OFF_X
        .iter()
        .map(|&(i, j)| rho_ab[(i, j)].norm())
        .fold(0.0, f64::max);
    if residual_offx >= X_RESIDUAL_LIMIT {
        return Err(Error::NotXState {
            residual: residual_offx,
        });
    }
    let mut pops = [0.0; 4];
    for (i, p) in pops.iter_mut().enumerate() {
        let v = rho_ab[(i, i)].re;
        *p = if v >= 0.0 {
            v
        } else if v >= -POPULATION_TOL {
            warn!("clamping population rho{0}{0} = {v:e} to zero", i + 1);
            0.0
        } else {
            return Err(Error::NegativePopulation { value: v });
        };
    }
    Ok(XState {
        rho11: pops[0],
        rho22: pops[1],
        rho33: pops[2],
        rho44: pops[3],
        rho14: rho_ab[(0, 3)],
        rho23: rho_ab[(1, 2)],
        residual_offx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis_vector, build_basis, AtomLevel::*};
    use ndarray::Array2;
    use proptest::prelude::*;

    fn mixture(basis: &BasisSpec, terms: &[(f64, Vec<C64>)]) -> SystemState {
        let mut rho = Array2::zeros((basis.dim(), basis.dim()));
        for (w, psi) in terms {
            rho = rho + SystemState::pure(psi, 0.0).rho * *w;
        }
        SystemState { rho, t: 0.0 }
    }

    #[test]
    fn vacuum_reduces_to_ground_projector() {
        let b = build_basis(4);
        let r = partial_trace_cavity(&SystemState::vacuum(&b), &b).unwrap();
        let mut want = TwoQubitMatrix::zeros();
        want[(3, 3)] = C64::new(1.0, 0.0);
        assert_eq!(r, want);
    }

    #[test]
    fn bell_state_with_empty_cavity() {
        let b = build_basis(3);
        let s = 0.5f64.sqrt();
        let psi: Vec<C64> = basis_vector(&b, Excited, Ground, 0)
            .iter()
            .zip(basis_vector(&b, Ground, Excited, 0))
            .map(|(x, y)| (x + y) * s)
            .collect();
        let x =
            to_xstate(&partial_trace_cavity(&SystemState::pure(&psi, 0.0), &b).unwrap()).unwrap();
        for v in [x.rho22, x.rho33, x.rho23.re] {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert_eq!(x.rho11, 0.0);
        assert_eq!(x.rho44, 0.0);
    }

    #[test]
    fn orthogonal_cavity_states_remove_coherence() {
        let b = build_basis(3);
        let s = mixture(
            &b,
            &[
                (0.5, basis_vector(&b, Excited, Ground, 0)),
                (0.5, basis_vector(&b, Ground, Excited, 1)),
            ],
        );
        let x = to_xstate(&partial_trace_cavity(&s, &b).unwrap()).unwrap();
        assert_eq!(x.populations(), [0.0, 0.5, 0.5, 0.0]);
        assert_eq!(x.rho23, C64::new(0.0, 0.0));
    }

    #[test]
    fn reference_steady_matrices_parse() {
        let weak = XState::from_real([0.014, 0.073, 0.073, 0.84], 0.074, 0.073);
        let x = to_xstate(&weak.to_matrix()).unwrap();
        assert_eq!(x.residual_offx, 0.0);
        assert_eq!(x.rho14.re, 0.074);
        assert_eq!(x.rho44, 0.84);

        let bad = XState::from_real([0.32, 0.17, 0.17, 0.34], 3.1e-5, 0.17);
        let x = to_xstate(&bad.to_matrix()).unwrap();
        assert_eq!(x.rho11, 0.32);
        assert_eq!(x.rho14.re, 3.1e-5);
        assert!(x.check(1e-8));
    }

    #[test]
    fn maximally_mixed() {
        let m = TwoQubitMatrix::identity() * C64::new(0.25, 0.0);
        let x = to_xstate(&m).unwrap();
        assert_eq!(x.populations(), [0.25; 4]);
        assert_eq!(x.rho14, C64::new(0.0, 0.0));
        assert_eq!(x.rho23, C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_non_x_matrices() {
        let mut m = TwoQubitMatrix::identity() * C64::new(0.25, 0.0);
        m[(0, 1)] = C64::new(1e-3, 0.0);
        m[(1, 0)] = C64::new(1e-3, 0.0);
        assert!(matches!(to_xstate(&m), Err(Error::NotXState { .. })));
        // Below the limit the residual is reported, not erased.
        m[(0, 1)] = C64::new(1e-6, 0.0);
        m[(1, 0)] = C64::new(1e-6, 0.0);
        let x = to_xstate(&m).unwrap();
        assert_eq!(x.residual_offx, 1e-6);
        assert_eq!(m[(0, 1)], C64::new(1e-6, 0.0));
    }

    #[test]
    fn clamps_tiny_negative_populations_only() {
        let mut m = TwoQubitMatrix::zeros();
        m[(3, 3)] = C64::new(1.0, 0.0);
        m[(0, 0)] = C64::new(-5e-9, 0.0);
        assert_eq!(to_xstate(&m).unwrap().rho11, 0.0);
        m[(0, 0)] = C64::new(-1e-6, 0.0);
        assert!(matches!(
            to_xstate(&m),
            Err(Error::NegativePopulation { .. })
        ));
    }

    #[test]
    fn closed_form_eigenvalues_match_numerics() {
        let x = XState::from_real([0.014, 0.073, 0.073, 0.84], 0.074, 0.073);
        let mut closed = x.eigenvalues();
        closed.sort_by(f64::total_cmp);
        let mut num: Vec<f64> = x
            .to_matrix()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        num.sort_by(f64::total_cmp);
        for (a, b) in closed.iter().zip(&num) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    fn hermitian(n: usize, entries: &[f64]) -> Array2<C64> {
        let m = Array2::from_shape_fn((n, n), |(i, j)| {
            C64::new(
                entries[(i * n + j) % entries.len()],
                entries[(j * n + i + 7) % entries.len()],
            )
        });
        let mh = m.t().mapv(|z| z.conj());
        (m + mh) * 0.5
    }

    proptest! {
        #[test]
        fn partial_trace_is_linear(
            e1 in prop::collection::vec(-1.0f64..1.0, 64),
            e2 in prop::collection::vec(-1.0f64..1.0, 64),
            alpha in -2.0f64..2.0,
            beta in -2.0f64..2.0,
        ) {
            let b = build_basis(2);
            let r1 = hermitian(b.dim(), &e1);
            let r2 = hermitian(b.dim(), &e2);
            let combo = SystemState { rho: &r1 * alpha + &r2 * beta, t: 0.0 };
            let lhs = partial_trace_cavity(&combo, &b).unwrap();
            let p1 = partial_trace_cavity(&SystemState { rho: r1.clone(), t: 0.0 }, &b).unwrap();
            let p2 = partial_trace_cavity(&SystemState { rho: r2.clone(), t: 0.0 }, &b).unwrap();
            let rhs = p1 * C64::new(alpha, 0.0) + p2 * C64::new(beta, 0.0);
            prop_assert!((lhs - rhs).norm() < 1e-12);
            // Trace and Hermiticity carry over.
            let tr_full: C64 = combo.rho.diag().sum();
            prop_assert!((lhs.trace() - tr_full).norm() < 1e-12);
            prop_assert!((lhs - lhs.adjoint()).norm() < 1e-12);
        }
    }
}
