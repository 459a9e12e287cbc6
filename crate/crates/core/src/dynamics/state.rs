use nalgebra::DMatrix;
use ndarray::Array2;

use crate::error::{Error, Result};
use crate::hilbert::{BasisSpec, C64};

/// Tolerance on trace, Hermiticity and positivity of every emitted state.
pub const STATE_TOL: f64 = 1e-8;

/// Density matrix of atoms+cavity at dimensionless time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub rho: Array2<C64>,
    pub t: f64,
}

/// Invariant checks for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `|Tr ρ − 1|`
    pub trace_dev: f64,
    /// `max |ρ − ρ†|`
    pub herm_dev: f64,
    pub min_eig: f64,
}

impl Diagnostics {
    pub fn within(&self, tol: f64) -> bool {
        self.trace_dev < tol && self.herm_dev < tol && self.min_eig >= -tol
    }
}

impl SystemState {
    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[C64], t: f64) -> Self {
        let n = psi.len();
        let rho = Array2::from_shape_fn((n, n), |(i, j)| psi[i] * psi[j].conj());
        Self { rho, t }
    }

    /// Projector onto basis state `idx`.
    pub fn basis_projector(basis: &BasisSpec, idx: usize, t: f64) -> Self {
        let mut rho = Array2::zeros((basis.dim(), basis.dim()));
        rho[[idx, idx]] = C64::new(1.0, 0.0);
        Self { rho, t }
    }

    pub fn vacuum(basis: &BasisSpec) -> Self {
        Self::basis_projector(basis, basis.vacuum_index(), 0.0)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn check_dim(&self, basis: &BasisSpec) -> Result<()> {
        if self.rho.nrows() != basis.dim() || self.rho.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: self.rho.nrows(),
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        self.rho.diag().sum()
    }

    pub fn trace_deviation(&self) -> f64 {
        (self.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.rho)
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ ρ_ij ρ_ji
        let n = self.dim();
        let mut s = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += self.rho[[i, j]] * self.rho[[j, i]];
            }
        }
        s.re
    }

    /// Smallest eigenvalue of the Hermitian part of `ρ`.
    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.rho)
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            trace_dev: self.trace_deviation(),
            herm_dev: self.hermitian_deviation(),
            min_eig: self.min_eigenvalue(),
        }
    }

    /// Replaces `ρ` by `(ρ + ρ†)/2`, returning the deviation removed.
    pub fn symmetrize(&mut self) -> f64 {
        symmetrize(&mut self.rho)
    }

    /// Largest elementwise `|ρ − σ|`.
    pub fn max_abs_diff(&self, other: &SystemState) -> f64 {
        max_abs_diff(&self.rho, &other.rho)
    }
}

pub fn hermitian_deviation(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

pub fn symmetrize(m: &mut Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let a = m[[i, j]];
            let b = m[[j, i]];
            dev = dev.max((a - b.conj()).norm());
            let avg = (a + b.conj()) * 0.5;
            m[[i, j]] = avg;
            m[[j, i]] = avg.conj();
        }
    }
    dev
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "matrix shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Ascending eigenvalues of the Hermitian part of a square matrix.
pub fn hermitian_eigenvalues(m: &Array2<C64>) -> Vec<f64> {
    let n = m.nrows();
    let dm = DMatrix::from_fn(n, n, |i, j| (m[[i, j]] + m[[j, i]].conj()) * 0.5);
    let mut ev: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_hermitian_eigenvalue(m: &Array2<C64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}
