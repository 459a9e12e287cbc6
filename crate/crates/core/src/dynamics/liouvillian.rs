//! Right-hand side of the cavity-loss master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ] − (κ/2)(a†a ρ − 2 a ρ a† + ρ a†a)
//! ```
//!
//! applied as sparse-times-dense products on a row-major `ρ`. The
//! superoperator is never materialized.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::hilbert::{annihilation, BasisSpec, OperatorMatrix, C64};

use super::state::SystemState;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    /// `−i K` with `K = H − i(κ/2) a†a`.
    left: OperatorMatrix,
    /// `i K*` (elementwise conjugate), used as `ρ K†`.
    right: OperatorMatrix,
    jump: OperatorMatrix,
    kappa: f64,
}

impl Liouvillian {
    pub fn new(hamiltonian: &OperatorMatrix, jump: &OperatorMatrix, kappa: f64) -> Result<Self> {
        let dim = hamiltonian.dim();
        if jump.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: jump.dim(),
            });
        }
        let decay = jump
            .adjoint()
            .matmul(jump)
            .scale(C64::new(0.0, -0.5 * kappa));
        let k = hamiltonian.add(&decay);
        let left = k.scale(-I);
        let right = OperatorMatrix::from_triplets(
            dim,
            k.triplets().map(|(r, c, v)| (r, c, I * v.conj())).collect(),
        );
        Ok(Self {
            dim,
            left,
            right,
            jump: jump.clone(),
            kappa,
        })
    }

    /// Cavity loss through the field annihilation operator of `basis`.
    pub fn cavity(hamiltonian: &OperatorMatrix, basis: &BasisSpec, kappa: f64) -> Result<Self> {
        Self::new(hamiltonian, &annihilation(basis), kappa)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes `L(ρ)` into `out`; both are row-major `dim × dim` buffers.
    pub fn apply_flat(&self, rho: &[C64], out: &mut [C64]) {
        let n = self.dim;
        debug_assert_eq!(rho.len(), n * n);
        debug_assert_eq!(out.len(), n * n);

        // out = −i K ρ
        for i in 0..n {
            let (cols, vals) = self.left.row(i);
            let out_row = &mut out[i * n..(i + 1) * n];
            out_row.fill(C64::new(0.0, 0.0));
            for (&k, &v) in cols.iter().zip(vals) {
                let rho_row = &rho[k * n..(k + 1) * n];
                for (o, r) in out_row.iter_mut().zip(rho_row) {
                    *o += v * r;
                }
            }
        }

        // out += i ρ K†, with (ρK†)_ij = Σ_k ρ_ik conj(K_jk)
        for i in 0..n {
            let rho_row = &rho[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (j, o) in out_row.iter_mut().enumerate() {
                let (cols, vals) = self.right.row(j);
                let mut s = C64::new(0.0, 0.0);
                for (&k, &v) in cols.iter().zip(vals) {
                    s += rho_row[k] * v;
                }
                *o += s;
            }
        }

        // out += κ a ρ a†
        if self.kappa != 0.0 {
            for i in 0..n {
                let (ci, vi) = self.jump.row(i);
                if ci.is_empty() {
                    continue;
                }
                for j in 0..n {
                    let (cj, vj) = self.jump.row(j);
                    let mut s = C64::new(0.0, 0.0);
                    for (&k, &a_ik) in ci.iter().zip(vi) {
                        let rho_row = &rho[k * n..(k + 1) * n];
                        for (&l, &a_jl) in cj.iter().zip(vj) {
                            s += a_ik * rho_row[l] * a_jl.conj();
                        }
                    }
                    out[i * n + j] += s * self.kappa;
                }
            }
        }
    }

    pub fn apply(&self, rho: &Array2<C64>) -> Result<Array2<C64>> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let rho = rho.as_standard_layout();
        let mut out = Array2::zeros((self.dim, self.dim));
        self.apply_flat(
            rho.as_slice().expect("standard layout"),
            out.as_slice_mut().expect("standard layout"),
        );
        Ok(out)
    }
}

/// `dρ/dt` for Hamiltonian `h` and cavity decay rate `kappa`.
pub fn lindblad_rhs(
    h: &OperatorMatrix,
    basis: &BasisSpec,
    kappa: f64,
    state: &SystemState,
) -> Result<Array2<C64>> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: h.dim(),
        });
    }
    state.check_dim(basis)?;
    Liouvillian::cavity(h, basis, kappa)?.apply(&state.rho)
}
