use nalgebra::{Matrix2, Matrix4};

use crate::hilbert::C64;

/// Probabilities or eigenvalues below this count as exact zeros.
pub const LOG_FLOOR: f64 = 1e-15;

/// `-p log₂ p`, zero at and below [`LOG_FLOOR`].
#[inline]
pub fn entropy_term(p: f64) -> f64 {
    if p <= LOG_FLOOR {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy in bits of a (not necessarily normalized) distribution.
pub fn shannon(ps: impl IntoIterator<Item = f64>) -> f64 {
    ps.into_iter().map(entropy_term).sum()
}

/// Binary entropy `M(α) = −α log₂ α − (1−α) log₂(1−α)`.
pub fn binary_entropy(alpha: f64) -> f64 {
    // Evaluated symmetrically so that M(α) = M(1−α) bit for bit.
    let (lo, hi) = if alpha <= 0.5 {
        (alpha, 1.0 - alpha)
    } else {
        (1.0 - alpha, alpha)
    };
    entropy_term(lo) + entropy_term(hi)
}

/// Eigenvalues of a 2×2 Hermitian matrix (Hermitian part of `m`).
pub fn eigenvalues_2x2(m: &Matrix2<C64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let c = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d).powi(2) + c.norm_sqr()).sqrt();
    [mean + radius, mean - radius]
}

pub fn von_neumann_2x2(m: &Matrix2<C64>) -> f64 {
    shannon(eigenvalues_2x2(m))
}

pub fn von_neumann_4x4(m: &Matrix4<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    shannon(h.symmetric_eigenvalues().iter().copied())
}

/// `(ρ_A, ρ_B)` of a two-qubit matrix in the basis `|ab⟩`, index `2a + b`.
pub fn marginals(m: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let mut ra = Matrix2::zeros();
    let mut rb = Matrix2::zeros();
    for a in 0..2 {
        for a2 in 0..2 {
            for b in 0..2 {
                ra[(a, a2)] += m[(2 * a + b, 2 * a2 + b)];
                rb[(a, a2)] += m[(2 * b + a, 2 * b + a2)];
            }
        }
    }
    (ra, rb)
}
