use nalgebra::Matrix4;

use crate::hilbert::C64;
use crate::reduction::{TwoQubitMatrix, XState};

/// The two branches `C₁ = |ρ₂₃| − √(ρ₁₁ρ₄₄)` and `C₂ = |ρ₁₄| − √(ρ₂₂ρ₃₃)`.
pub fn concurrence_branches(x: &XState) -> (f64, f64) {
    (
        x.rho23.norm() - (x.rho11 * x.rho44).sqrt(),
        x.rho14.norm() - (x.rho22 * x.rho33).sqrt(),
    )
}

/// Concurrence of an X state, `2 max{0, C₁, C₂}`. Exactly zero whenever both
/// branches are non-positive.
pub fn concurrence_x(x: &XState) -> f64 {
    let (c1, c2) = concurrence_branches(x);
    2.0 * c1.max(c2).max(0.0)
}

/// `σ_y ⊗ σ_y` in the standard basis.
fn sigma_yy() -> TwoQubitMatrix {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    Matrix4::new(z, z, z, -o, z, z, o, z, z, o, z, z, -o, z, z, z)
}

/// Wootters concurrence `max{0, λ₁−λ₂−λ₃−λ₄}` of an arbitrary two-qubit
/// density matrix, with `λᵢ` the decreasing square roots of the eigenvalues
/// of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence_general(rho: &TwoQubitMatrix) -> f64 {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let sqrt_diag =
        TwoQubitMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
    let sqrt_rho = eig.eigenvectors * sqrt_diag * eig.eigenvectors.adjoint();
    let yy = sigma_yy();
    let tilde = yy * h.map(|z| z.conj()) * yy;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (r + r.adjoint()) * C64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = r
        .symmetric_eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}
