//! Quantum discord with projective measurements on atom B.

use nalgebra::Matrix2;

use crate::hilbert::C64;
use crate::reduction::{TwoQubitMatrix, XState};

use super::entropy::{binary_entropy, marginals, shannon, von_neumann_2x2, von_neumann_4x4};

/// `Σᵢ λᵢ log₂ λᵢ = −S(ρ_AB)` from the closed-form X-state eigenvalues.
fn neg_joint_entropy(x: &XState) -> f64 {
    -shannon(x.eigenvalues().map(|l| l.max(0.0)))
}

/// The two candidate measurements of the closed form: `Q₁` (σ_x-type) and
/// `Q₂` (σ_z-type).
pub fn discord_x_branches(x: &XState) -> (f64, f64) {
    let m_b = binary_entropy(x.rho11 + x.rho33);
    let base = m_b + neg_joint_entropy(x);
    let tau = 0.5
        * (1.0
            + ((1.0 - 2.0 * (x.rho33 + x.rho44)).powi(2)
                + 4.0 * (x.rho23.norm() + x.rho14.norm()).powi(2))
            .sqrt());
    let p1 = binary_entropy(tau);
    let p2 = shannon(x.populations()) - m_b;
    (base + p1, base + p2)
}

/// Closed-form X-state discord `max(0, min{Q₁, Q₂})`.
pub fn discord_x(x: &XState) -> f64 {
    let (q1, q2) = discord_x_branches(x);
    let d = q1.min(q2);
    if d > 0.0 {
        d
    } else {
        0.0
    }
}

/// `I = S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(rho: &TwoQubitMatrix) -> f64 {
    let (ra, rb) = marginals(rho);
    von_neumann_2x2(&ra) + von_neumann_2x2(&rb) - von_neumann_4x4(rho)
}

/// Resolution of the brute-force measurement search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementGrid {
    /// Points on `θ ∈ [0, π]`, endpoints included.
    pub n_theta: usize,
    /// Points on `φ ∈ [0, 2π)`.
    pub n_phi: usize,
    /// Alternating golden-section passes over `θ` and `φ`.
    pub refine_passes: usize,
}

impl Default for MeasurementGrid {
    fn default() -> Self {
        Self {
            n_theta: 64,
            n_phi: 128,
            refine_passes: 50,
        }
    }
}

/// Result of the brute-force search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceDiscord {
    pub discord: f64,
    pub mutual_info: f64,
    /// Maximal classical correlation `J` found.
    pub classical_corr: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Average entropy of A after measuring B along the Bloch direction
/// `(θ, φ)`.
fn conditional_entropy(rho: &TwoQubitMatrix, theta: f64, phi: f64) -> f64 {
    let n = [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        // Π = (1 + s n·σ)/2 in the (e, g) basis of B.
        let proj = Matrix2::new(
            C64::new(0.5 * (1.0 + sign * n[2]), 0.0),
            C64::new(0.5 * sign * n[0], -0.5 * sign * n[1]),
            C64::new(0.5 * sign * n[0], 0.5 * sign * n[1]),
            C64::new(0.5 * (1.0 - sign * n[2]), 0.0),
        );
        // Tr_B[(1 ⊗ Π) ρ]_{a a'} = Σ_{b b'} Π_{b b'} ρ_{(a b'), (a' b)}
        let mut cond = Matrix2::<C64>::zeros();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut s = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for b2 in 0..2 {
                        s += proj[(b, b2)] * rho[(2 * a + b2, 2 * a2 + b)];
                    }
                }
                cond[(a, a2)] = s;
            }
        }
        let p = cond.trace().re;
        if p > 1e-15 {
            total += p * von_neumann_2x2(&(cond / C64::new(p, 0.0)));
        }
    }
    total
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Discord by direct minimization of the post-measurement conditional
/// entropy over projective measurements on B: a coarse `(θ, φ)` grid, then
/// alternating golden-section refinement around the best grid point.
pub fn discord_bruteforce(rho: &TwoQubitMatrix, grid: MeasurementGrid) -> BruteForceDiscord {
    assert!(
        grid.n_theta >= 2 && grid.n_phi >= 1,
        "measurement grid needs at least two polar points"
    );
    let (ra, rb) = marginals(rho);
    let s_a = von_neumann_2x2(&ra);
    let s_b = von_neumann_2x2(&rb);
    let s_ab = von_neumann_4x4(rho);

    let d_theta = std::f64::consts::PI / (grid.n_theta - 1) as f64;
    let d_phi = 2.0 * std::f64::consts::PI / grid.n_phi as f64;
    let (mut theta, mut phi, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 0..grid.n_theta {
        for j in 0..grid.n_phi {
            let (t, p) = (i as f64 * d_theta, j as f64 * d_phi);
            let v = conditional_entropy(rho, t, p);
            if v < best {
                (theta, phi, best) = (t, p, v);
            }
        }
    }

    for _ in 0..grid.refine_passes {
        let before = best;
        let (t, v) = golden_section(
            |t| conditional_entropy(rho, t, phi),
            theta - d_theta,
            theta + d_theta,
            40,
        );
        if v < best {
            (theta, best) = (t, v);
        }
        let (p, v) = golden_section(
            |p| conditional_entropy(rho, theta, p),
            phi - d_phi,
            phi + d_phi,
            40,
        );
        if v < best {
            (phi, best) = (p, v);
        }
        if before - best < 1e-15 {
            break;
        }
    }

    let mutual_info = s_a + s_b - s_ab;
    let classical_corr = s_a - best;
    BruteForceDiscord {
        discord: (mutual_info - classical_corr).max(0.0),
        mutual_info,
        classical_corr,
        theta,
        phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::XState;

    #[test]
    fn classical_states_have_no_discord() {
        let mixed = XState::from_real([0.25; 4], 0.0, 0.0);
        assert_eq!(discord_x(&mixed), 0.0);
        let diag = XState::from_real([0.1, 0.2, 0.3, 0.4], 0.0, 0.0);
        assert!(discord_x(&diag) < 1e-15);
        let classical = XState::from_real([0.5, 0.0, 0.0, 0.5], 0.0, 0.0);
        let bf = discord_bruteforce(&classical.to_matrix(), MeasurementGrid::default());
        assert!(bf.discord < 1e-3);
        assert!((bf.mutual_info - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_state() {
        let psi = XState::from_real([0.0, 0.5, 0.5, 0.0], 0.0, 0.5);
        assert!((discord_x(&psi) - 1.0).abs() < 1e-12);
        let bf = discord_bruteforce(&psi.to_matrix(), MeasurementGrid::default());
        assert!((bf.discord - 1.0).abs() < 1e-3);
        assert!((mutual_information(&psi.to_matrix()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_mutual_information() {
        // ρ_A ⊗ ρ_B with ρ_A = diag(0.3, 0.7), ρ_B = diag(0.6, 0.4).
        let x = XState::from_real([0.18, 0.12, 0.42, 0.28], 0.0, 0.0);
        assert!(mutual_information(&x.to_matrix()).abs() < 1e-9);
    }

    #[test]
    fn reference_steady_state_discords() {
        let weak = XState::from_real([0.014, 0.073, 0.073, 0.84], 0.074, 0.073);
        assert!(
            (discord_x(&weak) - 0.1).abs() < 0.005,
            "{}",
            discord_x(&weak)
        );
        let bad = XState::from_real([0.32, 0.17, 0.17, 0.34], 3.1e-5, 0.17);
        assert!(
            (discord_x(&bad) - 0.33).abs() < 0.005,
            "{}",
            discord_x(&bad)
        );
    }

    #[test]
    fn saturated_bad_cavity_state() {
        // 0.333(|ee⟩⟨ee| + |gg⟩⟨gg|) + 0.334|Ψ⁺⟩⟨Ψ⁺|
        let x = XState::from_real([0.333, 0.167, 0.167, 0.333], 0.0, 0.167);
        let bf = discord_bruteforce(&x.to_matrix(), MeasurementGrid::default());
        assert!((bf.discord - 1.0 / 3.0).abs() < 5e-3, "{}", bf.discord);
        assert!((discord_x(&x) - bf.discord).abs() < 5e-3);
    }

    #[test]
    fn brute_force_refines_past_the_grid() {
        let x = XState::from_real([0.014, 0.073, 0.073, 0.84], 0.074, 0.073);
        let coarse = MeasurementGrid {
            refine_passes: 0,
            ..Default::default()
        };
        let a = discord_bruteforce(&x.to_matrix(), coarse);
        let b = discord_bruteforce(&x.to_matrix(), MeasurementGrid::default());
        assert!(b.discord <= a.discord);
        assert!((b.discord - discord_x(&x)).abs() < 5e-3);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, v) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 60);
        // f is flat to machine precision within √ε of the minimum.
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
