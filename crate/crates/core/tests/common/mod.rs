//! Dense reference constructions built from Kronecker products, independent
//! of the crate's sparse operators and Liouvillian.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

fn real(rows: usize, cols: usize, data: &[f64]) -> DMatrix<C64> {
    DMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)))
}

/// Operators on atom ⊗ atom ⊗ field with levels ordered (e, g).
pub struct DenseModel {
    pub dim: usize,
    pub h: DMatrix<C64>,
    pub a: DMatrix<C64>,
}

pub fn dense_model(omega: f64, omega0: f64, g: f64, n_max: usize, rwa: bool) -> DenseModel {
    let f = n_max + 1;
    let i2 = DMatrix::<C64>::identity(2, 2);
    let iff = DMatrix::<C64>::identity(f, f);
    let sz = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let sp = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let sm = sp.transpose();
    let mut a1 = DMatrix::<C64>::zeros(f, f);
    for n in 1..f {
        a1[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let ad1 = a1.adjoint();

    let on_a = |m: &DMatrix<C64>| kron(&kron(m, &i2), &iff);
    let on_b = |m: &DMatrix<C64>| kron(&kron(&i2, m), &iff);
    let field = |m: &DMatrix<C64>| kron(&kron(&i2, &i2), m);

    let a = field(&a1);
    let ad = field(&ad1);
    let s_z = on_a(&sz) + on_b(&sz);
    let s_p = on_a(&sp) + on_b(&sp);
    let s_m = on_a(&sm) + on_b(&sm);
    let c = |x: f64| C64::new(x, 0.0);
    let interaction = if rwa {
        &s_p * &a + &s_m * &ad
    } else {
        (&s_p + &s_m) * (&a + &ad)
    };
    let h = s_z * c(0.5 * omega0) + &ad * &a * c(omega) + interaction * c(g);
    DenseModel { dim: 4 * f, h, a }
}

/// Superoperator acting on row-major `vec(ρ)`:
/// `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.
pub fn dense_liouvillian(m: &DenseModel, kappa: f64) -> DMatrix<C64> {
    let d = m.dim;
    let id = DMatrix::<C64>::identity(d, d);
    let n = m.a.adjoint() * &m.a;
    let i = C64::new(0.0, 1.0);
    let c = |x: f64| C64::new(x, 0.0);
    (kron(&m.h, &id) - kron(&id, &m.h.transpose())) * (-i)
        + kron(&m.a, &m.a.adjoint().transpose()) * c(kappa)
        - (kron(&n, &id) + kron(&id, &n.transpose())) * c(0.5 * kappa)
}

/// Isometry from the exchange-symmetric sector, spanned by
/// `|e,e⟩, |Ψ⁺⟩, |g,g⟩` times the Fock states, into the full space.
pub fn symmetric_isometry(n_max: usize) -> DMatrix<C64> {
    let f = n_max + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DMatrix::<C64>::zeros(4 * f, 3 * f);
    for n in 0..f {
        v[(n, n)] = C64::new(1.0, 0.0);
        v[(f + n, f + n)] = C64::new(s, 0.0);
        v[(2 * f + n, f + n)] = C64::new(s, 0.0);
        v[(3 * f + n, 2 * f + n)] = C64::new(1.0, 0.0);
    }
    v
}

/// Steady state reached from any exchange-symmetric initial state, such as
/// the vacuum. Both atoms couple identically, so the antisymmetric singlet
/// sector is conserved and the full Liouvillian has more than one steady
/// state; restricted to the symmetric sector it has exactly one.
pub fn symmetric_steady_state(m: &DenseModel, kappa: f64, n_max: usize) -> DMatrix<C64> {
    let v = symmetric_isometry(n_max);
    let reduced = DenseModel {
        dim: v.ncols(),
        h: v.adjoint() * &m.h * &v,
        a: v.adjoint() * &m.a * &v,
    };
    let rho = direct_steady_state(&reduced, kappa);
    &v * rho * v.adjoint()
}

/// Unit-trace null vector of the Liouvillian, found by replacing one
/// equation with the trace condition and solving directly. Only meaningful
/// when the steady state is unique.
pub fn direct_steady_state(m: &DenseModel, kappa: f64) -> DMatrix<C64> {
    let d = m.dim;
    let mut l = dense_liouvillian(m, kappa);
    let mut rhs = nalgebra::DVector::<C64>::zeros(d * d);
    for col in 0..d * d {
        l[(0, col)] = C64::new(0.0, 0.0);
    }
    for k in 0..d {
        l[(0, k * d + k)] = C64::new(1.0, 0.0);
    }
    rhs[0] = C64::new(1.0, 0.0);
    let v = l.lu().solve(&rhs).expect("unique steady state");
    DMatrix::from_row_iterator(d, d, v.iter().copied())
}

/// Tr over the field, returning the 4×4 atomic block sums.
pub fn trace_field(rho: &DMatrix<C64>, n_max: usize) -> DMatrix<C64> {
    let f = n_max + 1;
    DMatrix::from_fn(4, 4, |p, q| {
        (0..f).map(|n| rho[(p * f + n, q * f + n)]).sum()
    })
}
