//! Truncated Hilbert space of two two-level atoms and one cavity mode.
//!
//! Basis ordering is atom A ⊗ atom B ⊗ field with the Fock index running
//! fastest:
//!
//! ```text
//! index(i_A, j_B, n) = (2·i_A + j_B)·(n_max + 1) + n,   e ↦ 0, g ↦ 1
//! ```
//!
//! With `e ↦ 0` the atomic block index `2·i_A + j_B` enumerates
//! `|e,e⟩, |e,g⟩, |g,e⟩, |g,g⟩`, i.e. the two-qubit standard basis used for all
//! reduced density matrices in this crate. Tracing out the cavity is then
//! a sum over contiguous blocks of length `n_max + 1`.

use ndarray::Array2;
use num_complex::Complex64;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Internal state of a single two-level atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    Excited,
    Ground,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 2] = [AtomLevel::Excited, AtomLevel::Ground];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            AtomLevel::Excited => 0,
            AtomLevel::Ground => 1,
        }
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        match i {
            0 => AtomLevel::Excited,
            1 => AtomLevel::Ground,
            _ => panic!("atomic level index {i} out of range"),
        }
    }

    #[inline]
    pub fn is_excited(self) -> bool {
        self == AtomLevel::Excited
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    A,
    B,
}

/// Single-atom pseudo-spin operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomicKind {
    SigmaZ,
    SigmaPlus,
    SigmaMinus,
}

impl AtomicKind {
    /// 2×2 matrix in the `(e, g)` basis.
    fn matrix(self) -> [[f64; 2]; 2] {
        match self {
            AtomicKind::SigmaZ => [[1.0, 0.0], [0.0, -1.0]],
            // σ₊ = |e⟩⟨g|
            AtomicKind::SigmaPlus => [[0.0, 1.0], [0.0, 0.0]],
            // σ₋ = |g⟩⟨e|
            AtomicKind::SigmaMinus => [[0.0, 0.0], [1.0, 0.0]],
        }
    }
}

/// Truncated product basis `|i_A, j_B, n⟩` with `n = 0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    n_max: usize,
}

impl BasisSpec {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    #[inline]
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of retained Fock states.
    #[inline]
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    #[inline]
    pub fn dim(&self) -> usize {
        4 * self.fock_dim()
    }

    #[inline]
    pub fn index(&self, a: AtomLevel, b: AtomLevel, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        (2 * a.index() + b.index()) * self.fock_dim() + n
    }

    /// Inverse of [`BasisSpec::index`].
    #[inline]
    pub fn decompose(&self, idx: usize) -> (AtomLevel, AtomLevel, usize) {
        let q = idx / self.fock_dim();
        let n = idx % self.fock_dim();
        (
            AtomLevel::from_index(q / 2),
            AtomLevel::from_index(q % 2),
            n,
        )
    }

    /// Index of the two-qubit standard basis block (`0 = |e,e⟩ … 3 = |g,g⟩`).
    #[inline]
    pub fn atomic_block(&self, idx: usize) -> usize {
        idx / self.fock_dim()
    }

    /// The zero-excitation product state `|g, g, 0⟩`.
    pub fn vacuum_index(&self) -> usize {
        self.index(AtomLevel::Ground, AtomLevel::Ground, 0)
    }
}

pub fn build_basis(n_max: usize) -> BasisSpec {
    BasisSpec::new(n_max)
}

/// Square complex operator stored in compressed sparse row form.
///
/// Column indices within a row are sorted and unique. Explicit zeros produced
/// by arithmetic are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal((0..dim).map(|_| ONE).collect())
    }

    pub fn from_diagonal(diag: Vec<C64>) -> Self {
        let dim = diag.len();
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim).collect(),
            values: diag,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(
                r < dim && c < dim,
                "triplet ({r}, {c}) outside dimension {dim}"
            );
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Converts a dense matrix, dropping exact zeros.
    pub fn from_dense(m: &Array2<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        let triplets = m
            .indexed_iter()
            .filter(|(_, v)| **v != ZERO)
            .map(|((r, c), v)| (r, c, *v))
            .collect();
        Self::from_triplets(m.nrows(), triplets)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored column indices and values of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> (&[usize], &[C64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => ZERO,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (r, c, v) in self.triplets() {
            m[[r, c]] = v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let t = self.triplets().chain(other.triplets()).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let mut t = Vec::new();
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            for (&k, &v) in cols.iter().zip(vals) {
                let (cols2, vals2) = other.row(k);
                for (&c, &w) in cols2.iter().zip(vals2) {
                    t.push((r, c, v * w));
                }
            }
        }
        Self::from_triplets(self.dim, t)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        (0..self.dim)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &a)| a * v[c]).sum()
            })
            .collect()
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// True when every stored entry off the diagonal is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, v)| r == c || v == ZERO)
    }
}

/// Cavity annihilation operator `1 ⊗ 1 ⊗ a`.
pub fn annihilation(basis: &BasisSpec) -> OperatorMatrix {
    let mut t = Vec::with_capacity(4 * basis.n_max());
    for q in 0..4 {
        for n in 1..=basis.n_max() {
            let row = q * basis.fock_dim() + n - 1;
            t.push((row, row + 1, C64::new((n as f64).sqrt(), 0.0)));
        }
    }
    OperatorMatrix::from_triplets(basis.dim(), t)
}

pub fn creation(basis: &BasisSpec) -> OperatorMatrix {
    annihilation(basis).adjoint()
}

/// Photon number `a†a`, diagonal.
pub fn number(basis: &BasisSpec) -> OperatorMatrix {
    OperatorMatrix::from_diagonal(
        (0..basis.dim())
            .map(|i| C64::new(basis.decompose(i).2 as f64, 0.0))
            .collect(),
    )
}

/// Pseudo-spin operator acting on one atom's factor only.
pub fn atomic_operator(basis: &BasisSpec, which: Atom, kind: AtomicKind) -> OperatorMatrix {
    let m = kind.matrix();
    let mut t = Vec::new();
    for out in AtomLevel::ALL {
        for inp in AtomLevel::ALL {
            let v = m[out.index()][inp.index()];
            if v == 0.0 {
                continue;
            }
            for other in AtomLevel::ALL {
                for n in 0..=basis.n_max() {
                    let (row, col) = match which {
                        Atom::A => (basis.index(out, other, n), basis.index(inp, other, n)),
                        Atom::B => (basis.index(other, out, n), basis.index(other, inp, n)),
                    };
                    t.push((row, col, C64::new(v, 0.0)));
                }
            }
        }
    }
    OperatorMatrix::from_triplets(basis.dim(), t)
}

/// Returns `(N_T, N_A)`: total excitations `a†a + σ₊ᴬσ₋ᴬ + σ₊ᴮσ₋ᴮ` and atomic
/// excitations `σ₊ᴬσ₋ᴬ + σ₊ᴮσ₋ᴮ`.
pub fn excitation_operators(basis: &BasisSpec) -> (OperatorMatrix, OperatorMatrix) {
    let mut total = Vec::with_capacity(basis.dim());
    let mut atomic = Vec::with_capacity(basis.dim());
    for i in 0..basis.dim() {
        let (a, b, n) = basis.decompose(i);
        let na = a.is_excited() as u8 + b.is_excited() as u8;
        atomic.push(C64::new(na as f64, 0.0));
        total.push(C64::new((na as usize + n) as f64, 0.0));
    }
    (
        OperatorMatrix::from_diagonal(total),
        OperatorMatrix::from_diagonal(atomic),
    )
}

/// Basis vector `|a, b, n⟩` as a dense column.
pub fn basis_vector(basis: &BasisSpec, a: AtomLevel, b: AtomLevel, n: usize) -> Vec<C64> {
    let mut v = vec![ZERO; basis.dim()];
    v[basis.index(a, b, n)] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomLevel::{Excited as E, Ground as G};

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_basis(0).dim(), 4);
        assert_eq!(build_basis(50).dim(), 204);
        assert_eq!(build_basis(38).dim(), 156);
    }

    #[test]
    fn index_roundtrip_and_standard_order() {
        let b = build_basis(7);
        for i in 0..b.dim() {
            let (x, y, n) = b.decompose(i);
            assert_eq!(b.index(x, y, n), i);
        }
        assert_eq!(b.atomic_block(b.index(E, E, 3)), 0);
        assert_eq!(b.atomic_block(b.index(E, G, 3)), 1);
        assert_eq!(b.atomic_block(b.index(G, E, 3)), 2);
        assert_eq!(b.atomic_block(b.index(G, G, 3)), 3);
    }

    #[test]
    fn annihilation_elements() {
        let b = build_basis(5);
        let a = annihilation(&b);
        assert!(close(a.get(b.index(G, G, 0), b.index(G, G, 1)), ONE));
        let s2 = a.get(b.index(G, G, 1), b.index(G, G, 2));
        assert!((s2.re - 1.41421356).abs() < 1e-8);
        let v = a.apply(&basis_vector(&b, G, G, 0));
        assert!(v.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn atomic_operator_actions() {
        let b = build_basis(4);
        let sp_a = atomic_operator(&b, Atom::A, AtomicKind::SigmaPlus);
        let v = sp_a.apply(&basis_vector(&b, G, G, 0));
        assert_eq!(v, basis_vector(&b, E, G, 0));

        let sz_a = atomic_operator(&b, Atom::A, AtomicKind::SigmaZ);
        let v = sz_a.apply(&basis_vector(&b, G, E, 3));
        let expected: Vec<C64> = basis_vector(&b, G, E, 3).iter().map(|z| -z).collect();
        assert_eq!(v, expected);

        let sq = sp_a.matmul(&sp_a);
        assert!(sq.triplets().all(|(_, _, v)| v == ZERO));

        let sm_b = atomic_operator(&b, Atom::B, AtomicKind::SigmaMinus);
        let v = sm_b.apply(&basis_vector(&b, G, E, 2));
        assert_eq!(v, basis_vector(&b, G, G, 2));
    }

    #[test]
    fn excitation_numbers() {
        let b = build_basis(6);
        let (nt, na) = excitation_operators(&b);
        assert_eq!(nt.get(b.vacuum_index(), b.vacuum_index()), ZERO);
        let ee2 = b.index(E, E, 2);
        assert_eq!(nt.get(ee2, ee2).re, 4.0);
        let eg5 = b.index(E, G, 5);
        assert_eq!(na.get(eg5, eg5).re, 1.0);
        assert!(nt.is_diagonal() && na.is_diagonal());
        assert_eq!(nt.hermitian_deviation(), 0.0);
    }

    #[test]
    fn excitation_operators_match_ladder_products() {
        let b = build_basis(4);
        let a = annihilation(&b);
        let sp = |x| atomic_operator(&b, x, AtomicKind::SigmaPlus);
        let sm = |x| atomic_operator(&b, x, AtomicKind::SigmaMinus);
        let n_atoms = sp(Atom::A)
            .matmul(&sm(Atom::A))
            .add(&sp(Atom::B).matmul(&sm(Atom::B)));
        let n_total = a.adjoint().matmul(&a).add(&n_atoms);
        let (nt, na) = excitation_operators(&b);
        // √n·√n differs from n in the last bit.
        let diff =
            |x: Array2<C64>, y: Array2<C64>| (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff(nt.to_dense(), n_total.to_dense()) < 1e-14);
        assert_eq!(na.to_dense(), n_atoms.to_dense());
    }

    #[test]
    fn adjoint_pairs() {
        let b = build_basis(9);
        assert_eq!(
            annihilation(&b).adjoint().to_dense(),
            creation(&b).to_dense()
        );
        for atom in [Atom::A, Atom::B] {
            let sp = atomic_operator(&b, atom, AtomicKind::SigmaPlus);
            let sm = atomic_operator(&b, atom, AtomicKind::SigmaMinus);
            assert_eq!(sp.adjoint().to_dense(), sm.to_dense());
        }
    }

    #[test]
    fn different_atoms_commute() {
        let b = build_basis(3);
        let c = atomic_operator(&b, Atom::A, AtomicKind::SigmaPlus).commutator(&atomic_operator(
            &b,
            Atom::B,
            AtomicKind::SigmaMinus,
        ));
        assert!(c.triplets().all(|(_, _, v)| v == ZERO));
    }

    /// Exact up to the rounding of `√n · √n`.
    #[test]
    fn truncated_ladder_commutator() {
        for n_max in [0usize, 1, 5, 50] {
            let b = build_basis(n_max);
            let a = annihilation(&b);
            let comm = a.commutator(&creation(&b)).to_dense();
            for r in 0..b.dim() {
                for c in 0..b.dim() {
                    let (_, _, n) = b.decompose(r);
                    let expected = if r != c {
                        0.0
                    } else if n == n_max {
                        -(n_max as f64)
                    } else {
                        1.0
                    };
                    let got = comm[[r, c]];
                    assert!(
                        (got - C64::new(expected, 0.0)).norm()
                            <= 4.0 * f64::EPSILON * (n_max.max(1) as f64),
                        "({r},{c}) n_max={n_max}: {got}"
                    );
                    if r != c {
                        assert_eq!(got, C64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn triplet_duplicates_are_summed() {
        let m = OperatorMatrix::from_triplets(
            2,
            vec![(1, 0, ONE), (0, 1, ONE), (1, 0, ONE), (0, 0, ZERO)],
        );
        assert_eq!(m.get(1, 0), C64::new(2.0, 0.0));
        assert_eq!(m.nnz(), 3);
        assert_eq!(OperatorMatrix::from_dense(&m.to_dense()).nnz(), 2);
    }
}
