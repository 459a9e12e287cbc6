use crate::config::SimConfig;
use crate::hilbert::{
    annihilation, atomic_operator, creation, number, Atom, AtomicKind, BasisSpec, OperatorMatrix,
    C64,
};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Two-atom Rabi Hamiltonian
/// `H = (ω₀/2)(σzᴬ+σzᴮ) + ω a†a + g(σ₊ᴬ+σ₋ᴬ+σ₊ᴮ+σ₋ᴮ)(a+a†)`,
/// or its rotating-wave form when `config.rwa` is set, which keeps only
/// `g Σⱼ (σ₊ʲ a + σ₋ʲ a†)`.
pub fn build_hamiltonian(config: &SimConfig, basis: &BasisSpec) -> OperatorMatrix {
    let a = annihilation(basis);
    let ad = creation(basis);
    let op = |atom, kind| atomic_operator(basis, atom, kind);

    let sz = op(Atom::A, AtomicKind::SigmaZ).add(&op(Atom::B, AtomicKind::SigmaZ));
    let sp = op(Atom::A, AtomicKind::SigmaPlus).add(&op(Atom::B, AtomicKind::SigmaPlus));
    let sm = op(Atom::A, AtomicKind::SigmaMinus).add(&op(Atom::B, AtomicKind::SigmaMinus));

    let free = sz
        .scale(real(0.5 * config.omega0))
        .add(&number(basis).scale(real(config.omega)));

    let interaction = if config.rwa {
        sp.matmul(&a).add(&sm.matmul(&ad))
    } else {
        sp.add(&sm).matmul(&a.add(&ad))
    };

    free.add(&interaction.scale(real(config.g)))
}
