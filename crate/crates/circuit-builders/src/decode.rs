use crate::oracles::proposal_oracle;
use crate::walk::{box_circuit, boxtimes_circuit, swap_edges};
use crate::{Result, WalkRegisters};
use qmh_markov::{dual_stationary, gibbs_distribution, pair_index, ProblemInstance};
use qmh_sim::{Circuit, Control, QuantumState, RegisterLayout, SparseState, Statevector, C64};
use std::sync::Arc;

/// Decoding circuit: `b = 0`-controlled swaps `(x, z)`, `(y, xc)`, then `□†`
/// and the inverse proposal oracle on `x → y`. Maps `⊠|+⟩|√ν⟩|0⟩` to
/// `|+⟩|√π⟩|0⟩` with the distribution read from register `x`.
pub fn build_decoding(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    swap_edges(&regs, &mut circ, &[Control::off(regs.b.qubit(0))]);
    circ.extend(&box_circuit(instance, layout)?.inverse());
    circ.extend(&proposal_oracle(instance, &regs, &regs.x, &regs.y)?.inverse());
    Ok(circ)
}

/// Seed preparation from `|0⟩`: `H` on `b` and `x`, the proposal oracle
/// `x → y` (uniform over directed edges), then `⊠`.
pub fn seed_circuit(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    circ.h(regs.b.qubit(0));
    for q in regs.x.qubits() {
        circ.h(q);
    }
    circ.extend(&proposal_oracle(instance, &regs, &regs.x, &regs.y)?);
    circ.extend(&boxtimes_circuit(instance, layout)?);
    Ok(circ)
}

/// Dense seed state `⊠|+⟩|edges⟩|0⟩`.
pub fn seed_state(instance: &ProblemInstance, layout: Arc<RegisterLayout>) -> Result<Statevector> {
    let circ = seed_circuit(instance, &layout)?;
    let mut state = Statevector::new(layout)?;
    state.run(&circ)?;
    Ok(state)
}

/// Exact target eigenvector `⊠|+⟩|√ν⟩|0⟩` as a sparse state.
pub fn target_state(instance: &ProblemInstance, layout: Arc<RegisterLayout>) -> Result<SparseState> {
    let regs = WalkRegisters::new(&layout)?;
    let n = instance.state_count();
    let nu = dual_stationary(&gibbs_distribution(instance), instance);
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::new();
    for (idx, &w) in nu.probs.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let (x, y) = (idx % n, idx / n);
        debug_assert_eq!(pair_index(x, y, n), idx);
        let base = regs.x.place(x as u64) | regs.y.place(y as u64);
        for b in 0..2u64 {
            entries.push((base | regs.b.place(b), C64::new(amp * w.sqrt(), 0.0)));
        }
    }
    let mut state = SparseState::from_entries(layout.clone(), entries);
    state.run(&boxtimes_circuit(instance, &layout)?)?;
    Ok(state)
}
