use crate::{BuildError, Result};
use qmh_sim::{Circuit, CompiledCircuit, Control, GateKind, QuantumState, RegisterLayout};
use std::f64::consts::PI;
use std::sync::Arc;

/// Quantum Fourier transform on `qubits` (least significant first) inside a
/// `num_qubits`-wide circuit: `|y⟩ ↦ 2^{-m/2} Σ_k e^{2πi yk/2^m} |k⟩`.
pub fn qft(num_qubits: usize, qubits: &[usize]) -> Circuit {
    let m = qubits.len();
    let mut circ = Circuit::new(num_qubits);
    for j in (0..m).rev() {
        circ.h(qubits[j]);
        for l in (0..j).rev() {
            let theta = PI / (1u64 << (j - l)) as f64;
            circ.add(GateKind::Phase(qubits[j], theta), &[Control::on(qubits[l])]);
        }
    }
    for i in 0..m / 2 {
        circ.swap(qubits[i], qubits[m - 1 - i]);
    }
    circ
}

/// Coherent phase estimation of `v` on the layout's `p` register.
///
/// Hadamards on `p`, `p_k`-controlled `v^{2^k}`, then the inverse QFT. An
/// eigenstate with eigenvalue `e^{2πi j/2^m}` reads out `p = j`.
pub fn build_qpe(v: &Circuit, layout: &RegisterLayout) -> Result<Circuit> {
    let p = layout.get("p").map_err(|_| BuildError::MissingRegister("p"))?;
    if p.width == 0 {
        return Err(BuildError::Precision);
    }
    if layout.num_qubits() > layout.cap() {
        return Err(BuildError::QpeCap { needed: layout.num_qubits(), cap: layout.cap() });
    }
    let body = Arc::new(v.clone());
    let mut circ = Circuit::new(layout.num_qubits());
    for q in p.qubits() {
        circ.h(q);
    }
    for k in 0..p.width {
        circ.block(body.clone(), 1u64 << k, &[Control::on(p.qubit(k))]);
    }
    circ.extend(&qft(layout.num_qubits(), &p.qubits()).inverse());
    Ok(circ)
}

/// Result of single-ancilla phase estimation postselected on all zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiclassicalOutcome {
    /// Product of the round probabilities.
    pub probability: f64,
    /// Branch probability per round, in execution order (`k = m-1` first).
    pub round_probs: Vec<f64>,
}

/// Single-ancilla phase estimation with `m` rounds on `p_0`, postselecting
/// every round on `|0⟩`. Phase corrections are omitted since they are never
/// triggered under all-zero outcomes.
pub fn run_semiclassical_qpe<S: QuantumState>(v: &Circuit, m: usize, state: &mut S) -> Result<SemiclassicalOutcome> {
    if m == 0 {
        return Err(BuildError::Precision);
    }
    let p = state.layout().get("p").map_err(|_| BuildError::MissingRegister("p"))?;
    if p.width == 0 {
        return Err(BuildError::MissingRegister("p"));
    }
    let anc = p.qubit(0);
    let body = Arc::new(v.clone());
    let mut round_probs = Vec::with_capacity(m);
    for k in (0..m).rev() {
        let mut round = Circuit::new(state.num_qubits());
        round.h(anc);
        round.block(body.clone(), 1u64 << k, &[Control::on(anc)]);
        round.h(anc);
        round.validate()?;
        state.run_compiled(&CompiledCircuit::new(&round));
        round_probs.push(state.postselect(&[anc], 0)?);
    }
    Ok(SemiclassicalOutcome { probability: round_probs.iter().product(), round_probs })
}
