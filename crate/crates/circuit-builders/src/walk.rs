use crate::oracles::{build_acceptance, copy, proposal_oracle};
use crate::{Result, WalkRegisters};
use qmh_markov::ProblemInstance;
use qmh_sim::{Circuit, Control, GateKind, RegisterLayout};

/// Unitary behind `□` (encodes `𝒫 = 𝒯𝒜` from `F = (x, y)` into `G = (z, xc)`).
///
/// `xc ← x`; propose `z ~ T(x, ·)` from `xc`; rotate `a` by `A(x, z)`; on
/// rejection swap `z ↔ xc`. Accepted moves leave `G = (t, x)`, rejected ones
/// `G = (x, t)`.
pub fn box_circuit(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    copy(&mut circ, &regs.x, &regs.xc);
    circ.extend(&proposal_oracle(instance, &regs, &regs.xc, &regs.z)?);
    circ.extend(&build_acceptance(instance, layout, false)?);
    Ok(circ)
}

/// Unitary behind `□*` (encodes the time reversal `𝒜𝒯`).
///
/// `z ← x`; rotate `a` by `A(x, y)`; on acceptance `z ← y`; propose
/// `xc ~ T(z, ·)` from `z`.
pub fn box_star_circuit(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    copy(&mut circ, &regs.x, &regs.z);
    circ.extend(&build_acceptance(instance, layout, true)?);
    circ.extend(&proposal_oracle(instance, &regs, &regs.z, &regs.xc)?);
    Ok(circ)
}

/// Unitary behind `⊠ = |0⟩⟨0| ⊗ □* + |1⟩⟨1| ⊗ □`, branching on `b`.
pub fn boxtimes_circuit(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let b = regs.b.qubit(0);
    let mut circ = Circuit::new(regs.num_qubits);
    circ.extend(&box_star_circuit(instance, layout)?.controlled(&[Control::off(b)]));
    circ.extend(&box_circuit(instance, layout)?.controlled(&[Control::on(b)]));
    Ok(circ)
}

/// `2Π₀ - I` where `Π₀` projects the check registers onto `|0…0⟩`.
pub fn zero_reflection(layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let checks: Vec<Control> = regs.check_qubits().into_iter().map(Control::off).collect();
    let mut circ = Circuit::new(regs.num_qubits);
    // -1 on the all-zero pattern, then -1 globally.
    circ.add(GateKind::GlobalPhase(std::f64::consts::PI), &checks);
    circ.global_phase(std::f64::consts::PI);
    Ok(circ)
}

pub(crate) fn swap_edges(regs: &WalkRegisters, circ: &mut Circuit, controls: &[Control]) {
    for k in 0..regs.x.width {
        circ.add(GateKind::Swap(regs.x.qubit(k), regs.z.qubit(k)), controls);
        circ.add(GateKind::Swap(regs.y.qubit(k), regs.xc.qubit(k)), controls);
    }
}

/// Walk operator `𝒲 = (2⊠⊠† - I)(X ⊗ S)`: flip `b`, swap `F ↔ G`, then
/// reflect about the image of `⊠` as `U⊠ (2Π₀ - I) U⊠†`.
pub fn build_walk(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let ubox = boxtimes_circuit(instance, layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    circ.x(regs.b.qubit(0));
    swap_edges(&regs, &mut circ, &[]);
    circ.extend(&ubox.inverse());
    circ.extend(&zero_reflection(layout)?);
    circ.extend(&ubox);
    Ok(circ)
}

/// Membership test and phase: `flag ^= [checks = 0]`, phase `e^{iφ}` on
/// `flag = 0`, then the test again to reset the flag.
fn flag_phase(regs: &WalkRegisters, varphi: f64) -> Circuit {
    let checks: Vec<Control> = regs.check_qubits().into_iter().map(Control::off).collect();
    let flag = regs.flag.qubit(0);
    let mut circ = Circuit::new(regs.num_qubits);
    circ.mcx(&checks, flag);
    circ.x(flag);
    circ.add(GateKind::Phase(flag, varphi), &[]);
    circ.x(flag);
    circ.mcx(&checks, flag);
    circ
}

/// Penalty `Π⊠ + e^{iφ}(I - Π⊠)` as `U⊠ (flag test, phase, reset) U⊠†`.
pub fn build_penalty(instance: &ProblemInstance, layout: &RegisterLayout, varphi: f64) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let ubox = boxtimes_circuit(instance, layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    circ.extend(&ubox.inverse());
    circ.extend(&flag_phase(&regs, varphi));
    circ.extend(&ubox);
    Ok(circ)
}

/// Penalised walk `𝒱 = (Π⊠ + e^{iφ}(I - Π⊠)) 𝒲`, or `𝒲` when `varphi` is
/// `None`.
///
/// The `U⊠ U⊠†` pair between the walk's reflection and the penalty cancels,
/// so the circuit is `U⊠ · penalty-phase · (2Π₀ - I) · U⊠† · (X ⊗ S)`, equal
/// as an operator to [`build_penalty`] after [`build_walk`] with two fewer
/// `⊠` applications.
pub fn build_penalised_walk(instance: &ProblemInstance, layout: &RegisterLayout, varphi: Option<f64>) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let ubox = boxtimes_circuit(instance, layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    circ.x(regs.b.qubit(0));
    swap_edges(&regs, &mut circ, &[]);
    circ.extend(&ubox.inverse());
    circ.extend(&zero_reflection(layout)?);
    if let Some(phi) = varphi {
        circ.extend(&flag_phase(&regs, phi));
    }
    circ.extend(&ubox);
    Ok(circ)
}
