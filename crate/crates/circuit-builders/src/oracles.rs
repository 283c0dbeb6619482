use crate::{BuildError, Result, WalkRegisters};
use qmh_markov::{mh_acceptance, InstanceKind, ProblemInstance};
use qmh_sim::{Circuit, Control, GateKind, Register, RegisterLayout};

/// Controls matching `reg == value`.
pub(crate) fn pattern(reg: &Register, value: usize) -> Vec<Control> {
    (0..reg.width).map(|k| Control { qubit: reg.qubit(k), on: (value >> k) & 1 == 1 }).collect()
}

/// Bitwise copy `tgt ^= src`.
pub(crate) fn copy(circ: &mut Circuit, src: &Register, tgt: &Register) {
    for k in 0..src.width {
        circ.cx(src.qubit(k), tgt.qubit(k));
    }
}

/// `+1 mod 2^k` on `bits` (least significant first), under `ctl`.
fn increment(circ: &mut Circuit, bits: &[usize], ctl: &[Control]) {
    for b in (1..bits.len()).rev() {
        let mut cs: Vec<Control> = bits[..b].iter().map(|&q| Control::on(q)).collect();
        cs.extend_from_slice(ctl);
        circ.mcx(&cs, bits[b]);
    }
    circ.mcx(ctl, bits[0]);
}

/// `-1 mod 2^k` on `bits`, the inverse of [`increment`].
fn decrement(circ: &mut Circuit, bits: &[usize], ctl: &[Control]) {
    circ.mcx(ctl, bits[0]);
    for b in 1..bits.len() {
        let mut cs: Vec<Control> = bits[..b].iter().map(|&q| Control::on(q)).collect();
        cs.extend_from_slice(ctl);
        circ.mcx(&cs, bits[b]);
    }
}

/// Proposal oracle `|s⟩|0⟩ ↦ Σ_t √T(s,t) |s⟩|t⟩` from `src` into `tgt`, with
/// coin (and scratch) returned to zero.
pub fn proposal_oracle(
    instance: &ProblemInstance,
    regs: &WalkRegisters,
    src: &Register,
    tgt: &Register,
) -> Result<Circuit> {
    match instance.kind {
        InstanceKind::DoubleWell { side } => ot_grid(instance, regs, side, src, tgt),
        InstanceKind::Ising { n_spins, .. } => ot_ising(regs, n_spins, src, tgt),
    }
}

fn ot_grid(
    instance: &ProblemInstance,
    regs: &WalkRegisters,
    side: usize,
    src: &Register,
    tgt: &Register,
) -> Result<Circuit> {
    let k = side.trailing_zeros() as usize;
    let coin = &regs.c;
    let scratch = &regs.d;
    let moves = instance.neighbors[0].len();
    if scratch.width != coin.width || 1 << coin.width != moves {
        return Err(BuildError::CoinWidth(moves));
    }
    let mut circ = Circuit::new(regs.num_qubits);
    copy(&mut circ, src, tgt);
    for q in coin.qubits() {
        circ.h(q);
    }
    let i_bits: Vec<usize> = (0..k).map(|b| tgt.qubit(b)).collect();
    let j_bits: Vec<usize> = (k..2 * k).map(|b| tgt.qubit(b)).collect();
    for v in 0..moves {
        let ctl = pattern(coin, v);
        // Coin order: i+1, i-1, j+1, j-1 (side 2: flip i, flip j).
        match (moves, v) {
            (2, 0) => increment(&mut circ, &i_bits, &ctl),
            (2, _) => increment(&mut circ, &j_bits, &ctl),
            (_, 0) => increment(&mut circ, &i_bits, &ctl),
            (_, 1) => decrement(&mut circ, &i_bits, &ctl),
            (_, 2) => increment(&mut circ, &j_bits, &ctl),
            _ => decrement(&mut circ, &j_bits, &ctl),
        }
    }
    let direction = direction_circuit(instance, regs, src, tgt);
    circ.extend(&direction);
    for b in 0..coin.width {
        circ.cx(scratch.qubit(b), coin.qubit(b));
    }
    circ.extend(&direction);
    Ok(circ)
}

/// `d ^= v(s, t)`: the coin value that moves `s` to `t`, by pattern-controlled
/// NOTs over every directed edge.
fn direction_circuit(instance: &ProblemInstance, regs: &WalkRegisters, src: &Register, tgt: &Register) -> Circuit {
    let mut circ = Circuit::new(regs.num_qubits);
    for b in 0..regs.d.width {
        for (s, nb) in instance.neighbors.iter().enumerate() {
            for (v, &t) in nb.iter().enumerate() {
                if (v >> b) & 1 == 1 {
                    let mut ctl = pattern(src, s);
                    ctl.extend(pattern(tgt, t));
                    circ.mcx(&ctl, regs.d.qubit(b));
                }
            }
        }
    }
    circ
}

fn ot_ising(regs: &WalkRegisters, n_spins: usize, src: &Register, tgt: &Register) -> Result<Circuit> {
    let coin = &regs.c;
    if !n_spins.is_power_of_two() || 1 << coin.width != n_spins || regs.d.width != 0 {
        return Err(BuildError::CoinWidth(n_spins));
    }
    let mut circ = Circuit::new(regs.num_qubits);
    copy(&mut circ, src, tgt);
    for q in coin.qubits() {
        circ.h(q);
    }
    for k in 0..n_spins {
        circ.mcx(&pattern(coin, k), tgt.qubit(k));
    }
    // Uncompute the coin from the flipped position: tgt ^= src leaves the
    // one-hot word e_k, whose parities give the bits of k.
    copy(&mut circ, src, tgt);
    for j in 0..n_spins {
        for b in 0..coin.width {
            if (j >> b) & 1 == 1 {
                circ.cx(tgt.qubit(j), coin.qubit(b));
            }
        }
    }
    copy(&mut circ, src, tgt);
    Ok(circ)
}

/// Grid proposal oracle from `x` into `y`.
pub fn build_ot_grid(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let InstanceKind::DoubleWell { side } = instance.kind else {
        return Err(BuildError::WrongInstance);
    };
    let regs = WalkRegisters::new(layout)?;
    if regs.d.width == 0 {
        return Err(BuildError::MissingRegister("d"));
    }
    ot_grid(instance, &regs, side, &regs.x, &regs.y)
}

/// Single-spin-flip proposal oracle from `x` into `y`.
pub fn build_ot_ising(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<Circuit> {
    let InstanceKind::Ising { n_spins, .. } = instance.kind else {
        return Err(BuildError::WrongInstance);
    };
    let regs = WalkRegisters::new(layout)?;
    ot_ising(&regs, n_spins, &regs.x, &regs.y)
}

/// Rotation angle `2 arcsin √A` loading acceptance `A` into ancilla `a`.
pub fn acceptance_angle(acceptance: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&acceptance) {
        return Err(BuildError::Acceptance(acceptance));
    }
    Ok(2.0 * acceptance.sqrt().asin())
}

/// Acceptance oracle.
///
/// Unstarred (`O_𝒜`, inside `□`): expects `xc = x = s` and `z = t`; rotates
/// `a` by the angle of `A(s, t)`, then swaps `z ↔ xc` on rejection (`a = 0`).
///
/// Starred (`O_𝒜*`, inside `□*`): expects `z = x = s` and `y = t`; rotates
/// `a` by the angle of `A(s, t)`, then on acceptance (`a = 1`) replaces `z`
/// by `y` through `z ^= x ^ y`.
///
/// Each rotation is guarded by equality of the copied register with `x`
/// (part of its control pattern), so it acts trivially when that copy differs.
pub fn build_acceptance(instance: &ProblemInstance, layout: &RegisterLayout, starred: bool) -> Result<Circuit> {
    let regs = WalkRegisters::new(layout)?;
    let mut circ = Circuit::new(regs.num_qubits);
    let a = regs.a.qubit(0);
    for (s, nb) in instance.neighbors.iter().enumerate() {
        for &t in nb {
            let theta = acceptance_angle(mh_acceptance(instance, s, t).expect("neighbour pair"))?;
            if theta == 0.0 {
                continue;
            }
            let mut ctl = pattern(&regs.x, s);
            if starred {
                ctl.extend(pattern(&regs.y, t));
                ctl.extend(pattern(&regs.z, s));
            } else {
                ctl.extend(pattern(&regs.xc, s));
                ctl.extend(pattern(&regs.z, t));
            }
            circ.add(GateKind::Ry(a, theta), &ctl);
        }
    }
    for k in 0..regs.z.width {
        if starred {
            circ.mcx(&[Control::on(a), Control::on(regs.x.qubit(k))], regs.z.qubit(k));
            circ.mcx(&[Control::on(a), Control::on(regs.y.qubit(k))], regs.z.qubit(k));
        } else {
            circ.add(GateKind::Swap(regs.z.qubit(k), regs.xc.qubit(k)), &[Control::off(a)]);
        }
    }
    Ok(circ)
}
