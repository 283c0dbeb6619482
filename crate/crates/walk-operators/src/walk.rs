use crate::spectral::{unitary_eigen, wrap_phase};
use crate::{LinearOperatorHandle, PartialIsometryHandle, RestrictedOperator, Result, SpectralReport, WalkError};
use qmh_circuits::{build_penalised_walk, build_penalty, build_walk, WalkRegisters};
use qmh_markov::ProblemInstance;
use qmh_sim::{Circuit, CompiledCircuit, QuantumState, RegisterLayout, SparseState, DEFAULT_DENSE_CAP};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Which walk operator to analyse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkKind {
    /// `𝒲 = (2⊠⊠† - I)(X ⊗ S)`.
    Walk,
    /// `𝒱 = (Π⊠ + e^{iφ}(I - Π⊠)) 𝒲`.
    Penalised(f64),
}

/// `⊠` realised by the `□` / `□*` circuits branching on `b`.
pub fn boxtimes_from_circuits(instance: &ProblemInstance, layout: Arc<RegisterLayout>) -> Result<PartialIsometryHandle> {
    PartialIsometryHandle::boxtimes(instance, layout)
}

fn parts(boxtimes: &PartialIsometryHandle) -> Result<(&ProblemInstance, &Arc<RegisterLayout>)> {
    match (boxtimes.instance(), boxtimes.layout()) {
        (Some(i), Some(l)) => Ok((i, l)),
        _ => Err(WalkError::NotCircuit),
    }
}

/// Dual walk `𝒲 = (2⊠⊠† - I)(X ⊗ S)` as a circuit.
pub fn dual_walk(boxtimes: &PartialIsometryHandle) -> Result<LinearOperatorHandle> {
    let (instance, layout) = parts(boxtimes)?;
    LinearOperatorHandle::circuit("walk", build_walk(instance, layout)?, layout.clone())
}

/// Penalised walk: the penalty circuit after `walk`. `varphi = 0` returns
/// `walk` unchanged.
pub fn penalise(walk: &LinearOperatorHandle, boxtimes: &PartialIsometryHandle, varphi: f64) -> Result<LinearOperatorHandle> {
    if !(0.0..TAU).contains(&varphi) {
        return Err(WalkError::Varphi(varphi));
    }
    if varphi == 0.0 {
        log::warn!("penalty phase is zero: the phase-zero degeneracy outside Im(⊠) is not lifted");
        return Ok(walk.clone());
    }
    let (instance, layout) = parts(boxtimes)?;
    let mut circ = walk.circuit_ref().ok_or(WalkError::NotCircuit)?.clone();
    circ.extend(&build_penalty(instance, layout, varphi)?);
    LinearOperatorHandle::circuit("penalised-walk", circ, layout.clone())
}

fn xs_circuit(regs: &WalkRegisters) -> Circuit {
    let mut circ = Circuit::new(regs.num_qubits);
    circ.x(regs.b.qubit(0));
    for k in 0..regs.x.width {
        circ.swap(regs.x.qubit(k), regs.z.qubit(k));
        circ.swap(regs.y.qubit(k), regs.xc.qubit(k));
    }
    circ
}

struct WalkSpace {
    restricted: RestrictedOperator,
    xs: Arc<CompiledCircuit>,
    system_dim: usize,
}

fn walk_space(boxtimes: &PartialIsometryHandle, kind: WalkKind) -> Result<WalkSpace> {
    let (instance, layout) = parts(boxtimes)?;
    let regs = WalkRegisters::new(layout)?;
    if regs.p.width != 0 {
        return Err(WalkError::PhaseRegister);
    }
    let varphi = match kind {
        WalkKind::Walk => None,
        WalkKind::Penalised(phi) => Some(phi),
    };
    let op = CompiledCircuit::new(&build_penalised_walk(instance, layout, varphi)?);
    let xs = Arc::new(CompiledCircuit::new(&xs_circuit(&regs)));
    let mut seeds = boxtimes.image_basis()?;
    let flipped: Vec<SparseState> = seeds
        .iter()
        .map(|s| {
            let mut t = s.clone();
            t.run_compiled(&xs);
            t
        })
        .collect();
    seeds.extend(flipped);
    let max_dim = seeds.len();
    let restricted = RestrictedOperator::close(layout.clone(), &seeds, max_dim, |s| {
        s.run_compiled(&op);
        Ok(())
    })?;
    // The flag qubit is scratch: the operator is analysed on flag = 0.
    let system_dim = 1usize << (layout.num_qubits() - regs.flag.width);
    Ok(WalkSpace { restricted, xs, system_dim })
}

/// Walk operator restricted to `K = span(Im ⊠ ∪ (X ⊗ S) Im ⊠)`.
pub fn restricted_walk(boxtimes: &PartialIsometryHandle, kind: WalkKind) -> Result<RestrictedOperator> {
    Ok(walk_space(boxtimes, kind)?.restricted)
}

/// Full spectral report of `𝒲` or `𝒱` on the flag-clean system space.
///
/// Phases on `K` come from a dense eigensolve of the restricted matrix.
/// On `K^⊥` the operator equals `-(X ⊗ S)` (times `e^{iφ}` when penalised);
/// the `±1` multiplicities of the involution `X ⊗ S` there are half the
/// system dimension minus their counts inside `K`.
pub fn walk_spectral_report(
    boxtimes: &PartialIsometryHandle,
    kind: WalkKind,
    target: Option<&SparseState>,
) -> Result<SpectralReport> {
    let space = walk_space(boxtimes, kind)?;
    if space.system_dim > DEFAULT_DENSE_CAP {
        return Err(WalkError::DenseCap { dim: space.system_dim, cap: DEFAULT_DENSE_CAP });
    }
    let r = &space.restricted;
    let eig = unitary_eigen(&r.matrix);
    let xs = space.xs.clone();
    let (xs_k, xs_res) = r.restrict(|s| {
        s.run_compiled(&xs);
        Ok(())
    })?;
    if xs_res > 1e-8 {
        return Err(WalkError::NotInvariant(xs_res));
    }
    let trace = xs_k.trace().re;
    let plus_k = ((r.dim() as f64 + trace) / 2.0).round() as usize;
    let minus_k = r.dim() - plus_k;
    let half = space.system_dim / 2;
    let phi = match kind {
        WalkKind::Walk => 0.0,
        WalkKind::Penalised(phi) => phi,
    };
    let mut extra = vec![wrap_phase(phi + PI); half - plus_k];
    extra.extend(std::iter::repeat_n(wrap_phase(phi), half - minus_k));
    let coeffs = target.map(|t| r.project(t));
    Ok(SpectralReport::from_eigen(&eig, &extra, coeffs.as_ref()))
}

