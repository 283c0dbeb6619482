use crate::{FilterError, Result, C64};
use nalgebra::DVector;
use qmh_circuits::{build_decoding, build_penalised_walk, build_qpe, run_semiclassical_qpe, seed_circuit, walk_layout};
use qmh_markov::{gibbs_distribution, Distribution, ProblemInstance};
use qmh_sim::{Circuit, CompiledCircuit, QuantumState, RegisterLayout, SparseState};
use qmh_walk::{boxtimes_from_circuits, restricted_walk, unitary_eigen, LinearOperatorHandle, RestrictedOperator, WalkKind, PHASE_TOLERANCE};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Branch probabilities below this count as empty.
const MIN_SUCCESS: f64 = 1e-14;

/// How the phase-zero filter is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    /// Full phase register, inverse QFT, postselect on all zeros.
    Coherent,
    /// One recycled phase qubit, postselected every round.
    Semiclassical,
    /// Power sum `2^{-m} Σ_{k<2^m} 𝒱^k` on the Krylov space of the seed.
    Oracle,
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterMode::Coherent => "coherent",
            FilterMode::Semiclassical => "semiclassical",
            FilterMode::Oracle => "oracle",
        })
    }
}

impl FromStr for FilterMode {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(FilterMode::Coherent),
            "semiclassical" => Ok(FilterMode::Semiclassical),
            "oracle" | "power-sum" | "power-sum-oracle" => Ok(FilterMode::Oracle),
            other => Err(FilterError::Mode(other.to_string())),
        }
    }
}

/// Filter parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Precision qubits.
    pub m: usize,
    /// Penalty phase in radians.
    pub varphi: f64,
    pub mode: FilterMode,
}

impl FilterSpec {
    /// Checks `m ≥ 1` and `varphi ∈ [0, 2π)`.
    pub fn new(m: usize, varphi: f64, mode: FilterMode) -> Result<Self> {
        if m == 0 {
            return Err(FilterError::Precision);
        }
        if !(0.0..TAU).contains(&varphi) {
            return Err(FilterError::Varphi(varphi));
        }
        Ok(Self { m, varphi, mode })
    }
}

/// Output of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub instance: String,
    pub mode: FilterMode,
    pub m: usize,
    pub varphi: f64,
    pub penalised: bool,
    /// Exact weight of the postselected branch.
    pub success_probability: f64,
    /// Marginal of register `x` after decoding.
    #[serde(rename = "p_X")]
    pub p_x: Vec<f64>,
    /// Per-round branch weights (semiclassical mode only).
    pub round_probs: Vec<f64>,
    /// Evaluation metrics attached by callers.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl PipelineResult {
    /// `p_X` as a distribution.
    pub fn distribution(&self) -> Distribution {
        Distribution::new(self.p_x.clone())
    }
}

/// Normalised `2^{-m} Σ_{k<2^m} V^k ψ₀` and its squared norm relative to `ψ₀`.
/// Costs `2^m - 1` applications of `v`.
pub fn power_sum_filter(v: &LinearOperatorHandle, psi0: &SparseState, m: usize) -> Result<(SparseState, f64)> {
    if m == 0 {
        return Err(FilterError::Precision);
    }
    let mut acc = psi0.clone();
    let mut cur = psi0.clone();
    for _ in 1..(1u64 << m) {
        v.apply_sparse(&mut cur)?;
        acc.axpy(C64::new(1.0, 0.0), &cur);
    }
    let prob = acc.norm_sqr() / (((1u64 << m) as f64).powi(2) * psi0.norm_sqr());
    if prob.is_nan() || prob < MIN_SUCCESS {
        return Err(FilterError::EmptyBranch(prob));
    }
    let n = acc.norm_sqr().sqrt();
    acc.scale(C64::new(1.0 / n, 0.0));
    Ok((acc, prob))
}

/// Walk operator used by the pipeline: `𝒱` when penalised with a nonzero
/// phase, `𝒲` otherwise.
pub fn pipeline_operator(instance: &ProblemInstance, layout: &RegisterLayout, varphi: f64, penalised: bool) -> Result<Circuit> {
    let phase = (penalised && varphi != 0.0).then_some(varphi);
    Ok(build_penalised_walk(instance, layout, phase)?)
}

fn seed(instance: &ProblemInstance, layout: &Arc<RegisterLayout>) -> Result<SparseState> {
    let mut state = SparseState::basis(layout.clone(), 0);
    state.run(&seed_circuit(instance, layout)?)?;
    Ok(state)
}

fn decode<S: QuantumState>(instance: &ProblemInstance, mut state: S) -> Result<Vec<f64>> {
    state.run(&build_decoding(instance, state.layout())?)?;
    Ok(state.marginal_distribution("x")?.probs)
}

/// Runs seed, filter, decoding and postselection for one filter setting.
pub fn run_pipeline(instance: &ProblemInstance, spec: &FilterSpec, penalised: bool) -> Result<PipelineResult> {
    let spec = FilterSpec::new(spec.m, spec.varphi, spec.mode)?;
    let result = |success_probability, p_x, round_probs| PipelineResult {
        instance: instance.label(),
        mode: spec.mode,
        m: spec.m,
        varphi: spec.varphi,
        penalised,
        success_probability,
        p_x,
        round_probs,
        metrics: BTreeMap::new(),
    };
    match spec.mode {
        FilterMode::Coherent => {
            let layout = walk_layout(instance, spec.m)?;
            let v = pipeline_operator(instance, &layout, spec.varphi, penalised)?;
            let qpe = build_qpe(&v, &layout)?;
            let mut state = seed(instance, &layout)?;
            state.run(&qpe)?;
            let p = layout.get("p")?.qubits();
            let prob = state.postselect(&p, 0)?;
            Ok(result(prob, decode(instance, state)?, Vec::new()))
        }
        FilterMode::Semiclassical => {
            let layout = walk_layout(instance, 1)?;
            let v = pipeline_operator(instance, &layout, spec.varphi, penalised)?;
            let mut state = seed(instance, &layout)?;
            let out = run_semiclassical_qpe(&v, spec.m, &mut state)?;
            Ok(result(out.probability, decode(instance, state)?, out.round_probs))
        }
        FilterMode::Oracle => Ok(run_oracle_sweep(instance, spec.varphi, penalised, &[spec.m])?.remove(0)),
    }
}

/// Power-sum filter for several precisions at once, on the invariant
/// subspace generated by the seed. Partial sums up to `2^m` are read off a
/// single pass of `2^{max m} - 1` restricted products.
pub fn run_oracle_sweep(instance: &ProblemInstance, varphi: f64, penalised: bool, ms: &[usize]) -> Result<Vec<PipelineResult>> {
    for &m in ms {
        FilterSpec::new(m, varphi, FilterMode::Oracle)?;
    }
    let layout = walk_layout(instance, 0)?;
    let krylov = seed_krylov(instance, &layout, varphi, penalised)?;
    let c0 = DVector::from_element(1, C64::new(1.0, 0.0)).resize_vertically(krylov.dim(), C64::default());
    let top = ms.iter().copied().max().unwrap_or(0);
    let mut sums = BTreeMap::new();
    let mut acc = c0.clone();
    let mut cur = c0;
    for k in 1..=(1u64 << top) {
        if k.is_power_of_two() {
            sums.insert(k.trailing_zeros() as usize, acc.clone());
        }
        if k < 1u64 << top {
            cur = &krylov.matrix * cur;
            acc += &cur;
        }
    }
    ms.iter()
        .map(|&m| {
            let mut avg = sums[&m].clone() / C64::new((1u64 << m) as f64, 0.0);
            let prob = avg.norm_squared();
            if prob.is_nan() || prob < MIN_SUCCESS {
                return Err(FilterError::EmptyBranch(prob));
            }
            avg /= C64::new(prob.sqrt(), 0.0);
            Ok(PipelineResult {
                instance: instance.label(),
                mode: FilterMode::Oracle,
                m,
                varphi,
                penalised,
                success_probability: prob,
                p_x: decode(instance, krylov.lift(&avg))?,
                round_probs: Vec::new(),
                metrics: BTreeMap::new(),
            })
        })
        .collect()
}

/// Smallest subspace containing the seed and invariant under the pipeline
/// operator. The seed is the first basis vector.
pub fn seed_krylov(instance: &ProblemInstance, layout: &Arc<RegisterLayout>, varphi: f64, penalised: bool) -> Result<RestrictedOperator> {
    let v = CompiledCircuit::new(&pipeline_operator(instance, layout, varphi, penalised)?);
    let start = seed(instance, layout)?;
    let max_dim = 4 * instance.state_count() * instance.state_count();
    Ok(RestrictedOperator::close(layout.clone(), &[start], max_dim, |s| {
        s.run_compiled(&v);
        Ok(())
    })?)
}

/// Exact phase-zero projection of the seed followed by decoding.
///
/// Eigensolves `𝒱` (or `𝒲`) restricted to `span(Im ⊠ ∪ (X ⊗ S) Im ⊠)`,
/// keeps eigenvectors with phase below [`PHASE_TOLERANCE`] and returns the
/// decoded `x` marginal with the projected weight.
pub fn exact_filter(instance: &ProblemInstance, varphi: f64, penalised: bool) -> Result<(Distribution, f64)> {
    let layout = walk_layout(instance, 0)?;
    let boxtimes = boxtimes_from_circuits(instance, layout.clone())?;
    let kind = if penalised && varphi != 0.0 { WalkKind::Penalised(varphi) } else { WalkKind::Walk };
    let restricted = restricted_walk(&boxtimes, kind)?;
    let eig = unitary_eigen(&restricted.matrix);
    let coeffs = restricted.project(&seed(instance, &layout)?);
    let mut proj = DVector::zeros(restricted.dim());
    for (j, phase) in eig.phases.iter().enumerate() {
        if phase.abs() < PHASE_TOLERANCE {
            let v = eig.vectors.column(j);
            proj += v * v.dotc(&coeffs);
        }
    }
    let weight = proj.norm_squared();
    if weight.is_nan() || weight < MIN_SUCCESS {
        return Err(FilterError::EmptyBranch(weight));
    }
    let p = decode(instance, restricted.lift(&proj))?;
    Ok((Distribution::new(p), weight))
}

/// Target distribution `π` of the instance.
pub fn target_distribution(instance: &ProblemInstance) -> Distribution {
    gibbs_distribution(instance)
}
