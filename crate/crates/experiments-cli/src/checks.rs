//! Measured quantities behind `qmh validate` and the acceptance suite.

use crate::Result;
use nalgebra::DMatrix;
use qmh_circuits::{build_decoding, target_state, walk_layout};
use qmh_filter::{exact_filter, pipeline_operator, run_oracle_sweep, run_pipeline, seed_krylov, FilterMode, FilterSpec};
use qmh_markov::{
    discriminant, discriminant_spectrum, dual_kernels, dual_stationary, gibbs_distribution, mh_kernel, spectral_gap,
    ProblemInstance,
};
use qmh_sim::{QuantumState, C64};
use qmh_walk::{
    boxtimes_from_circuits, qubitized_walk, spectral_report, synthetic_spue_of_discriminant, unitary_eigen,
    walk_spectral_report, WalkKind, PHASE_TOLERANCE,
};
use std::f64::consts::PI;

/// Outcome of one validation check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured value against the bound.
    pub detail: String,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured <= tolerance,
            detail: format!("measured {measured:.3e}, tolerance {tolerance:.0e}"),
        }
    }

    /// Passes when `passed` holds.
    pub fn holds(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    /// `PASS name: detail` or `FAIL name: detail`.
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Named stationarity residuals: `πP = π`, `ν𝒯 = ν𝒜 = ν𝒫 = ν`, detailed
/// balance of `P`, and row sums of all four kernels.
pub fn stationarity_errors(instance: &ProblemInstance) -> Vec<(&'static str, f64)> {
    let pi = gibbs_distribution(instance);
    let p = mh_kernel(instance);
    let dual = dual_kernels(instance);
    let nu = dual_stationary(&pi, instance);
    let rows = [&p, &dual.proposal, &dual.acceptance, &dual.mh].iter().map(|k| k.stochasticity_error()).fold(0.0, f64::max);
    vec![
        ("pi P = pi", max_abs_diff(&p.left_apply(&pi.probs), &pi.probs)),
        ("nu T = nu", max_abs_diff(&dual.proposal.left_apply(&nu.probs), &nu.probs)),
        ("nu A = nu", max_abs_diff(&dual.acceptance.left_apply(&nu.probs), &nu.probs)),
        ("nu P = nu", max_abs_diff(&dual.mh.left_apply(&nu.probs), &nu.probs)),
        ("detailed balance", p.detailed_balance_error(&pi.probs)),
        ("row sums", rows),
    ]
}

/// Discriminant-level qubitized walk: returns the largest deviation of its
/// eigenphases from `±arccos σ(D)`, its angular gap, and `arccos λ₂`.
pub fn qubitized_spectrum(instance: &ProblemInstance) -> Result<(f64, f64, f64)> {
    let pi = gibbs_distribution(instance);
    let kernel = mh_kernel(instance);
    let d = discriminant(&kernel, &pi)?.matrix;
    let d: DMatrix<f64> = (&d + d.transpose()) * 0.5;
    let (u, square) = synthetic_spue_of_discriminant(&d)?;
    let report = spectral_report(&qubitized_walk(&u, &square)?, None)?;
    let mut want = Vec::new();
    for v in discriminant_spectrum(&kernel, &pi)? {
        if (v - 1.0).abs() < 1e-12 {
            want.extend([0.0, 0.0]);
        } else if (v + 1.0).abs() < 1e-12 {
            want.extend([PI, PI]);
        } else {
            let g = v.clamp(-1.0, 1.0).acos();
            want.extend([g, -g]);
        }
    }
    want.sort_by(f64::total_cmp);
    let mut got = report.eigenphases.clone();
    got.sort_by(f64::total_cmp);
    let phase_err = if got.len() == want.len() { max_abs_diff(&got, &want) } else { f64::INFINITY };
    let (_, lambda2) = spectral_gap(&kernel, &pi)?;
    Ok((phase_err, report.angular_gap.unwrap_or(0.0), lambda2.acos()))
}

/// Smallest `Δ - √δ` over the given instances.
pub fn gap_margin(instances: &[ProblemInstance]) -> Result<f64> {
    let mut margin = f64::INFINITY;
    for inst in instances {
        let (delta, _) = spectral_gap(&mh_kernel(inst), &gibbs_distribution(inst))?;
        let (_, gap, _) = qubitized_spectrum(inst)?;
        margin = margin.min(gap - delta.sqrt());
    }
    Ok(margin)
}

/// Degeneracy of the circuit walks on a small instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Degeneracy {
    /// `dim ker(𝒲 - I)`.
    pub walk_zero: usize,
    /// `dim ker(𝒱 - I)`.
    pub penalised_zero: usize,
    /// `‖𝒱 t - t‖` for the exact target `t`.
    pub target_residual: f64,
    /// Angular gap of `𝒲`.
    pub walk_gap: Option<f64>,
    /// Angular gap of `𝒱`.
    pub penalised_gap: Option<f64>,
}

/// Zero-phase multiplicities of `𝒲` and `𝒱` and the target residual.
pub fn degeneracy(instance: &ProblemInstance, varphi: f64) -> Result<Degeneracy> {
    let layout = walk_layout(instance, 0)?;
    let boxtimes = boxtimes_from_circuits(instance, layout.clone())?;
    let target = target_state(instance, layout.clone())?;
    let w = walk_spectral_report(&boxtimes, WalkKind::Walk, Some(&target))?;
    let kind = if varphi == 0.0 { WalkKind::Walk } else { WalkKind::Penalised(varphi) };
    let v = walk_spectral_report(&boxtimes, kind, Some(&target))?;
    let mut moved = target.clone();
    moved.run(&pipeline_operator(instance, &layout, varphi, true)?)?;
    moved.axpy(C64::new(-1.0, 0.0), &target);
    Ok(Degeneracy {
        walk_zero: w.zero_multiplicity,
        penalised_zero: v.zero_multiplicity,
        target_residual: moved.norm_sqr().sqrt(),
        walk_gap: w.angular_gap,
        penalised_gap: v.angular_gap,
    })
}

/// `‖p_exact - π‖_∞` for the exact phase-zero projection.
pub fn exact_filter_error(instance: &ProblemInstance, varphi: f64) -> Result<f64> {
    let (p, _) = exact_filter(instance, varphi, true)?;
    Ok(max_abs_diff(&p.probs, &gibbs_distribution(instance).probs))
}

/// `‖x-marginal - π‖_∞` after decoding the exact target.
pub fn decoding_error(instance: &ProblemInstance) -> Result<f64> {
    let layout = walk_layout(instance, 0)?;
    let mut state = target_state(instance, layout.clone())?;
    state.run(&build_decoding(instance, &layout)?)?;
    let p = state.marginal_distribution("x")?;
    Ok(max_abs_diff(&p.probs, &gibbs_distribution(instance).probs))
}

/// Largest `p_X` and success-probability gaps between coherent,
/// semiclassical and oracle modes at one setting.
pub fn mode_gaps(instance: &ProblemInstance, varphi: f64, m: usize) -> Result<(f64, f64)> {
    let penalised = varphi != 0.0;
    let oracle = run_oracle_sweep(instance, varphi, penalised, &[m])?.remove(0);
    let (mut px, mut prob) = (0.0f64, 0.0f64);
    for mode in [FilterMode::Coherent, FilterMode::Semiclassical] {
        let r = run_pipeline(instance, &FilterSpec::new(m, varphi, mode)?, penalised)?;
        px = px.max(max_abs_diff(&r.p_x, &oracle.p_x));
        prob = prob.max((r.success_probability - oracle.success_probability).abs());
    }
    Ok((px, prob))
}

/// Smallest nonzero eigenphase magnitude of the pipeline operator on the
/// invariant subspace generated by the seed.
pub fn seed_phase_gap(instance: &ProblemInstance, varphi: f64, penalised: bool) -> Result<f64> {
    let layout = walk_layout(instance, 0)?;
    let krylov = seed_krylov(instance, &layout, varphi, penalised)?;
    let eig = unitary_eigen(&krylov.matrix);
    Ok(eig.phases.iter().map(|p| p.abs()).filter(|p| *p > PHASE_TOLERANCE).fold(PI, f64::min))
}
