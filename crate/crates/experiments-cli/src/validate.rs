use crate::checks::{
    decoding_error, degeneracy, exact_filter_error, gap_margin, mode_gaps, qubitized_spectrum, seed_phase_gap, stationarity_errors,
    Check,
};
use crate::config::ExperimentConfig;
use crate::Result;
use qmh_markov::{build_double_well, build_ising, gibbs_distribution, mh_kernel, spectral_gap, ProblemInstance};
use qmh_metrics::basin_mass;

/// Validation outcome: pass/fail checks plus informational lines.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub info: Vec<String>,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn instances() -> Result<Vec<ProblemInstance>> {
    Ok(vec![build_double_well(4, 1.0)?, build_ising(4, 1.0, 0.0, 1.0)?])
}

/// Invariant suite across modules on reduced and full instances.
///
/// Mutation `penalty-off` disables the penalty in the degeneracy check.
pub fn validate(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let full = instances()?;
    let reduced = [build_double_well(2, 1.0)?, build_ising(2, 1.0, 0.0, 1.0)?];
    let checks = &mut report.checks;

    for inst in full.iter().chain(&reduced) {
        for (name, err) in stationarity_errors(inst) {
            checks.push(Check::at_most(format!("{} {name}", inst.label()), err, 1e-12));
        }
        checks.push(Check::at_most(format!("{} decoding of exact target", inst.label()), decoding_error(inst)?, 1e-10));
    }
    for inst in &reduced {
        let (phase_err, gap, acos) = qubitized_spectrum(inst)?;
        checks.push(Check::at_most(format!("{} walk phases = ±arccos σ(D)", inst.label()), phase_err, 1e-9));
        checks.push(Check::at_most(format!("{} Δ = arccos λ₂", inst.label()), (gap - acos).abs(), 1e-9));
    }
    let sweep: Vec<ProblemInstance> = (1..=40)
        .flat_map(|k| [2, 4].map(|n| build_ising(n, 1.0, 0.0, 0.1 * k as f64)))
        .collect::<std::result::Result<_, _>>()?;
    let margin = gap_margin(&sweep)?;
    checks.push(Check::holds("Δ ≥ √δ for Ising n=2,4, β=0.1..4.0", margin >= 0.0, format!("smallest margin {margin:.3e}")));

    let grid2 = &reduced[0];
    let system_dim = 1usize << (qmh_circuits::walk_layout(grid2, 0)?.num_qubits() - 1);
    if system_dim > cfg.dense_cap {
        return Err(qmh_walk::WalkError::DenseCap { dim: system_dim, cap: cfg.dense_cap }.into());
    }
    let varphi = if cfg.mutate.as_deref() == Some("penalty-off") { 0.0 } else { cfg.varphi };
    let deg = degeneracy(grid2, varphi)?;
    checks.push(Check::holds("dim ker(W - I) > 1 on 2x2 grid", deg.walk_zero > 1, format!("dimension {}", deg.walk_zero)));
    checks.push(Check::holds("dim ker(V - I) = 1 on 2x2 grid", deg.penalised_zero == 1, format!("dimension {}", deg.penalised_zero)));
    checks.push(Check::at_most("V fixes the target on 2x2 grid", deg.target_residual, 1e-9));
    checks.push(Check::at_most("exact filter gives π on 2x2 grid", exact_filter_error(grid2, cfg.varphi)?, 1e-9));

    for inst in &full {
        for m in 1..=2 {
            for phi in [0.0, cfg.varphi] {
                let (px, prob) = mode_gaps(inst, phi, m)?;
                let tag = format!("{} m={m} varphi={phi}", inst.label());
                checks.push(Check::at_most(format!("{tag} mode equivalence p_X"), px, 1e-9));
                checks.push(Check::at_most(format!("{tag} mode equivalence success"), prob, 1e-10));
            }
        }
    }
    let dw = &full[0];
    let pi = gibbs_distribution(dw);
    let basin = basin_mass(&pi.probs, dw, 1)?;
    checks.push(Check::at_most("analytic basin mass r=1 vs 0.9815", (basin - 0.9815).abs(), 5e-5));

    for inst in &full {
        let (delta, _) = spectral_gap(&mh_kernel(inst), &gibbs_distribution(inst))?;
        let (_, gap_w, _) = qubitized_spectrum(inst)?;
        let gap_v = seed_phase_gap(inst, cfg.varphi, true)?;
        report.info.push(format!(
            "{}: δ = {delta:.6e}, Δ_W = {gap_w:.6e}, Δ_W/δ = {:.4}, Δ_W/√δ = {:.4}, seed-space Δ_V = {gap_v:.6e}",
            inst.label(),
            gap_w / delta,
            gap_w / delta.sqrt()
        ));
    }
    report.info.push(format!(
        "2x2 grid: Δ_W = {:.6e}, Δ_V = {:.6e}",
        deg.walk_gap.unwrap_or(f64::NAN),
        deg.penalised_gap.unwrap_or(f64::NAN)
    ));
    Ok(report)
}
