use crate::checks::seed_phase_gap;
use crate::config::ExperimentConfig;
use crate::output::{fmt_f64, level_key};
use crate::Result;
use qmh_circuits::walk_layout;
use qmh_filter::{run_oracle_sweep, run_pipeline, FilterError, FilterMode, FilterSpec, PipelineResult};
use qmh_markov::{build_double_well, build_ising, gibbs_distribution, ProblemInstance};
use qmh_metrics::{basin_mass, energy_sector_mass, expectation, fidelity, observables_ising, tv_distance};
use std::f64::consts::TAU;

/// Basin radius for the double-well table.
pub const BASIN_RADIUS: usize = 1;

/// Precision of the unpenalised comparison run.
pub const COMPARISON_M: usize = 5;

/// Rejects coherent runs whose register exceeds the configured cap.
fn check_cap(instance: &ProblemInstance, mode: FilterMode, m: usize, cap: usize) -> Result<()> {
    let phase = match mode {
        FilterMode::Coherent => m,
        FilterMode::Semiclassical => 1,
        FilterMode::Oracle => 0,
    };
    let needed = walk_layout(instance, phase)?.num_qubits();
    if needed > cap {
        return Err(FilterError::Cap { needed, cap }.into());
    }
    Ok(())
}

/// Runs `ms` at one instance, sharing the Krylov pass in oracle mode.
fn run_many(instance: &ProblemInstance, cfg: &ExperimentConfig, ms: &[usize], penalised: bool, mode: FilterMode) -> Result<Vec<PipelineResult>> {
    for &m in ms {
        check_cap(instance, mode, m, cfg.sim_cap)?;
    }
    if mode == FilterMode::Oracle {
        return Ok(run_oracle_sweep(instance, cfg.varphi, penalised, ms)?);
    }
    let spec = |m| FilterSpec::new(m, cfg.varphi, mode);
    let run = |&m: &usize| -> Result<PipelineResult> { Ok(run_pipeline(instance, &spec(m)?, penalised)?) };
    map_jobs(cfg.jobs, ms, run)
}

/// Maps `f` over `items` on `jobs` workers, keeping input order.
#[cfg(feature = "parallel")]
pub fn map_jobs<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::CliError::Config(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Maps `f` over `items` sequentially.
#[cfg(not(feature = "parallel"))]
pub fn map_jobs<T: Sync, R: Send>(_jobs: usize, items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    items.iter().map(f).collect()
}

/// Penalised double-well rows for every `m`, plus the unpenalised
/// comparison when requested. Metrics: `fidelity`, `tv_distance`,
/// `basin_mass`, `side`, `temperature`.
pub fn doublewell(cfg: &ExperimentConfig) -> Result<Vec<PipelineResult>> {
    let inst = build_double_well(cfg.side, cfg.temperature)?;
    let mut results = run_many(&inst, cfg, &cfg.m, cfg.penalised, cfg.mode)?;
    if cfg.compare_unpenalised {
        let mode = if cfg.mode == FilterMode::Coherent { FilterMode::Semiclassical } else { cfg.mode };
        results.extend(run_many(&inst, cfg, &[COMPARISON_M], false, mode)?);
    }
    let pi = gibbs_distribution(&inst);
    for r in &mut results {
        r.metrics.insert("fidelity".into(), fidelity(&r.p_x, &pi.probs)?);
        r.metrics.insert("tv_distance".into(), tv_distance(&r.p_x, &pi.probs)?);
        r.metrics.insert("basin_mass".into(), basin_mass(&r.p_x, &inst, BASIN_RADIUS)?);
        r.metrics.insert("side".into(), cfg.side as f64);
        r.metrics.insert("temperature".into(), cfg.temperature);
    }
    Ok(results)
}

/// Double-well table: header and rows.
pub fn doublewell_table(results: &[PipelineResult]) -> (Vec<String>, Vec<Vec<String>>) {
    let header = ["m", "penalised", "fidelity", "tv_distance", "basin_mass", "success_probability"].map(String::from).to_vec();
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                r.penalised.to_string(),
                fmt_f64(r.metrics["fidelity"]),
                fmt_f64(r.metrics["tv_distance"]),
                fmt_f64(r.metrics["basin_mass"]),
                fmt_f64(r.success_probability),
            ]
        })
        .collect();
    (header, rows)
}

/// Ising grid over `(β, m)` in deterministic `(β, m)` order. Metrics per
/// row: `beta`, `fidelity`, `energy`, `gibbs_energy`, `magnetization`,
/// `magnetization_error`, `domain_walls`, `domain_wall_error`,
/// `mass:<E>`, `gibbs_mass:<E>`, `delta_v` and `resolved`
/// (`2π/2^m ≤ delta_v`).
pub fn ising(cfg: &ExperimentConfig) -> Result<Vec<PipelineResult>> {
    let rows = map_jobs(cfg.jobs, &cfg.beta, |&beta| ising_point(cfg, beta))?;
    Ok(rows.into_iter().flatten().collect())
}

fn ising_point(cfg: &ExperimentConfig, beta: f64) -> Result<Vec<PipelineResult>> {
    let inst = build_ising(cfg.spins, cfg.coupling, cfg.field, beta)?;
    let pi = gibbs_distribution(&inst);
    let obs = observables_ising(&inst)?;
    let gibbs_sectors = energy_sector_mass(&pi.probs, &inst)?;
    let delta_v = seed_phase_gap(&inst, cfg.varphi, cfg.penalised)?;
    let single = ExperimentConfig { jobs: 1, ..cfg.clone() };
    let mut results = run_many(&inst, &single, &cfg.m, cfg.penalised, cfg.mode)?;
    let e_gibbs = expectation(&pi.probs, &obs.energy)?;
    let mag_gibbs = expectation(&pi.probs, &obs.magnetization)?;
    let dw_gibbs = expectation(&pi.probs, &obs.domain_walls)?;
    for r in &mut results {
        let mag = expectation(&r.p_x, &obs.magnetization)?;
        let dw = expectation(&r.p_x, &obs.domain_walls)?;
        let metrics = [
            ("beta", beta),
            ("coupling", cfg.coupling),
            ("field", cfg.field),
            ("fidelity", fidelity(&r.p_x, &pi.probs)?),
            ("energy", expectation(&r.p_x, &obs.energy)?),
            ("gibbs_energy", e_gibbs),
            ("magnetization", mag),
            ("magnetization_error", (mag - mag_gibbs).abs()),
            ("domain_walls", dw),
            ("domain_wall_error", (dw - dw_gibbs).abs()),
            ("delta_v", delta_v),
            ("resolved", f64::from(u8::from(TAU / (1u64 << r.m) as f64 <= delta_v))),
        ];
        r.metrics.extend(metrics.into_iter().map(|(k, v)| (k.to_string(), v)));
        for ((level, mass), (_, gibbs)) in energy_sector_mass(&r.p_x, &inst)?.into_iter().zip(&gibbs_sectors) {
            r.metrics.insert(format!("mass:{}", level_key(level)), mass);
            r.metrics.insert(format!("gibbs_mass:{}", level_key(level)), *gibbs);
        }
    }
    Ok(results)
}

/// Ising table: header and rows.
pub fn ising_table(results: &[PipelineResult]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = ["beta", "m", "fidelity", "energy", "gibbs_energy", "magnetization_error", "domain_wall_error"]
        .map(String::from)
        .to_vec();
    let levels: Vec<String> = results
        .first()
        .map(|r| r.metrics.keys().filter_map(|k| k.strip_prefix("mass:").map(String::from)).collect())
        .unwrap_or_default();
    let mut sorted = levels.clone();
    sorted.sort_by(|a, b| a.parse::<f64>().unwrap_or(0.0).total_cmp(&b.parse::<f64>().unwrap_or(0.0)));
    header.extend(sorted.iter().map(|l| format!("mass_E{l}")));
    header.extend(["success_probability", "delta_v", "resolved"].map(String::from));
    let rows = results
        .iter()
        .map(|r| {
            let g = |k: &str| fmt_f64(r.metrics.get(k).copied().unwrap_or(f64::NAN));
            let mut row = vec![g("beta"), r.m.to_string()];
            row.extend(["fidelity", "energy", "gibbs_energy", "magnetization_error", "domain_wall_error"].map(g));
            row.extend(sorted.iter().map(|l| g(&format!("mass:{l}"))));
            row.extend([fmt_f64(r.success_probability), g("delta_v"), (r.metrics.get("resolved") == Some(&1.0)).to_string()]);
            row
        })
        .collect();
    (header, rows)
}
