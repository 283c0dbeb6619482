use crate::output::{fmt_f64, read_results, write_csv};
use crate::{CliError, Result};
use qmh_filter::PipelineResult;
use qmh_markov::{build_double_well, gibbs_distribution};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

fn metric(r: &PipelineResult, key: &str) -> Result<f64> {
    r.metrics
        .get(key)
        .copied()
        .ok_or_else(|| CliError::Results(format!("run {} m={} lacks metric `{key}`", r.instance, r.m)))
}

/// Bit-exact key for grouping by `β`.
fn beta_key(beta: f64) -> u64 {
    beta.to_bits()
}

/// Plot-data CSVs for the runs in `results_path`, written to `out_dir`.
/// Returns the files written.
pub fn report(results_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let results = read_results(results_path)?;
    if results.is_empty() {
        return Err(CliError::Results(format!("{}: no runs", results_path.display())));
    }
    let (ising, grid): (Vec<_>, Vec<_>) = results.iter().partition(|r| r.instance.starts_with("ising"));
    let mut written = Vec::new();
    if !ising.is_empty() {
        written.extend(ising_report(&ising, out_dir)?);
    }
    for r in grid {
        written.push(heatmap(r, out_dir)?);
    }
    Ok(written)
}

/// `(i, j, p_X, pi)` per grid state.
fn heatmap(r: &PipelineResult, out_dir: &Path) -> Result<PathBuf> {
    let side = metric(r, "side")? as usize;
    let inst = build_double_well(side, metric(r, "temperature")?)?;
    if r.p_x.len() != side * side {
        return Err(CliError::Results(format!("p_X has {} entries for a {side}x{side} grid", r.p_x.len())));
    }
    let pi = gibbs_distribution(&inst);
    let rows = (0..side * side)
        .map(|s| vec![(s % side).to_string(), (s / side).to_string(), fmt_f64(r.p_x[s]), fmt_f64(pi.probs[s])])
        .collect::<Vec<_>>();
    let suffix = if r.penalised { "" } else { "_unpenalised" };
    let path = out_dir.join(format!("heatmap_m{}{suffix}.csv", r.m));
    write_csv(&path, &["i", "j", "p_X", "pi"].map(String::from), &rows)?;
    Ok(path)
}

fn ising_report(runs: &[&PipelineResult], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ms: BTreeSet<usize> = runs.iter().map(|r| r.m).collect();
    let mut grid: BTreeMap<u64, BTreeMap<usize, &PipelineResult>> = BTreeMap::new();
    for r in runs {
        let beta = metric(r, "beta")?;
        if grid.entry(beta_key(beta)).or_default().insert(r.m, r).is_some() {
            return Err(CliError::Results(format!("duplicate run at beta={beta}, m={}", r.m)));
        }
    }
    let mut sorted: Vec<(f64, &BTreeMap<usize, &PipelineResult>)> = grid.iter().map(|(k, v)| (f64::from_bits(*k), v)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m_cols: Vec<String> = ms.iter().map(|m| format!("m={m}")).collect();
    let per_m = |key: &str, extra: Option<&str>| -> Result<(Vec<String>, Vec<Vec<String>>)> {
        let mut header = vec!["beta".to_string()];
        header.extend(extra.map(|e| e.to_string()));
        header.extend(m_cols.iter().cloned());
        let mut rows = Vec::new();
        for (beta, by_m) in &sorted {
            let mut row = vec![fmt_f64(*beta)];
            if let Some(e) = extra {
                let any = by_m.values().next().expect("nonempty group");
                row.push(fmt_f64(metric(any, e)?));
            }
            for m in &ms {
                row.push(match by_m.get(m) {
                    Some(r) => fmt_f64(metric(r, key)?),
                    None => String::new(),
                });
            }
            rows.push(row);
        }
        Ok((header, rows))
    };
    let mut written = Vec::new();
    for (file, key, extra) in [
        ("fidelity_vs_beta.csv", "fidelity", None),
        ("energy_vs_beta.csv", "energy", Some("gibbs_energy")),
        ("domain_wall_error_vs_beta.csv", "domain_wall_error", None),
    ] {
        let (header, rows) = per_m(key, extra)?;
        let path = out_dir.join(file);
        write_csv(&path, &header, &rows)?;
        written.push(path);
    }
    let mut rows = Vec::new();
    for (beta, by_m) in &sorted {
        for (m, r) in by_m.iter() {
            let mut levels: Vec<(f64, &String)> = r
                .metrics
                .keys()
                .filter_map(|k| k.strip_prefix("mass:").map(|l| (l.parse::<f64>().unwrap_or(f64::NAN), k)))
                .collect();
            levels.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (level, key) in levels {
                let gibbs = metric(r, &format!("gibbs_{key}"))?;
                rows.push(vec![fmt_f64(*beta), m.to_string(), format!("{level}"), fmt_f64(r.metrics[key]), fmt_f64(gibbs)]);
            }
        }
    }
    let path = out_dir.join("sector_mass_vs_beta.csv");
    write_csv(&path, &["beta", "m", "level", "mass", "gibbs_mass"].map(String::from), &rows)?;
    written.push(path);
    Ok(written)
}
