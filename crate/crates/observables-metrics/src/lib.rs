//! Classical distribution metrics and Ising observables.
//!
//! Metrics compare a sampled distribution `p` with a reference `q` over the
//! same finite state space: fidelity `(Σ √(p q))²`, total variation
//! `½ Σ |p - q|` and basin mass around the energy minima of a grid instance.

use qmh_markov::{InstanceKind, ProblemInstance};
use thiserror::Error;

/// Errors from metric evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("metric needs a grid instance")]
    NotGrid,
    #[error("metric needs an Ising instance")]
    NotIsing,
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, MetricError>;

fn same_len(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(MetricError::Length(p.len(), q.len()))
    }
}

/// Classical fidelity `(Σ √(p q))²`.
pub fn fidelity(p: &[f64], q: &[f64]) -> Result<f64> {
    same_len(p, q)?;
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt()).sum();
    Ok((bc * bc).min(1.0))
}

/// Total variation distance `½ Σ |p - q|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    same_len(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Mass of `p` inside the union of L∞ balls of radius `r` around the
/// instance minima, on non-wrapping grid coordinates.
pub fn basin_mass(p: &[f64], instance: &ProblemInstance, r: usize) -> Result<f64> {
    let side = match instance.kind {
        InstanceKind::DoubleWell { side } => side,
        InstanceKind::Ising { .. } => return Err(MetricError::NotGrid),
    };
    same_len(p, &instance.energy)?;
    let coords = |s: usize| ((s % side) as isize, (s / side) as isize);
    let r = r as isize;
    Ok(p
        .iter()
        .enumerate()
        .filter(|(s, _)| {
            let (i, j) = coords(*s);
            instance.minima.iter().any(|&m| {
                let (mi, mj) = coords(m);
                (i - mi).abs() <= r && (j - mj).abs() <= r
            })
        })
        .map(|(_, v)| v)
        .sum())
}

/// `Σ p(x) O(x)`.
pub fn expectation(p: &[f64], observable: &[f64]) -> Result<f64> {
    same_len(p, observable)?;
    Ok(p.iter().zip(observable).map(|(a, o)| a * o).sum())
}

/// Per-state Ising observables.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingObservables {
    /// `H(σ)` as stored on the instance.
    pub energy: Vec<f64>,
    /// `Σ σ_i`.
    pub magnetization: Vec<f64>,
    /// `#{i : σ_i ≠ σ_{i+1}}` on the open chain.
    pub domain_walls: Vec<f64>,
}

/// Energy, magnetisation and domain walls for every configuration.
/// Spin `k` is `+1` when bit `k` of the state index is 0.
pub fn observables_ising(instance: &ProblemInstance) -> Result<IsingObservables> {
    let n = match instance.kind {
        InstanceKind::Ising { n_spins, .. } => n_spins,
        InstanceKind::DoubleWell { .. } => return Err(MetricError::NotIsing),
    };
    let states = instance.state_count();
    let spin = |s: usize, k: usize| if (s >> k) & 1 == 0 { 1.0 } else { -1.0 };
    Ok(IsingObservables {
        energy: instance.energy.clone(),
        magnetization: (0..states).map(|s| (0..n).map(|k| spin(s, k)).sum()).collect(),
        domain_walls: (0..states).map(|s| (0..n.saturating_sub(1)).filter(|&k| spin(s, k) != spin(s, k + 1)).count() as f64).collect(),
    })
}

/// Mass of `p` per distinct energy level, sorted by level.
pub fn energy_sector_mass(p: &[f64], instance: &ProblemInstance) -> Result<Vec<(f64, f64)>> {
    if !matches!(instance.kind, InstanceKind::Ising { .. }) {
        return Err(MetricError::NotIsing);
    }
    same_len(p, &instance.energy)?;
    let mut sectors: Vec<(f64, f64)> = Vec::new();
    for (e, v) in instance.energy.iter().zip(p) {
        match sectors.iter_mut().find(|(lvl, _)| (lvl - e).abs() < 1e-9) {
            Some(slot) => slot.1 += v,
            None => sectors.push((*e, *v)),
        }
    }
    sectors.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(sectors)
}
