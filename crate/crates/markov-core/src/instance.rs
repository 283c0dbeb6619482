use crate::{MarkovError, Result};

/// Which benchmark family an instance belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceKind {
    /// Two quadratic wells on a `side x side` torus.
    DoubleWell { side: usize },
    /// Open-boundary Ising chain `H = -J Σ σ_i σ_{i+1} - h Σ σ_i`.
    Ising { n_spins: usize, coupling: f64, field: f64 },
}

/// Finite state space with energies, a symmetric proposal graph and a target
/// inverse temperature.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub kind: InstanceKind,
    /// Energy of every state, indexed by the binary encoding.
    pub energy: Vec<f64>,
    /// Inverse temperature β.
    pub beta: f64,
    /// Neighbours of every state, in proposal-coin order.
    pub neighbors: Vec<Vec<usize>>,
    /// Proposal probability `T(x, y)` for each entry of `neighbors`.
    pub proposal: Vec<Vec<f64>>,
    /// Global energy minima, used by basin metrics.
    pub minima: Vec<usize>,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(MarkovError::Beta(beta))
    }
}

/// Double-well potential on a torus of side `grid_side` at temperature `T`.
///
/// Energies use the non-periodic potential
/// `U(i, j) = min(i² + (j-1)², (i-3)² + (j-3)²)` with wells at `(0, 1)` and
/// `(3, 3)` for every side, while proposals wrap around. Smaller grids keep
/// the formula and lose the second well. Neighbour order follows the coin
/// values `i+1, i-1, j+1, j-1`; duplicates (side 2) are merged.
pub fn build_double_well(grid_side: usize, temperature: f64) -> Result<ProblemInstance> {
    if grid_side < 2 || !grid_side.is_power_of_two() {
        return Err(MarkovError::GridSide(grid_side));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(MarkovError::Beta(temperature));
    }
    let l = grid_side;
    let n = l * l;
    let mut energy = Vec::with_capacity(n);
    let mut neighbors = Vec::with_capacity(n);
    for s in 0..n {
        let (i, j) = (s % l, s / l);
        let (fi, fj) = (i as f64, j as f64);
        energy.push((fi * fi + (fj - 1.0).powi(2)).min((fi - 3.0).powi(2) + (fj - 3.0).powi(2)));
        let moves = [
            ((i + 1) % l, j),
            ((i + l - 1) % l, j),
            (i, (j + 1) % l),
            (i, (j + l - 1) % l),
        ];
        let mut nb: Vec<usize> = Vec::with_capacity(4);
        for (a, b) in moves {
            let t = a + l * b;
            if !nb.contains(&t) {
                nb.push(t);
            }
        }
        neighbors.push(nb);
    }
    let proposal = neighbors
        .iter()
        .map(|nb| vec![1.0 / nb.len() as f64; nb.len()])
        .collect();
    let minima = (0..n).filter(|&s| energy[s] == 0.0).collect();
    Ok(ProblemInstance {
        kind: InstanceKind::DoubleWell { side: l },
        energy,
        beta: 1.0 / temperature,
        neighbors,
        proposal,
        minima,
    })
}

/// Open-boundary Ising chain with single-spin-flip proposals of weight `1/n`.
pub fn build_ising(n_spins: usize, coupling: f64, field: f64, beta: f64) -> Result<ProblemInstance> {
    if n_spins < 2 {
        return Err(MarkovError::SpinCount(n_spins));
    }
    check_beta(beta)?;
    let n = 1usize << n_spins;
    let energy: Vec<f64> = (0..n)
        .map(|s| {
            let spin = |k: usize| if (s >> k) & 1 == 0 { 1.0 } else { -1.0 };
            let bonds: f64 = (0..n_spins - 1).map(|k| spin(k) * spin(k + 1)).sum();
            let mag: f64 = (0..n_spins).map(spin).sum();
            -coupling * bonds - field * mag
        })
        .collect();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|s| (0..n_spins).map(|k| s ^ (1 << k)).collect())
        .collect();
    let proposal = vec![vec![1.0 / n_spins as f64; n_spins]; n];
    let emin = energy.iter().cloned().fold(f64::INFINITY, f64::min);
    let minima = (0..n).filter(|&s| (energy[s] - emin).abs() < 1e-12).collect();
    Ok(ProblemInstance {
        kind: InstanceKind::Ising { n_spins, coupling, field },
        energy,
        beta,
        neighbors,
        proposal,
        minima,
    })
}

impl ProblemInstance {
    /// Number of states `|E|`.
    pub fn state_count(&self) -> usize {
        self.energy.len()
    }

    /// Qubits needed to store one state.
    pub fn state_bits(&self) -> usize {
        self.state_count().trailing_zeros() as usize
    }

    /// Proposal probability `T(x, y)`; zero for non-neighbours.
    pub fn proposal_prob(&self, x: usize, y: usize) -> f64 {
        self.neighbors[x]
            .iter()
            .position(|&t| t == y)
            .map_or(0.0, |k| self.proposal[x][k])
    }

    /// Copy of the instance at another inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta, ..self.clone() })
    }

    /// Grid side for double-well instances.
    pub fn grid_side(&self) -> Option<usize> {
        match self.kind {
            InstanceKind::DoubleWell { side } => Some(side),
            InstanceKind::Ising { .. } => None,
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match &self.kind {
            InstanceKind::DoubleWell { side } => format!("doublewell-{side}x{side}"),
            InstanceKind::Ising { n_spins, .. } => format!("ising-{n_spins}"),
        }
    }
}
