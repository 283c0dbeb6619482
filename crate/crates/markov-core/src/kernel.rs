use crate::{MarkovError, ProblemInstance, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use std::io::Write;

/// Probability vector over a finite index set.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub probs: Vec<f64>,
    /// Partition function when the distribution is Gibbs-derived.
    pub normalizer: Option<f64>,
}

impl Distribution {
    /// Wraps raw probabilities without a normaliser.
    pub fn new(probs: Vec<f64>) -> Self {
        Self { probs, normalizer: None }
    }

    /// Uniform distribution over `n` entries.
    pub fn uniform(n: usize) -> Self {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Writes `state,value` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["state", "value"])?;
        for (s, p) in self.probs.iter().enumerate() {
            wr.write_record([s.to_string(), format!("{p:.17e}")])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Which kernel a matrix represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelLabel {
    /// Metropolis-Hastings kernel on states.
    P,
    /// Dual proposal kernel on edges.
    DualProposal,
    /// Dual acceptance kernel on edges.
    DualAcceptance,
    /// Dual Metropolis-Hastings kernel on edges.
    DualP,
    /// Discriminant `diag(π)^{1/2} P diag(π)^{-1/2}`.
    Discriminant,
    /// Anything else (tests, custom chains).
    Custom,
}

/// Square matrix with row convention `K[(x, y)] = Pr(x → y)`.
#[derive(Clone, Debug)]
pub struct StochasticKernel {
    pub matrix: DMatrix<f64>,
    pub label: KernelLabel,
}

impl StochasticKernel {
    pub fn new(matrix: DMatrix<f64>, label: KernelLabel) -> Self {
        Self { matrix, label }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest deviation of a row sum from 1 or of an entry from `[0, 1]`.
    pub fn stochasticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim() {
            let row = self.matrix.row(r);
            worst = worst.max((row.sum() - 1.0).abs());
            for &v in row.iter() {
                worst = worst.max(-v).max(v - 1.0);
            }
        }
        worst
    }

    /// Row vector product `p K`.
    pub fn left_apply(&self, p: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (x, &px) in p.iter().enumerate() {
            if px == 0.0 {
                continue;
            }
            for (y, o) in out.iter_mut().enumerate() {
                *o += px * self.matrix[(x, y)];
            }
        }
        out
    }

    /// Largest violation of `π(x)K(x,y) = π(y)K(y,x)`.
    pub fn detailed_balance_error(&self, pi: &[f64]) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                let d = pi[x] * self.matrix[(x, y)] - pi[y] * self.matrix[(y, x)];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    /// Writes `row,col,value` rows for the nonzero entries.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["row", "col", "value"])?;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let v = self.matrix[(r, c)];
                if v != 0.0 {
                    wr.write_record([r.to_string(), c.to_string(), format!("{v:.17e}")])?;
                }
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Gibbs distribution `exp(-βE)/Z`, with energies shifted by their minimum.
pub fn gibbs_distribution(instance: &ProblemInstance) -> Distribution {
    let emin = instance.energy.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = instance
        .energy
        .iter()
        .map(|&e| (-instance.beta * (e - emin)).exp())
        .collect();
    let z: f64 = w.iter().sum();
    Distribution {
        probs: w.iter().map(|v| v / z).collect(),
        normalizer: Some(z * (-instance.beta * emin).exp()),
    }
}

/// Metropolis acceptance `min(1, exp(-β(E(y) - E(x))))` for neighbours.
pub fn mh_acceptance(instance: &ProblemInstance, x: usize, y: usize) -> Result<f64> {
    if x >= instance.state_count() || !instance.neighbors[x].contains(&y) {
        return Err(MarkovError::NotNeighbours(x, y));
    }
    Ok(acceptance_unchecked(instance, x, y))
}

pub(crate) fn acceptance_unchecked(instance: &ProblemInstance, x: usize, y: usize) -> f64 {
    let de = instance.energy[y] - instance.energy[x];
    if de <= 0.0 {
        1.0
    } else {
        (-instance.beta * de).exp()
    }
}

/// Metropolis-Hastings kernel `P(x,y) = T(x,y)A(x,y)` with rejection mass on
/// the diagonal.
pub fn mh_kernel(instance: &ProblemInstance) -> StochasticKernel {
    let n = instance.state_count();
    let mut m = DMatrix::zeros(n, n);
    for x in 0..n {
        let mut moved = 0.0;
        for (k, &y) in instance.neighbors[x].iter().enumerate() {
            let p = instance.proposal[x][k] * acceptance_unchecked(instance, x, y);
            m[(x, y)] += p;
            moved += p;
        }
        m[(x, x)] += 1.0 - moved;
    }
    StochasticKernel::new(m, KernelLabel::P)
}

/// Discriminant `D = diag(π)^{1/2} P diag(π)^{-1/2}`.
pub fn discriminant(kernel: &StochasticKernel, pi: &Distribution) -> Result<StochasticKernel> {
    let n = kernel.dim();
    if pi.len() != n {
        return Err(MarkovError::Dimension { expected: n, got: pi.len() });
    }
    if let Some(s) = pi.probs.iter().position(|&p| p.is_nan() || p <= 0.0) {
        return Err(MarkovError::NonPositive(s));
    }
    let sq: Vec<f64> = pi.probs.iter().map(|p| p.sqrt()).collect();
    let d = DMatrix::from_fn(n, n, |x, y| sq[x] * kernel.matrix[(x, y)] / sq[y]);
    Ok(StochasticKernel::new(d, KernelLabel::Discriminant))
}

/// Spectral gap `δ = 1 - max{|λ| : λ ≠ 1}` and the second-largest eigenvalue
/// `λ₂`, from a symmetric eigensolve of the discriminant.
///
/// One copy of the eigenvalue 1 is removed; further copies count as `|λ| = 1`.
pub fn spectral_gap(kernel: &StochasticKernel, pi: &Distribution) -> Result<(f64, f64)> {
    let violation = kernel.detailed_balance_error(&pi.probs);
    if violation > 1e-10 {
        return Err(MarkovError::NotReversible(violation));
    }
    let mut ev = discriminant_spectrum(kernel, pi)?;
    ev.sort_by(|a, b| b.total_cmp(a));
    let rest = &ev[1..];
    let slem = rest.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let lambda2 = rest.first().copied().unwrap_or(0.0);
    Ok((1.0 - slem, lambda2))
}

/// Eigenvalues of the symmetrised discriminant, unsorted.
pub fn discriminant_spectrum(kernel: &StochasticKernel, pi: &Distribution) -> Result<Vec<f64>> {
    let d = discriminant(kernel, pi)?.matrix;
    let sym = (&d + d.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.iter().copied().collect())
}
