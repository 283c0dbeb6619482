use crate::kernel::acceptance_unchecked;
use crate::{pair_index, Distribution, KernelLabel, ProblemInstance, StochasticKernel};
use nalgebra::DMatrix;

/// Dual kernels on ordered pairs `(x, y)`, indexed by [`pair_index`].
#[derive(Clone, Debug)]
pub struct DualKernels {
    /// `𝒯((x,y),(z,t)) = δ_x(z) T(x,t)`: keep the tail, resample the head.
    pub proposal: StochasticKernel,
    /// `𝒜`: reverse the edge with probability `A(x,y)`, otherwise stay.
    pub acceptance: StochasticKernel,
    /// `𝒫 = 𝒯𝒜`.
    pub mh: StochasticKernel,
}

/// Acceptance on an arbitrary pair; pairs outside the proposal graph never move.
pub fn pair_acceptance(instance: &ProblemInstance, x: usize, y: usize) -> f64 {
    if instance.neighbors[x].contains(&y) {
        acceptance_unchecked(instance, x, y)
    } else {
        0.0
    }
}

/// Builds `𝒯`, `𝒜` and `𝒫 = 𝒯𝒜` on the `|E|²` ordered pairs.
pub fn dual_kernels(instance: &ProblemInstance) -> DualKernels {
    let n = instance.state_count();
    let nn = n * n;
    let mut t = DMatrix::zeros(nn, nn);
    let mut a = DMatrix::zeros(nn, nn);
    for x in 0..n {
        for y in 0..n {
            let e = pair_index(x, y, n);
            for (k, &h) in instance.neighbors[x].iter().enumerate() {
                t[(e, pair_index(x, h, n))] += instance.proposal[x][k];
            }
            let acc = pair_acceptance(instance, x, y);
            a[(e, pair_index(y, x, n))] += acc;
            a[(e, e)] += 1.0 - acc;
        }
    }
    let p = &t * &a;
    DualKernels {
        proposal: StochasticKernel::new(t, KernelLabel::DualProposal),
        acceptance: StochasticKernel::new(a, KernelLabel::DualAcceptance),
        mh: StochasticKernel::new(p, KernelLabel::DualP),
    }
}

/// Dual stationary distribution `ν(x, y) = π(x) T(x, y)`.
pub fn dual_stationary(pi: &Distribution, instance: &ProblemInstance) -> Distribution {
    let n = instance.state_count();
    let mut nu = vec![0.0; n * n];
    for x in 0..n {
        for (k, &y) in instance.neighbors[x].iter().enumerate() {
            nu[pair_index(x, y, n)] += pi.probs[x] * instance.proposal[x][k];
        }
    }
    Distribution::new(nu)
}
