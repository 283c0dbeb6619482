//! Classical side of the quantum Metropolis-Hastings workflow.
//!
//! Builds the two benchmark problem instances (double well on a torus and an
//! open-boundary Ising chain), their Gibbs targets, Metropolis-Hastings
//! kernels, spectral quantities, and the dual kernels acting on directed
//! edges `(x, y)`.
//!
//! Basis conventions shared with the circuit modules:
//! - grid state `(i, j)` has index `i + side * j`; the bits of `i` are the low
//!   bits of the register;
//! - Ising spin `σ_k` is stored as bit `(1 - σ_k) / 2` at position `k`;
//! - an edge or pair `(x, y)` has index `x + n * y` where `n = |E|`.

mod chain;
mod dual;
mod error;
mod instance;
mod kernel;

pub use chain::classical_chain_sample;
pub use dual::{dual_kernels, dual_stationary, pair_acceptance, DualKernels};
pub use error::MarkovError;
pub use instance::{build_double_well, build_ising, InstanceKind, ProblemInstance};
pub use kernel::{
    discriminant, discriminant_spectrum, gibbs_distribution, mh_acceptance, mh_kernel, spectral_gap, Distribution,
    KernelLabel, StochasticKernel,
};

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, MarkovError>;

/// Tolerance used when validating detailed balance and stochasticity.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Index of the ordered pair `(x, y)` in a space of `n` states.
#[inline]
pub fn pair_index(x: usize, y: usize, n: usize) -> usize {
    x + n * y
}
