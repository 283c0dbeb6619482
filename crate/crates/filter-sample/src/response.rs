use crate::{FilterError, Result};
use std::f64::consts::TAU;

/// Amplitude of the phase-register zero outcome for eigenphase `phi`:
/// `sin(2^{m-1} φ) / (2^m sin(φ/2))`, with value 1 at `φ = 0 mod 2π`.
pub fn dirichlet_weight(phi: f64, m: usize) -> f64 {
    let n = (1u64 << m) as f64;
    let half = (phi / 2.0).sin();
    if half.abs() < 1e-12 {
        // Limit of the ratio near a multiple of 2π, sign included.
        return (n * phi / 2.0).cos() / (phi / 2.0).cos();
    }
    (n * phi / 2.0).sin() / (n * half)
}

/// Probability that eigencomponent `j` survives postselection:
/// `α_j² · dirichlet_weight(φ_j, m)²`.
pub fn survival_probability(alpha: f64, phi: f64, m: usize) -> f64 {
    let w = dirichlet_weight(phi, m);
    alpha * alpha * w * w
}

/// Smallest `m` with `2π / 2^m ≤ √δ`.
pub fn required_precision(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(FilterError::Gap(delta));
    }
    let mut m = 1;
    while TAU / (1u64 << m) as f64 > delta.sqrt() {
        m += 1;
    }
    Ok(m)
}
