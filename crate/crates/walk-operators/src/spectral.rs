use crate::{LinearOperatorHandle, Result, C64};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Eigenphases with `|θ|` at or below this count as zero.
pub const PHASE_TOLERANCE: f64 = 1e-8;

/// Eigenvalues of `(U + U†)/2` closer than this are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-9;

/// Eigendecomposition of a unitary: `U = Σ_k e^{iθ_k} v_k v_k†`.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    /// Phases in `(-π, π]`, ascending.
    pub phases: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `phases`.
    pub vectors: DMatrix<C64>,
}

/// Diagonalises a unitary through two Hermitian eigensolves: `(U + U†)/2`
/// gives `cos θ`, and `(U - U†)/2i` within each cosine cluster separates
/// `±θ`. Each phase is the argument of the Rayleigh quotient `v†Uv`.
pub fn unitary_eigen(u: &DMatrix<C64>) -> UnitaryEigen {
    let n = u.nrows();
    let ud = u.adjoint();
    let herm = (u + &ud).scale(0.5);
    let anti = (u - &ud) * C64::new(0.0, -0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] < CLUSTER_TOL {
            end += 1;
        }
        let cols: Vec<DVector<C64>> = order[start..end].iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
        let q = DMatrix::from_columns(&cols);
        let vecs = if cols.len() == 1 {
            q
        } else {
            let b = q.adjoint() * &anti * &q;
            let b = (&b + b.adjoint()).scale(0.5);
            &q * SymmetricEigen::new(b).eigenvectors
        };
        for v in vecs.column_iter() {
            let v = v.into_owned();
            let rq = v.dotc(&(u * &v));
            pairs.push((wrap_phase(rq.arg()), v));
        }
        start = end;
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let phases = pairs.iter().map(|p| p.0).collect();
    let cols: Vec<DVector<C64>> = pairs.into_iter().map(|p| p.1).collect();
    let vectors = if cols.is_empty() { DMatrix::zeros(0, 0) } else { DMatrix::from_columns(&cols) };
    UnitaryEigen { phases, vectors }
}

/// Maps a phase into `(-π, π]`.
pub(crate) fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if (t + PI).abs() < 1e-12 {
        PI
    } else {
        t
    }
}

/// Eigenphase summary of a unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Sorted phases in `(-π, π]`, with multiplicity.
    pub eigenphases: Vec<f64>,
    /// Smallest `|θ|` above [`PHASE_TOLERANCE`]; `None` when every phase is zero.
    pub angular_gap: Option<f64>,
    /// Number of phases with `|θ| ≤` [`PHASE_TOLERANCE`].
    pub zero_multiplicity: usize,
    /// `‖P₀ t‖² / ‖t‖²` for the phase-zero projector `P₀`; `None` without a target.
    pub target_overlap: Option<f64>,
}

/// Gap and zero multiplicity of a phase list.
pub fn spectrum_summary(phases: &[f64]) -> (Option<f64>, usize) {
    let zeros = phases.iter().filter(|t| t.abs() <= PHASE_TOLERANCE).count();
    let gap = phases.iter().map(|t| t.abs()).filter(|t| *t > PHASE_TOLERANCE).min_by(|a, b| a.total_cmp(b));
    (gap, zeros)
}

impl SpectralReport {
    pub(crate) fn from_eigen(eig: &UnitaryEigen, extra: &[f64], target: Option<&DVector<C64>>) -> Self {
        let mut eigenphases: Vec<f64> = eig.phases.iter().chain(extra).copied().collect();
        eigenphases.sort_by(|a, b| a.total_cmp(b));
        let (angular_gap, zero_multiplicity) = spectrum_summary(&eigenphases);
        let target_overlap = target.map(|t| {
            let norm = t.norm_squared();
            let mut w = 0.0;
            for (k, th) in eig.phases.iter().enumerate() {
                if th.abs() <= PHASE_TOLERANCE {
                    w += eig.vectors.column(k).dotc(t).norm_sqr();
                }
            }
            w / norm
        });
        Self { eigenphases, angular_gap, zero_multiplicity, target_overlap }
    }
}

/// Dense spectral report of `op`, with the target's weight on phase zero.
pub fn spectral_report(op: &LinearOperatorHandle, target: Option<&DVector<C64>>) -> Result<SpectralReport> {
    let m = op.matrix()?;
    Ok(SpectralReport::from_eigen(&unitary_eigen(&m), &[], target))
}
