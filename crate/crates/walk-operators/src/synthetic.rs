use crate::{LinearOperatorHandle, PartialIsometryHandle, Result, WalkError, C64};
use nalgebra::{DMatrix, SymmetricEigen};

const SYMMETRY_TOL: f64 = 1e-10;
const NORM_SLACK: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-12;

fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

/// Synthetic symmetric encoding of a real symmetric `D` with `‖D‖₂ ≤ 1`:
/// `U = [[D, √(I-D²)], [√(I-D²), -D]]` and `□|x⟩ = |x⟩|0⟩`, so that
/// `□†U□ = D`.
pub fn synthetic_spue_of_discriminant(d: &DMatrix<f64>) -> Result<(LinearOperatorHandle, PartialIsometryHandle)> {
    let n = d.nrows();
    if !d.is_square() {
        return Err(WalkError::Dimension { expected: n, got: d.ncols() });
    }
    let asym = (d - d.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(WalkError::NotSymmetric(asym));
    }
    let eig = SymmetricEigen::new((d + d.transpose()).scale(0.5));
    let norm = eig.eigenvalues.amax();
    if norm > 1.0 + NORM_SLACK {
        return Err(WalkError::NormTooLarge(norm));
    }
    // Eigenvalues within rounding of ±1 are snapped so that √(1 - v²) does
    // not turn 1e-16 noise into a 1e-8 rotation.
    let root = eig.eigenvalues.map(|v| if 1.0 - v.abs() < SNAP_TOL { 0.0 } else { ((1.0 - v) * (1.0 + v)).sqrt() });
    let s = &eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose();
    let mut u = DMatrix::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(&to_complex(d));
    u.view_mut((0, n), (n, n)).copy_from(&to_complex(&s));
    u.view_mut((n, 0), (n, n)).copy_from(&to_complex(&s));
    u.view_mut((n, n), (n, n)).copy_from(&to_complex(&(-d)));
    let mut sq = DMatrix::zeros(2 * n, n);
    sq.view_mut((0, 0), (n, n)).fill_with_identity();
    Ok((LinearOperatorHandle::dense("spue", u)?, PartialIsometryHandle::dense("embed", sq)))
}

/// Qubitized walk `(2□□† - I) U` of a symmetric encoding.
pub fn qubitized_walk(u: &LinearOperatorHandle, square: &PartialIsometryHandle) -> Result<LinearOperatorHandle> {
    let um = u.matrix()?;
    let sq = square.matrix()?;
    if sq.nrows() != um.nrows() {
        return Err(WalkError::Dimension { expected: um.nrows(), got: sq.nrows() });
    }
    let refl = (&sq * sq.adjoint()).scale(2.0) - DMatrix::<C64>::identity(um.nrows(), um.nrows());
    LinearOperatorHandle::dense("qubitized-walk", refl * um)
}

/// Hermitianization of an encoding `(U, □_L, □_R)` of `A = □_L†U□_R`.
///
/// Returns `Ū = (|0⟩⟨0| ⊗ U + |1⟩⟨1| ⊗ U†)(X ⊗ I) = [[0, U], [U†, 0]]` and
/// `□̄ = □_L ⊕ □_R`, so that `□̄†Ū□̄ = [[0, A], [A†, 0]]`.
pub fn hermitianize(
    u: &LinearOperatorHandle,
    left: &PartialIsometryHandle,
    right: &PartialIsometryHandle,
) -> Result<(LinearOperatorHandle, PartialIsometryHandle)> {
    let um = u.matrix()?;
    let n = um.nrows();
    let (l, r) = (left.matrix()?, right.matrix()?);
    for m in [&l, &r] {
        if m.nrows() != n {
            return Err(WalkError::Dimension { expected: n, got: m.nrows() });
        }
    }
    let mut bar = DMatrix::zeros(2 * n, 2 * n);
    bar.view_mut((0, n), (n, n)).copy_from(&um);
    bar.view_mut((n, 0), (n, n)).copy_from(&um.adjoint());
    let (a, b) = (l.ncols(), r.ncols());
    let mut sq = DMatrix::zeros(2 * n, a + b);
    sq.view_mut((0, 0), (n, a)).copy_from(&l);
    sq.view_mut((n, a), (n, b)).copy_from(&r);
    Ok((LinearOperatorHandle::dense("hermitianized", bar)?, PartialIsometryHandle::dense("hermitianized-embed", sq)))
}
