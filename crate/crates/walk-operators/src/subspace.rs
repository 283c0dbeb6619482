use crate::{Result, WalkError, C64};
use nalgebra::{DMatrix, DVector};
use qmh_sim::{RegisterLayout, SparseState};
use rustc_hash::FxHashMap;
use std::sync::Arc;

/// Residual norm below which a candidate direction counts as dependent.
pub const DEPENDENCE_TOL: f64 = 1e-9;

/// Largest invariant-subspace residual accepted.
const INVARIANCE_TOL: f64 = 1e-8;

/// Vectors over a growing set of basis indices.
#[derive(Clone, Debug, Default)]
struct Compressed {
    slot: FxHashMap<u64, usize>,
    index: Vec<u64>,
}

impl Compressed {
    fn encode(&mut self, state: &SparseState) -> Vec<C64> {
        let mut v = vec![C64::default(); self.index.len()];
        for (i, a) in state.entries() {
            let k = *self.slot.entry(i).or_insert_with(|| {
                self.index.push(i);
                self.index.len() - 1
            });
            if k >= v.len() {
                v.resize(k + 1, C64::default());
            }
            v[k] = a;
        }
        v
    }
}

fn dotc(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Subtracts the projection onto `basis` twice (classical Gram-Schmidt with
/// reorthogonalisation) and returns the coefficients removed.
fn orthogonalise(basis: &[Vec<C64>], v: &mut [C64]) -> Vec<C64> {
    let mut coeff = vec![C64::default(); basis.len()];
    for _ in 0..2 {
        for (j, b) in basis.iter().enumerate() {
            let c = dotc(b, v);
            coeff[j] += c;
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    coeff
}

/// Operator restricted to an invariant subspace found by closing a set of
/// seed vectors under repeated application.
///
/// `matrix[(j, i)] = ⟨b_j | U | b_i⟩` for the orthonormal basis `b`.
#[derive(Clone, Debug)]
pub struct RestrictedOperator {
    layout: Arc<RegisterLayout>,
    index: Vec<u64>,
    basis: Vec<Vec<C64>>,
    /// Restricted matrix in the orthonormal basis.
    pub matrix: DMatrix<C64>,
    /// Largest `‖U b_i - Σ_j M_ji b_j‖` over the basis.
    pub residual: f64,
}

impl RestrictedOperator {
    /// Closes `seeds` under `apply` (Krylov iteration), failing when the
    /// span would exceed `max_dim`.
    pub fn close<F>(layout: Arc<RegisterLayout>, seeds: &[SparseState], max_dim: usize, apply: F) -> Result<Self>
    where
        F: Fn(&mut SparseState) -> Result<()>,
    {
        let mut space = Compressed::default();
        let mut basis: Vec<Vec<C64>> = Vec::new();
        let push = |basis: &mut Vec<Vec<C64>>, mut v: Vec<C64>| -> Result<()> {
            orthogonalise(basis, &mut v);
            let nv = norm(&v);
            if nv > DEPENDENCE_TOL {
                if basis.len() == max_dim {
                    return Err(WalkError::SubspaceTooLarge(max_dim));
                }
                v.iter_mut().for_each(|x| *x /= nv);
                basis.push(v);
            }
            Ok(())
        };
        for s in seeds {
            let v = space.encode(s);
            let n = norm(&v);
            if n > 0.0 {
                push(&mut basis, v.into_iter().map(|x| x / n).collect())?;
            }
        }
        let mut images: Vec<Vec<C64>> = Vec::new();
        let mut i = 0;
        while i < basis.len() {
            let mut st = lift(&layout, &space.index, &basis[i]);
            apply(&mut st)?;
            let img = space.encode(&st);
            images.push(img.clone());
            push(&mut basis, img)?;
            i += 1;
        }
        let dim = basis.len();
        let len = space.index.len();
        for v in basis.iter_mut().chain(images.iter_mut()) {
            v.resize(len, C64::default());
        }
        let mut matrix = DMatrix::zeros(dim, dim);
        let mut residual: f64 = 0.0;
        for (i, img) in images.iter().enumerate() {
            let mut r = img.clone();
            let coeff = orthogonalise(&basis, &mut r);
            for (j, c) in coeff.into_iter().enumerate() {
                matrix[(j, i)] = c;
            }
            residual = residual.max(norm(&r));
        }
        if residual > INVARIANCE_TOL {
            return Err(WalkError::NotInvariant(residual));
        }
        Ok(Self { layout, index: space.index, basis, matrix, residual })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    /// Number of distinct basis indices touched by the subspace.
    pub fn support(&self) -> usize {
        self.index.len()
    }

    /// `Σ_k c_k b_k` as a sparse state.
    pub fn lift(&self, coeffs: &DVector<C64>) -> SparseState {
        let mut v = vec![C64::default(); self.index.len()];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        lift(&self.layout, &self.index, &v)
    }

    /// Coefficients `⟨b_k | ψ⟩`, ignoring any component outside the subspace.
    pub fn project(&self, state: &SparseState) -> DVector<C64> {
        let pos: FxHashMap<u64, usize> = self.index.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut v = vec![C64::default(); self.index.len()];
        for (i, a) in state.entries() {
            if let Some(&k) = pos.get(&i) {
                v[k] = a;
            }
        }
        DVector::from_iterator(self.dim(), self.basis.iter().map(|b| dotc(b, &v)))
    }

    /// Restricted matrix of another operator that leaves the same subspace
    /// invariant, with its invariance residual.
    pub fn restrict<F>(&self, apply: F) -> Result<(DMatrix<C64>, f64)>
    where
        F: Fn(&mut SparseState) -> Result<()>,
    {
        let pos: FxHashMap<u64, usize> = self.index.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut residual: f64 = 0.0;
        for i in 0..dim {
            let mut st = lift(&self.layout, &self.index, &self.basis[i]);
            apply(&mut st)?;
            let mut v = vec![C64::default(); self.index.len()];
            let mut outside = 0.0;
            for (idx, a) in st.entries() {
                match pos.get(&idx) {
                    Some(&k) => v[k] = a,
                    None => outside += a.norm_sqr(),
                }
            }
            let coeff = orthogonalise(&self.basis, &mut v);
            for (j, c) in coeff.into_iter().enumerate() {
                m[(j, i)] = c;
            }
            residual = residual.max((norm(&v).powi(2) + outside).sqrt());
        }
        Ok((m, residual))
    }
}

fn lift(layout: &Arc<RegisterLayout>, index: &[u64], v: &[C64]) -> SparseState {
    SparseState::from_entries(
        layout.clone(),
        v.iter().zip(index).filter(|(a, _)| a.norm_sqr() > 0.0).map(|(a, &i)| (i, *a)),
    )
}
