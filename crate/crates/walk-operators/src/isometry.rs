use crate::{Result, WalkError, C64};
use nalgebra::{DMatrix, DVector};
use qmh_circuits::{boxtimes_circuit, WalkRegisters};
use qmh_markov::ProblemInstance;
use qmh_sim::{CompiledCircuit, QuantumState, RegisterLayout, SparseState, Statevector, DEFAULT_DENSE_CAP};
use std::sync::Arc;

#[derive(Clone, Debug)]
enum Body {
    Dense(DMatrix<C64>),
    Boxtimes {
        instance: Box<ProblemInstance>,
        layout: Arc<RegisterLayout>,
        regs: Box<WalkRegisters>,
        states: usize,
        forward: Arc<CompiledCircuit>,
        backward: Arc<CompiledCircuit>,
    },
}

/// Map `□` from a small domain into a larger codomain with `□†□` a
/// projection.
///
/// The circuit form houses `⊠`: domain index `x + n y + n² b` maps to
/// `U⊠ |b⟩|x, y⟩|0⟩`, and the adjoint reads those amplitudes after `U⊠†`.
#[derive(Clone, Debug)]
pub struct PartialIsometryHandle {
    label: String,
    body: Body,
}

impl PartialIsometryHandle {
    /// Dense isometry given by its `codomain x domain` matrix.
    pub fn dense(label: impl Into<String>, matrix: DMatrix<C64>) -> Self {
        Self { label: label.into(), body: Body::Dense(matrix) }
    }

    pub(crate) fn boxtimes(instance: &ProblemInstance, layout: Arc<RegisterLayout>) -> Result<Self> {
        let regs = WalkRegisters::new(&layout)?;
        let circ = boxtimes_circuit(instance, &layout)?;
        circ.validate()?;
        Ok(Self {
            label: "boxtimes".into(),
            body: Body::Boxtimes {
                forward: Arc::new(CompiledCircuit::new(&circ)),
                backward: Arc::new(CompiledCircuit::new(&circ.inverse())),
                states: instance.state_count(),
                instance: Box::new(instance.clone()),
                regs: Box::new(regs),
                layout,
            },
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain_dim(&self) -> usize {
        match &self.body {
            Body::Dense(m) => m.ncols(),
            Body::Boxtimes { states, .. } => 2 * states * states,
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match &self.body {
            Body::Dense(m) => m.nrows(),
            Body::Boxtimes { layout, .. } => 1 << layout.num_qubits(),
        }
    }

    /// Instance behind the circuit form.
    pub fn instance(&self) -> Option<&ProblemInstance> {
        match &self.body {
            Body::Boxtimes { instance, .. } => Some(instance),
            Body::Dense(_) => None,
        }
    }

    /// Layout of the circuit form.
    pub fn layout(&self) -> Option<&Arc<RegisterLayout>> {
        match &self.body {
            Body::Boxtimes { layout, .. } => Some(layout),
            Body::Dense(_) => None,
        }
    }

    /// Basis index of domain element `k` in the circuit form.
    fn embed_index(regs: &WalkRegisters, states: usize, k: usize) -> u64 {
        let pairs = states * states;
        let (pair, b) = (k % pairs, k / pairs);
        regs.x.place((pair % states) as u64) | regs.y.place((pair / states) as u64) | regs.b.place(b as u64)
    }

    /// `□ v`.
    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.domain_dim() {
            return Err(WalkError::Dimension { expected: self.domain_dim(), got: v.len() });
        }
        match &self.body {
            Body::Dense(m) => Ok(m * v),
            Body::Boxtimes { layout, regs, states, forward, .. } => {
                let entries = v.iter().enumerate().filter(|(_, a)| a.norm_sqr() > 0.0);
                let mut st = SparseState::from_entries(
                    layout.clone(),
                    entries.map(|(k, a)| (Self::embed_index(regs, *states, k), *a)),
                );
                st.run_compiled(forward);
                let mut out = DVector::zeros(self.codomain_dim());
                for (i, a) in st.entries() {
                    out[i as usize] = a;
                }
                Ok(out)
            }
        }
    }

    /// `□† w`.
    pub fn adjoint_apply(&self, w: &DVector<C64>) -> Result<DVector<C64>> {
        if w.len() != self.codomain_dim() {
            return Err(WalkError::Dimension { expected: self.codomain_dim(), got: w.len() });
        }
        match &self.body {
            Body::Dense(m) => Ok(m.adjoint() * w),
            Body::Boxtimes { layout, regs, states, backward, .. } => {
                let mut sv = Statevector::from_amplitudes(layout.clone(), w.as_slice().to_vec())?;
                sv.run_compiled(backward);
                Ok(DVector::from_fn(self.domain_dim(), |k, _| sv.amplitude(Self::embed_index(regs, *states, k))))
            }
        }
    }

    /// `□□† w`, the projection onto the image.
    pub fn project(&self, w: &DVector<C64>) -> Result<DVector<C64>> {
        self.apply(&self.adjoint_apply(w)?)
    }

    /// Images of the domain basis vectors (circuit form), as sparse states.
    pub fn image_basis(&self) -> Result<Vec<SparseState>> {
        match &self.body {
            Body::Boxtimes { layout, regs, states, forward, .. } => Ok((0..self.domain_dim())
                .map(|k| {
                    let mut st = SparseState::basis(layout.clone(), Self::embed_index(regs, *states, k));
                    st.run_compiled(forward);
                    st
                })
                .collect()),
            Body::Dense(_) => Err(WalkError::NotCircuit),
        }
    }

    /// `□ |k⟩` for the circuit form as a sparse state.
    pub fn apply_basis_sparse(&self, k: usize) -> Result<SparseState> {
        match &self.body {
            Body::Boxtimes { layout, regs, states, forward, .. } => {
                let mut st = SparseState::basis(layout.clone(), Self::embed_index(regs, *states, k));
                st.run_compiled(forward);
                Ok(st)
            }
            Body::Dense(_) => Err(WalkError::NotCircuit),
        }
    }

    /// Dense `codomain x domain` matrix, by basis-column application.
    pub fn matrix(&self) -> Result<DMatrix<C64>> {
        match &self.body {
            Body::Dense(m) => Ok(m.clone()),
            Body::Boxtimes { .. } => {
                let rows = self.codomain_dim();
                if rows > DEFAULT_DENSE_CAP {
                    return Err(WalkError::DenseCap { dim: rows, cap: DEFAULT_DENSE_CAP });
                }
                let mut m = DMatrix::zeros(rows, self.domain_dim());
                for k in 0..self.domain_dim() {
                    for (i, a) in self.apply_basis_sparse(k)?.entries() {
                        m[(i as usize, k)] = a;
                    }
                }
                Ok(m)
            }
        }
    }
}
