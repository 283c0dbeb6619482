use crate::{Result, WalkError, C64};
use nalgebra::{DMatrix, DVector};
use qmh_sim::{Circuit, CompiledCircuit, QuantumState, RegisterLayout, SparseState, Statevector, DEFAULT_DENSE_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Debug)]
enum Body {
    Dense(DMatrix<C64>),
    Circuit { circuit: Arc<Circuit>, compiled: Arc<CompiledCircuit>, layout: Arc<RegisterLayout> },
}

/// Square operator backed by a dense matrix or a circuit on a layout.
#[derive(Clone, Debug)]
pub struct LinearOperatorHandle {
    label: String,
    body: Body,
    adjoint: bool,
    dense_cap: usize,
}

impl LinearOperatorHandle {
    /// Dense operator; `matrix` must be square with power-of-two size.
    pub fn dense(label: impl Into<String>, matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(WalkError::Dimension { expected: matrix.nrows(), got: matrix.ncols() });
        }
        Ok(Self { label: label.into(), body: Body::Dense(matrix), adjoint: false, dense_cap: DEFAULT_DENSE_CAP })
    }

    /// Circuit-backed operator acting on `layout`.
    pub fn circuit(label: impl Into<String>, circuit: Circuit, layout: Arc<RegisterLayout>) -> Result<Self> {
        if circuit.num_qubits != layout.num_qubits() {
            return Err(WalkError::Dimension { expected: layout.num_qubits(), got: circuit.num_qubits });
        }
        circuit.validate()?;
        let compiled = Arc::new(CompiledCircuit::new(&circuit));
        Ok(Self {
            label: label.into(),
            body: Body::Circuit { circuit: Arc::new(circuit), compiled, layout },
            adjoint: false,
            dense_cap: DEFAULT_DENSE_CAP,
        })
    }

    /// Same operator with another dense cap.
    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    /// True when this handle was produced by [`adjoint`](Self::adjoint) an odd
    /// number of times.
    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn dimension(&self) -> usize {
        match &self.body {
            Body::Dense(m) => m.nrows(),
            Body::Circuit { layout, .. } => 1 << layout.num_qubits(),
        }
    }

    pub fn circuit_ref(&self) -> Option<&Circuit> {
        match &self.body {
            Body::Circuit { circuit, .. } => Some(circuit),
            Body::Dense(_) => None,
        }
    }

    pub fn compiled(&self) -> Option<&CompiledCircuit> {
        match &self.body {
            Body::Circuit { compiled, .. } => Some(compiled),
            Body::Dense(_) => None,
        }
    }

    pub fn layout(&self) -> Option<&Arc<RegisterLayout>> {
        match &self.body {
            Body::Circuit { layout, .. } => Some(layout),
            Body::Dense(_) => None,
        }
    }

    /// `U†`: conjugate transpose or inverse circuit.
    pub fn adjoint(&self) -> Result<Self> {
        let mut out = match &self.body {
            Body::Dense(m) => Self::dense(self.label.clone(), m.adjoint())?,
            Body::Circuit { circuit, layout, .. } => Self::circuit(self.label.clone(), circuit.inverse(), layout.clone())?,
        };
        out.adjoint = !self.adjoint;
        out.dense_cap = self.dense_cap;
        Ok(out)
    }

    /// `U v`, returning a new vector.
    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dimension() {
            return Err(WalkError::Dimension { expected: self.dimension(), got: v.len() });
        }
        match &self.body {
            Body::Dense(m) => Ok(m * v),
            Body::Circuit { compiled, layout, .. } => {
                let mut sv = Statevector::from_amplitudes(layout.clone(), v.as_slice().to_vec())?;
                sv.run_compiled(compiled);
                Ok(DVector::from_vec(sv.into_amplitudes()))
            }
        }
    }

    /// `U ψ` in place on a sparse state (circuit-backed operators only).
    pub fn apply_sparse(&self, state: &mut SparseState) -> Result<()> {
        match &self.body {
            Body::Circuit { compiled, layout, .. } => {
                if state.layout().num_qubits() != layout.num_qubits() {
                    return Err(WalkError::Dimension { expected: layout.num_qubits(), got: state.layout().num_qubits() });
                }
                state.run_compiled(compiled);
                Ok(())
            }
            Body::Dense(_) => Err(WalkError::NotCircuit),
        }
    }

    /// Dense matrix, built column by column for circuits. Fails above the
    /// dense cap.
    pub fn matrix(&self) -> Result<DMatrix<C64>> {
        let dim = self.dimension();
        if dim > self.dense_cap {
            return Err(WalkError::DenseCap { dim, cap: self.dense_cap });
        }
        match &self.body {
            Body::Dense(m) => Ok(m.clone()),
            Body::Circuit { circuit, .. } => Ok(qmh_sim::circuit_to_matrix(circuit, self.dense_cap)?),
        }
    }

    /// Largest `|‖Uv‖ - 1|` over `samples` random unit vectors.
    pub fn unitarity_error(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.dimension();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let v = DVector::from_fn(dim, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let v = v.unscale(v.norm());
            worst = worst.max((self.apply(&v)?.norm() - 1.0).abs());
        }
        Ok(worst)
    }
}
