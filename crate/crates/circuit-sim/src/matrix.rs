use crate::compile::CompiledCircuit;
use crate::{Circuit, QuantumState, RegisterLayout, Result, SimError, Statevector, C64};
use nalgebra::DMatrix;
use std::sync::Arc;

/// Default limit on dense matrix dimension.
pub const DEFAULT_DENSE_CAP: usize = 1 << 14;

/// Dense unitary of `circuit`: column `k` is the circuit applied to `|k⟩`.
pub fn circuit_to_matrix(circuit: &Circuit, dense_cap: usize) -> Result<DMatrix<C64>> {
    let n = circuit.num_qubits;
    let dim = 1usize << n;
    if dim > dense_cap {
        return Err(SimError::DenseCap { dim, cap: dense_cap });
    }
    circuit.validate()?;
    let compiled = CompiledCircuit::new(circuit);
    let layout = Arc::new(RegisterLayout::new().with("q", n)?.with_cap(n.max(1)));
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut sv = Statevector::basis(layout.clone(), k as u64)?;
        sv.run_compiled(&compiled);
        m.set_column(k, &nalgebra::DVector::from_column_slice(sv.amplitudes()));
    }
    Ok(m)
}
