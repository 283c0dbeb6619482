use crate::compile::{Cond, CompiledCircuit};
use crate::{Circuit, Gate, Register, RegisterLayout, Result, SimError, C64};
use qmh_markov::Distribution;
use std::sync::Arc;

/// Smallest branch weight accepted by postselection.
pub const MIN_BRANCH_PROB: f64 = 1e-14;

/// Operations shared by the dense and sparse amplitude stores.
pub trait QuantumState: Clone + Send + Sync {
    fn layout(&self) -> &Arc<RegisterLayout>;

    /// Applies lowered kernels in order.
    fn run_compiled(&mut self, circuit: &CompiledCircuit);

    fn norm_sqr(&self) -> f64;

    fn scale(&mut self, s: C64);

    /// `self += a * x`.
    fn axpy(&mut self, a: C64, x: &Self);

    /// `⟨self|other⟩`.
    fn inner(&self, other: &Self) -> C64;

    /// Squared norm of the component inside `cond`.
    fn weight(&self, cond: Cond) -> f64;

    /// Zeroes amplitudes outside `cond`.
    fn project(&mut self, cond: Cond);

    /// Squared-amplitude mass per value of `register`.
    fn register_weights(&self, register: &Register) -> Vec<f64>;

    fn amplitude(&self, index: u64) -> C64;

    /// Zero vector on the same layout.
    fn zeroed(&self) -> Self;

    fn num_qubits(&self) -> usize {
        self.layout().num_qubits()
    }

    /// Validates then applies a single gate.
    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits())?;
        let mut c = Circuit::new(self.num_qubits());
        c.push(gate.clone());
        self.run_compiled(&CompiledCircuit::new(&c));
        Ok(())
    }

    /// Validates then applies every gate of `circuit` in order.
    fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits != self.num_qubits() {
            return Err(SimError::Width { circuit: circuit.num_qubits, state: self.num_qubits() });
        }
        circuit.validate()?;
        self.run_compiled(&CompiledCircuit::new(circuit));
        Ok(())
    }

    /// Projects `qubits` onto the bits of `outcome` (bit k for `qubits[k]`)
    /// and renormalises. Returns the exact branch probability. The state is
    /// left untouched when the branch is empty.
    fn postselect(&mut self, qubits: &[usize], outcome: u64) -> Result<f64> {
        let mut cond = Cond::default();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits() {
                return Err(SimError::QubitRange { index: q, qubits: self.num_qubits() });
            }
            cond.mask |= 1 << q;
            cond.value |= (outcome >> k & 1) << q;
        }
        let total = self.norm_sqr();
        let kept = self.weight(cond);
        let prob = kept / total;
        if prob.is_nan() || prob < MIN_BRANCH_PROB {
            return Err(SimError::EmptyBranch(prob));
        }
        self.project(cond);
        self.scale(C64::new(1.0 / kept.sqrt(), 0.0));
        Ok(prob)
    }

    /// Marginal distribution of a named register.
    fn marginal_distribution(&self, register: &str) -> Result<Distribution> {
        let reg = self.layout().get(register)?.clone();
        let w = self.register_weights(&reg);
        let total: f64 = w.iter().sum();
        Ok(Distribution::new(w.into_iter().map(|v| v / total).collect()))
    }
}

/// Free-function form of [`QuantumState::apply_gate`].
pub fn apply_gate<S: QuantumState>(state: &mut S, gate: &Gate) -> Result<()> {
    state.apply_gate(gate)
}

/// Free-function form of [`QuantumState::run`].
pub fn run<S: QuantumState>(circuit: &Circuit, state: &mut S) -> Result<()> {
    state.run(circuit)
}

/// Free-function form of [`QuantumState::postselect`].
pub fn postselect<S: QuantumState>(state: &mut S, qubits: &[usize], outcome: u64) -> Result<f64> {
    state.postselect(qubits, outcome)
}

/// Free-function form of [`QuantumState::marginal_distribution`].
pub fn marginal_distribution<S: QuantumState>(state: &S, register: &str) -> Result<Distribution> {
    state.marginal_distribution(register)
}
