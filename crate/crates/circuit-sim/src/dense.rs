use crate::compile::{Cond, CompiledCircuit, Mat2, Op, Shape};
use crate::par::{for_each_index, ordered_sum, SharedMut};
use crate::{QuantumState, Register, RegisterLayout, Result, SimError, C64};
use std::sync::Arc;

/// Dense amplitude vector of length `2^n` over a register layout.
#[derive(Clone, Debug)]
pub struct Statevector {
    layout: Arc<RegisterLayout>,
    amps: Vec<C64>,
}

impl Statevector {
    /// `|0…0⟩` on `layout`; fails when the layout exceeds its qubit cap.
    pub fn new(layout: Arc<RegisterLayout>) -> Result<Self> {
        Self::basis(layout, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(layout: Arc<RegisterLayout>, index: u64) -> Result<Self> {
        layout.check_cap()?;
        let n = layout.num_qubits();
        if index >> n != 0 {
            return Err(SimError::QubitRange { index: index as usize, qubits: n });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index as usize] = C64::new(1.0, 0.0);
        Ok(Self { layout, amps })
    }

    /// Wraps explicit amplitudes (not renormalised).
    pub fn from_amplitudes(layout: Arc<RegisterLayout>, amps: Vec<C64>) -> Result<Self> {
        layout.check_cap()?;
        let expected = 1usize << layout.num_qubits();
        if amps.len() != expected {
            return Err(SimError::Width { circuit: amps.len(), state: expected });
        }
        Ok(Self { layout, amps })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    fn single(&mut self, target: usize, m: &Mat2, shape: Shape, cond: Cond) {
        let n = self.num_qubits();
        let tb = 1u64 << target;
        let p = SharedMut(self.amps.as_mut_ptr());
        let one = C64::new(1.0, 0.0);
        match shape {
            Shape::Flip => for_each_index(n, cond.mask | tb, cond.value, |i| unsafe {
                std::ptr::swap(p.at(i), p.at(i | tb));
            }),
            Shape::Diagonal => {
                let (d0, d1) = (m[0][0], m[1][1]);
                if d0 != one {
                    for_each_index(n, cond.mask | tb, cond.value, |i| unsafe { *p.at(i) *= d0 });
                }
                if d1 != one {
                    for_each_index(n, cond.mask | tb, cond.value | tb, |i| unsafe { *p.at(i) *= d1 });
                }
            }
            Shape::General => {
                let m = *m;
                for_each_index(n, cond.mask | tb, cond.value, |i| unsafe {
                    let a0 = *p.at(i);
                    let a1 = *p.at(i | tb);
                    *p.at(i) = m[0][0] * a0 + m[0][1] * a1;
                    *p.at(i | tb) = m[1][0] * a0 + m[1][1] * a1;
                });
            }
        }
    }

    fn exec(&mut self, ops: &[Op]) {
        let n = self.num_qubits();
        for op in ops {
            match op {
                Op::Single { target, m, shape, cond } => self.single(*target, m, *shape, *cond),
                Op::Mux { target, mask, table } => {
                    for (value, m, shape) in table {
                        self.single(*target, m, *shape, Cond { mask: *mask, value: *value });
                    }
                }
                Op::Swap { a, b, cond } => {
                    let (ab, bb) = (1u64 << a, 1u64 << b);
                    let p = SharedMut(self.amps.as_mut_ptr());
                    for_each_index(n, cond.mask | ab | bb, cond.value | ab, |i| unsafe {
                        std::ptr::swap(p.at(i), p.at(i ^ ab ^ bb));
                    });
                }
                Op::Scalar { phase, cond } => {
                    let p = SharedMut(self.amps.as_mut_ptr());
                    let ph = *phase;
                    for_each_index(n, cond.mask, cond.value, |i| unsafe { *p.at(i) *= ph });
                }
                Op::Repeat { body, times } => {
                    for _ in 0..*times {
                        self.exec(body);
                    }
                }
            }
        }
    }
}

impl QuantumState for Statevector {
    fn layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    fn run_compiled(&mut self, circuit: &CompiledCircuit) {
        assert_eq!(circuit.num_qubits, self.num_qubits(), "circuit width mismatch");
        self.exec(&circuit.ops);
    }

    fn norm_sqr(&self) -> f64 {
        ordered_sum(self.amps.len(), |r| self.amps[r].iter().map(|a| a.norm_sqr()).sum())
    }

    fn scale(&mut self, s: C64) {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.amps.par_iter_mut().for_each(|a| *a *= s);
        }
        #[cfg(not(feature = "parallel"))]
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    fn axpy(&mut self, a: C64, x: &Self) {
        assert_eq!(self.amps.len(), x.amps.len());
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.amps.par_iter_mut().zip(x.amps.par_iter()).for_each(|(s, v)| *s += a * v);
        }
        #[cfg(not(feature = "parallel"))]
        self.amps.iter_mut().zip(&x.amps).for_each(|(s, v)| *s += a * v);
    }

    fn inner(&self, other: &Self) -> C64 {
        let re = ordered_sum(self.amps.len(), |r| {
            self.amps[r.clone()].iter().zip(&other.amps[r]).map(|(a, b)| (a.conj() * b).re).sum()
        });
        let im = ordered_sum(self.amps.len(), |r| {
            self.amps[r.clone()].iter().zip(&other.amps[r]).map(|(a, b)| (a.conj() * b).im).sum()
        });
        C64::new(re, im)
    }

    fn weight(&self, cond: Cond) -> f64 {
        ordered_sum(self.amps.len(), |r| {
            r.filter(|&i| cond.holds(i as u64)).map(|i| self.amps[i].norm_sqr()).sum()
        })
    }

    fn project(&mut self, cond: Cond) {
        let zero = C64::new(0.0, 0.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if !cond.holds(i as u64) {
                *a = zero;
            }
        }
    }

    fn register_weights(&self, register: &Register) -> Vec<f64> {
        let mut w = vec![0.0; 1 << register.width];
        for (i, a) in self.amps.iter().enumerate() {
            w[register.value_of(i as u64) as usize] += a.norm_sqr();
        }
        w
    }

    fn amplitude(&self, index: u64) -> C64 {
        self.amps[index as usize]
    }

    fn zeroed(&self) -> Self {
        Self { layout: self.layout.clone(), amps: vec![C64::new(0.0, 0.0); self.amps.len()] }
    }
}
