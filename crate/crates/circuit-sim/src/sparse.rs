use crate::compile::{mux_lookup, Cond, CompiledCircuit, Mat2, Op, Shape};
use crate::{QuantumState, Register, RegisterLayout, Result, Statevector, C64};
use rustc_hash::FxHashMap;
use std::sync::Arc;

/// Amplitudes with squared magnitude below this are dropped after mixing gates.
pub const PRUNE_NORM_SQR: f64 = 1e-30;

/// Hash-map amplitude store holding only nonzero entries.
///
/// Suited to states whose support is tiny compared to `2^n`, such as walk
/// states confined to a few thousand basis vectors of a 27-qubit layout.
/// Iteration order is deterministic for a given gate history.
#[derive(Clone, Debug)]
pub struct SparseState {
    layout: Arc<RegisterLayout>,
    amps: FxHashMap<u64, C64>,
}

type Map = FxHashMap<u64, C64>;

impl SparseState {
    /// `|index⟩` on `layout`. The qubit cap is not enforced since no
    /// `2^n` buffer is allocated; index width must fit 64 bits.
    pub fn basis(layout: Arc<RegisterLayout>, index: u64) -> Self {
        let mut amps = Map::default();
        amps.insert(index, C64::new(1.0, 0.0));
        Self { layout, amps }
    }

    /// Empty (zero) vector.
    pub fn zero(layout: Arc<RegisterLayout>) -> Self {
        Self { layout, amps: Map::default() }
    }

    /// Builds from `(index, amplitude)` pairs, summing duplicates.
    pub fn from_entries(layout: Arc<RegisterLayout>, entries: impl IntoIterator<Item = (u64, C64)>) -> Self {
        let mut amps = Map::default();
        for (i, a) in entries {
            *amps.entry(i).or_default() += a;
        }
        amps.retain(|_, a| a.norm_sqr() > 0.0);
        Self { layout, amps }
    }

    pub fn from_dense(state: &Statevector) -> Self {
        Self::from_entries(
            state.layout().clone(),
            state.amplitudes().iter().enumerate().filter(|(_, a)| a.norm_sqr() > 0.0).map(|(i, a)| (i as u64, *a)),
        )
    }

    /// Dense copy; fails above the layout cap.
    pub fn to_dense(&self) -> Result<Statevector> {
        let mut sv = Statevector::new(self.layout.clone())?;
        let amps = sv.amplitudes_mut();
        amps[0] = C64::new(0.0, 0.0);
        for (&i, &a) in &self.amps {
            amps[i as usize] = a;
        }
        Ok(sv)
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    /// Entries sorted by basis index.
    pub fn entries(&self) -> Vec<(u64, C64)> {
        let mut v: Vec<(u64, C64)> = self.amps.iter().map(|(&i, &a)| (i, a)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    fn single(&mut self, target: usize, m: &Mat2, shape: Shape, cond: Cond) {
        let tb = 1u64 << target;
        match shape {
            Shape::Diagonal => {
                for (&i, a) in self.amps.iter_mut() {
                    if cond.holds(i) {
                        *a *= if i & tb == 0 { m[0][0] } else { m[1][1] };
                    }
                }
            }
            Shape::Flip => {
                let mut out = Map::with_capacity_and_hasher(self.amps.len(), Default::default());
                for (&i, &a) in &self.amps {
                    let j = if cond.holds(i) { i ^ tb } else { i };
                    out.insert(j, a);
                }
                self.amps = out;
            }
            Shape::General => {
                let mut out = Map::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
                for (&i, &a) in &self.amps {
                    if cond.holds(i) {
                        mix(&mut out, i, a, tb, m);
                    } else {
                        *out.entry(i).or_default() += a;
                    }
                }
                out.retain(|_, a| a.norm_sqr() > PRUNE_NORM_SQR);
                self.amps = out;
            }
        }
    }

    fn mux(&mut self, target: usize, mask: u64, table: &[(u64, Mat2, Shape)]) {
        let tb = 1u64 << target;
        let slot = mux_lookup(table);
        let mut out = Map::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
        let mut mixed = false;
        for (&i, &a) in &self.amps {
            match slot.get(&(i & mask)) {
                Some(&k) => {
                    let (_, m, shape) = &table[k];
                    let bit = (i & tb != 0) as usize;
                    match shape {
                        Shape::Flip => *out.entry(i ^ tb).or_default() += a,
                        Shape::Diagonal => *out.entry(i).or_default() += m[bit][bit] * a,
                        Shape::General => {
                            mixed = true;
                            mix(&mut out, i, a, tb, m);
                        }
                    }
                }
                None => *out.entry(i).or_default() += a,
            }
        }
        if mixed {
            out.retain(|_, a| a.norm_sqr() > PRUNE_NORM_SQR);
        }
        self.amps = out;
    }

    fn exec(&mut self, ops: &[Op]) {
        for op in ops {
            match op {
                Op::Single { target, m, shape, cond } => self.single(*target, m, *shape, *cond),
                Op::Mux { target, mask, table } => self.mux(*target, *mask, table),
                Op::Swap { a, b, cond } => {
                    let (ab, bb) = (1u64 << a, 1u64 << b);
                    let mut out = Map::with_capacity_and_hasher(self.amps.len(), Default::default());
                    for (&i, &v) in &self.amps {
                        let differ = ((i >> a) ^ (i >> b)) & 1 == 1;
                        let j = if differ && cond.holds(i) { i ^ ab ^ bb } else { i };
                        out.insert(j, v);
                    }
                    self.amps = out;
                }
                Op::Scalar { phase, cond } => {
                    for (&i, v) in self.amps.iter_mut() {
                        if cond.holds(i) {
                            *v *= phase;
                        }
                    }
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

#[inline]
fn mix(out: &mut Map, i: u64, a: C64, tb: u64, m: &Mat2) {
    let bit = (i & tb != 0) as usize;
    let (i0, i1) = (i & !tb, i | tb);
    let c0 = m[0][bit] * a;
    let c1 = m[1][bit] * a;
    if c0.norm_sqr() > 0.0 {
        *out.entry(i0).or_default() += c0;
    }
    if c1.norm_sqr() > 0.0 {
        *out.entry(i1).or_default() += c1;
    }
}

impl QuantumState for SparseState {
    fn layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    fn run_compiled(&mut self, circuit: &CompiledCircuit) {
        assert_eq!(circuit.num_qubits, self.num_qubits(), "circuit width mismatch");
        self.exec(&circuit.ops);
    }

    fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|e| e.1.norm_sqr()).sum()
    }

    fn scale(&mut self, s: C64) {
        self.amps.values_mut().for_each(|a| *a *= s);
    }

    fn axpy(&mut self, a: C64, x: &Self) {
        for (&i, &v) in &x.amps {
            *self.amps.entry(i).or_default() += a * v;
        }
        self.amps.retain(|_, v| v.norm_sqr() > 0.0);
    }

    fn inner(&self, other: &Self) -> C64 {
        self.entries()
            .iter()
            .filter_map(|(i, a)| other.amps.get(i).map(|b| a.conj() * b))
            .sum()
    }

    fn weight(&self, cond: Cond) -> f64 {
        self.entries().iter().filter(|e| cond.holds(e.0)).map(|e| e.1.norm_sqr()).sum()
    }

    fn project(&mut self, cond: Cond) {
        self.amps.retain(|&i, _| cond.holds(i));
    }

    fn register_weights(&self, register: &Register) -> Vec<f64> {
        let mut w = vec![0.0; 1 << register.width];
        for (i, a) in self.entries() {
            w[register.value_of(i) as usize] += a.norm_sqr();
        }
        w
    }

    fn amplitude(&self, index: u64) -> C64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    fn zeroed(&self) -> Self {
        Self::zero(self.layout.clone())
    }
}
