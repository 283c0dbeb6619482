//! Lowering of gate lists into executable kernels.
//!
//! Runs of single-target gates that share a target and a control set are
//! merged into one multiplexed kernel keyed by the control pattern. Gates in
//! such a run act on disjoint control subspaces (or are multiplied together
//! when the pattern repeats), so merging preserves the operator exactly.

use crate::{Circuit, Control, Gate, GateKind, C64};
use rustc_hash::FxHashMap;
use std::f64::consts::FRAC_1_SQRT_2;

/// 2x2 matrix in row-major order: `[[m00, m01], [m10, m11]]`.
pub type Mat2 = [[C64; 2]; 2];

/// Control condition `index & mask == value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Cond {
    pub mask: u64,
    pub value: u64,
}

impl Cond {
    pub fn from_controls(controls: &[Control]) -> Self {
        let mut c = Cond::default();
        for ctl in controls {
            c.mask |= 1 << ctl.qubit;
            if ctl.on {
                c.value |= 1 << ctl.qubit;
            }
        }
        c
    }

    #[inline]
    pub fn holds(&self, index: u64) -> bool {
        index & self.mask == self.value
    }
}

/// Structure of a single-qubit matrix, used to pick a cheaper kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Bit flip.
    Flip,
    /// Diagonal `diag(d0, d1)`.
    Diagonal,
    General,
}

/// Executable kernel.
#[derive(Clone, Debug)]
pub enum Op {
    Single { target: usize, m: Mat2, shape: Shape, cond: Cond },
    /// Per-pattern matrices on `target`, keyed by `index & mask`.
    Mux { target: usize, mask: u64, table: Vec<(u64, Mat2, Shape)> },
    Swap { a: usize, b: usize, cond: Cond },
    Scalar { phase: C64, cond: Cond },
    Repeat { body: Vec<Op>, times: u64 },
}

/// A circuit lowered to kernels; reusable across many applications.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    pub num_qubits: usize,
    pub ops: Vec<Op>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Matrix of an uncontrolled single-qubit gate kind.
pub fn matrix_of(kind: &GateKind) -> Option<(usize, Mat2, Shape)> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    Some(match *kind {
        GateKind::X(t) => (t, [[z, o], [o, z]], Shape::Flip),
        GateKind::H(t) => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            (t, [[h, h], [h, -h]], Shape::General)
        }
        GateKind::Phase(t, th) => (t, [[o, z], [z, C64::from_polar(1.0, th)]], Shape::Diagonal),
        GateKind::Ry(t, th) => {
            let (s, co) = (0.5 * th).sin_cos();
            (t, [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]], Shape::General)
        }
        _ => return None,
    })
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn classify(m: &Mat2) -> Shape {
    let zero = |v: C64| v.norm_sqr() == 0.0;
    if zero(m[0][1]) && zero(m[1][0]) {
        Shape::Diagonal
    } else if zero(m[0][0]) && zero(m[1][1]) && m[0][1] == C64::new(1.0, 0.0) && m[1][0] == C64::new(1.0, 0.0) {
        Shape::Flip
    } else {
        Shape::General
    }
}

/// Controls with at least this many qubits are candidates for multiplexing.
const MUX_MIN_CONTROLS: u32 = 3;

impl CompiledCircuit {
    /// Lowers a circuit. The circuit should already be validated.
    pub fn new(circuit: &Circuit) -> Self {
        let mut ops = Vec::new();
        lower(&circuit.gates, &[], &mut ops);
        Self { num_qubits: circuit.num_qubits, ops: merge(ops) }
    }
}

fn lower(gates: &[Gate], extra: &[Control], out: &mut Vec<Op>) {
    for g in gates {
        let mut controls = g.controls.clone();
        controls.extend_from_slice(extra);
        let cond = Cond::from_controls(&controls);
        match &g.kind {
            GateKind::Swap(a, b) => out.push(Op::Swap { a: *a, b: *b, cond }),
            GateKind::GlobalPhase(th) => out.push(Op::Scalar { phase: C64::from_polar(1.0, *th), cond }),
            GateKind::Block { body, power } => {
                let mut inner = Vec::new();
                lower(&body.gates, &controls, &mut inner);
                out.push(Op::Repeat { body: merge(inner), times: *power });
            }
            kind => {
                let (target, m, shape) = matrix_of(kind).expect("single-qubit kind");
                out.push(Op::Single { target, m, shape, cond });
            }
        }
    }
}

fn merge(ops: Vec<Op>) -> Vec<Op> {
    let mut out: Vec<Op> = Vec::with_capacity(ops.len());
    for op in ops {
        if let Op::Single { target, m, cond, .. } = &op {
            if cond.mask.count_ones() >= MUX_MIN_CONTROLS {
                if let Some(prev) = out.last_mut() {
                    match prev {
                        Op::Mux { target: t, mask, table } if *t == *target && *mask == cond.mask => {
                            push_entry(table, cond.value, m);
                            continue;
                        }
                        Op::Single { target: t, m: pm, cond: pc, .. } if *t == *target && pc.mask == cond.mask => {
                            let mut table = Vec::new();
                            push_entry(&mut table, pc.value, pm);
                            push_entry(&mut table, cond.value, m);
                            *prev = Op::Mux { target: *target, mask: cond.mask, table };
                            continue;
                        }
                        _ => {}
                    }
                }
            }
        }
        out.push(op);
    }
    for op in out.iter_mut() {
        if let Op::Mux { table, .. } = op {
            table.sort_by_key(|e| e.0);
        }
    }
    out
}

fn push_entry(table: &mut Vec<(u64, Mat2, Shape)>, value: u64, m: &Mat2) {
    if let Some(e) = table.iter_mut().find(|e| e.0 == value) {
        e.1 = mul(m, &e.1);
        e.2 = classify(&e.1);
    } else {
        table.push((value, *m, classify(m)));
    }
}

/// Lookup from control pattern to table slot, for kernels that visit
/// amplitudes one by one.
pub fn mux_lookup(table: &[(u64, Mat2, Shape)]) -> FxHashMap<u64, usize> {
    table.iter().enumerate().map(|(k, e)| (e.0, k)).collect()
}
