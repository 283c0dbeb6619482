use crate::{Result, SimError};
use std::fmt::Write as _;
use std::sync::Arc;

/// Control on one qubit; `on = false` is an open (|0⟩) control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, on: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, on: false }
    }
}

/// Gate action before controls are added.
#[derive(Clone, Debug)]
pub enum GateKind {
    X(usize),
    H(usize),
    /// `diag(1, e^{iθ})`.
    Phase(usize, f64),
    /// `exp(-iθY/2)`.
    Ry(usize, f64),
    Swap(usize, usize),
    /// Scalar `e^{iθ}`; becomes a phase on the control subspace when controlled.
    GlobalPhase(f64),
    /// `body` applied `power` times, with this gate's controls added to every
    /// inner gate.
    Block { body: Arc<Circuit>, power: u64 },
}

/// A gate with an arbitrary set of closed or open controls.
#[derive(Clone, Debug)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind) -> Self {
        Self { kind, controls: Vec::new() }
    }

    pub fn with_controls(kind: GateKind, controls: Vec<Control>) -> Self {
        Self { kind, controls }
    }

    /// Target qubits of the gate (empty for global phases and blocks).
    pub fn targets(&self) -> Vec<usize> {
        match self.kind {
            GateKind::X(t) | GateKind::H(t) | GateKind::Phase(t, _) | GateKind::Ry(t, _) => vec![t],
            GateKind::Swap(a, b) => vec![a, b],
            GateKind::GlobalPhase(_) | GateKind::Block { .. } => Vec::new(),
        }
    }

    /// Inverse gate with the same controls.
    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Phase(t, th) => GateKind::Phase(*t, -th),
            GateKind::Ry(t, th) => GateKind::Ry(*t, -th),
            GateKind::GlobalPhase(th) => GateKind::GlobalPhase(-th),
            GateKind::Block { body, power } => GateKind::Block { body: Arc::new(body.inverse()), power: *power },
            k => k.clone(),
        };
        Gate::with_controls(kind, self.controls.clone())
    }

    /// Checks index ranges, disjointness and finiteness of angles.
    pub fn validate(&self, qubits: usize) -> Result<()> {
        let mut used: Vec<usize> = self.targets();
        used.extend(self.controls.iter().map(|c| c.qubit));
        for (k, &q) in used.iter().enumerate() {
            if q >= qubits {
                return Err(SimError::QubitRange { index: q, qubits });
            }
            if used[..k].contains(&q) {
                return Err(SimError::Overlap(q));
            }
        }
        match &self.kind {
            GateKind::Phase(_, th) | GateKind::Ry(_, th) | GateKind::GlobalPhase(th) if !th.is_finite() => {
                Err(SimError::Angle)
            }
            GateKind::Block { body, .. } => {
                if body.num_qubits != qubits {
                    return Err(SimError::Width { circuit: body.num_qubits, state: qubits });
                }
                for g in &body.gates {
                    let mut inner = g.clone();
                    inner.controls.extend(self.controls.iter().copied());
                    inner.validate(qubits)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Ordered gate list over a fixed number of qubits.
#[derive(Clone, Debug, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn add(&mut self, kind: GateKind, controls: &[Control]) -> &mut Self {
        self.push(Gate::with_controls(kind, controls.to_vec()))
    }

    pub fn x(&mut self, t: usize) -> &mut Self {
        self.add(GateKind::X(t), &[])
    }

    pub fn h(&mut self, t: usize) -> &mut Self {
        self.add(GateKind::H(t), &[])
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.add(GateKind::X(t), &[Control::on(c)])
    }

    pub fn mcx(&mut self, controls: &[Control], t: usize) -> &mut Self {
        self.add(GateKind::X(t), controls)
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.add(GateKind::Swap(a, b), &[])
    }

    pub fn global_phase(&mut self, theta: f64) -> &mut Self {
        self.add(GateKind::GlobalPhase(theta), &[])
    }

    /// Appends all gates of `other`.
    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    /// Appends `body^power` as a single block gate.
    pub fn block(&mut self, body: Arc<Circuit>, power: u64, controls: &[Control]) -> &mut Self {
        self.add(GateKind::Block { body, power }, controls)
    }

    /// Formal inverse: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Same circuit with `controls` added to every gate.
    pub fn controlled(&self, controls: &[Control]) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self
                .gates
                .iter()
                .map(|g| {
                    let mut g = g.clone();
                    g.controls.extend_from_slice(controls);
                    g
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.num_qubits))
    }

    /// Total gate count with blocks expanded.
    pub fn expanded_len(&self) -> u64 {
        self.gates
            .iter()
            .map(|g| match &g.kind {
                GateKind::Block { body, power } => body.expanded_len() * power,
                _ => 1,
            })
            .sum()
    }

    /// Plain-text gate list: `kind targets controls polarity angle` per line.
    ///
    /// Angles use 17 significant digits. Blocks are written as
    /// `BLOCK power controls polarity` ... `END`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_text(self, &mut out);
        out
    }
}

fn list(v: impl Iterator<Item = String>) -> String {
    let s: Vec<String> = v.collect();
    if s.is_empty() {
        "-".to_string()
    } else {
        s.join(",")
    }
}

fn write_text(c: &Circuit, out: &mut String) {
    for g in &c.gates {
        let ctrl = list(g.controls.iter().map(|c| c.qubit.to_string()));
        let pol = list(g.controls.iter().map(|c| if c.on { "1".into() } else { "0".into() }));
        let tg = list(g.targets().into_iter().map(|t| t.to_string()));
        let (name, angle) = match &g.kind {
            GateKind::X(_) => ("X", None),
            GateKind::H(_) => ("H", None),
            GateKind::Phase(_, th) => ("P", Some(*th)),
            GateKind::Ry(_, th) => ("RY", Some(*th)),
            GateKind::Swap(..) => ("SWAP", None),
            GateKind::GlobalPhase(th) => ("GPHASE", Some(*th)),
            GateKind::Block { body, power } => {
                let _ = writeln!(out, "BLOCK {power} {ctrl} {pol}");
                write_text(body, out);
                out.push_str("END\n");
                continue;
            }
        };
        let ang = angle.map_or("-".to_string(), |a| format!("{a:.16e}"));
        let _ = writeln!(out, "{name} {tg} {ctrl} {pol} {ang}");
    }
}
