use crate::{BuildError, Result};
use qmh_markov::{InstanceKind, ProblemInstance};
use qmh_sim::{Register, RegisterLayout};
use std::sync::Arc;

/// Registers checked by the image projector `⊠⊠†` after uncomputing `⊠`.
pub const CHECK_REGISTERS: [&str; 5] = ["z", "xc", "a", "c", "d"];

/// Layout for `instance` with `phase_qubits` phase-register qubits.
///
/// Widths: `x, y, z, xc` hold one state each; `c` holds `log2` of the
/// neighbour count; `d` matches `c` on grids and is absent for Ising chains.
pub fn walk_layout(instance: &ProblemInstance, phase_qubits: usize) -> Result<Arc<RegisterLayout>> {
    let n = instance.state_bits();
    let degree = instance.neighbors[0].len();
    if !degree.is_power_of_two() || instance.neighbors.iter().any(|nb| nb.len() != degree) {
        return Err(BuildError::CoinWidth(degree));
    }
    let coin = degree.trailing_zeros() as usize;
    let scratch = match instance.kind {
        InstanceKind::DoubleWell { .. } => coin,
        InstanceKind::Ising { .. } => 0,
    };
    let layout = RegisterLayout::new()
        .with("x", n)?
        .with("y", n)?
        .with("z", n)?
        .with("xc", n)?
        .with("b", 1)?
        .with("a", 1)?
        .with("c", coin.max(1))?
        .with("d", scratch)?
        .with("flag", 1)?
        .with("p", phase_qubits)?;
    Ok(Arc::new(layout))
}

/// Resolved registers of a walk layout.
#[derive(Clone, Debug)]
pub struct WalkRegisters {
    pub x: Register,
    pub y: Register,
    pub z: Register,
    pub xc: Register,
    pub b: Register,
    pub a: Register,
    pub c: Register,
    pub d: Register,
    pub flag: Register,
    pub p: Register,
    pub num_qubits: usize,
}

impl WalkRegisters {
    pub fn new(layout: &RegisterLayout) -> Result<Self> {
        let get = |name: &'static str| layout.get(name).cloned().map_err(|_| BuildError::MissingRegister(name));
        Ok(Self {
            x: get("x")?,
            y: get("y")?,
            z: get("z")?,
            xc: get("xc")?,
            b: get("b")?,
            a: get("a")?,
            c: get("c")?,
            d: get("d")?,
            flag: get("flag")?,
            p: get("p")?,
            num_qubits: layout.num_qubits(),
        })
    }

    pub fn by_name(&self, name: &str) -> &Register {
        match name {
            "x" => &self.x,
            "y" => &self.y,
            "z" => &self.z,
            "xc" => &self.xc,
            "b" => &self.b,
            "a" => &self.a,
            "c" => &self.c,
            "d" => &self.d,
            "flag" => &self.flag,
            "p" => &self.p,
            other => panic!("unknown walk register {other}"),
        }
    }

    /// Qubits of the image check registers.
    pub fn check_qubits(&self) -> Vec<usize> {
        CHECK_REGISTERS.iter().flat_map(|r| self.by_name(r).qubits()).collect()
    }
}
