use crate::{Result, SimError};

/// Default limit on the number of simulated qubits (2²⁸ amplitudes ≈ 4 GiB).
pub const DEFAULT_SIM_CAP: usize = 28;

/// Contiguous block of qubits with a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    /// Global index of the register's least significant qubit.
    pub offset: usize,
    pub width: usize,
}

impl Register {
    /// Global index of bit `k` of this register.
    pub fn qubit(&self, k: usize) -> usize {
        debug_assert!(k < self.width);
        self.offset + k
    }

    /// All qubits, least significant first.
    pub fn qubits(&self) -> Vec<usize> {
        (self.offset..self.offset + self.width).collect()
    }

    /// Extracts this register's value from a basis index.
    pub fn value_of(&self, index: u64) -> u64 {
        (index >> self.offset) & ((1u64 << self.width) - 1)
    }

    /// Basis-index bits for `value` placed in this register.
    pub fn place(&self, value: u64) -> u64 {
        debug_assert!(self.width == 64 || value < (1u64 << self.width));
        value << self.offset
    }

    /// Mask covering this register in a basis index.
    pub fn mask(&self) -> u64 {
        ((1u64 << self.width) - 1) << self.offset
    }
}

/// Ordered set of named registers. Qubit order is register declaration order,
/// least significant bit first within each register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    cap: usize,
}

impl Default for RegisterLayout {
    fn default() -> Self {
        Self::new()
    }
}

impl RegisterLayout {
    /// Empty layout with the default simulation cap.
    pub fn new() -> Self {
        Self { registers: Vec::new(), cap: DEFAULT_SIM_CAP }
    }

    /// Same layout with another qubit cap.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Appends a register; zero-width registers are recorded but own no qubits.
    pub fn push(&mut self, name: &str, width: usize) -> Result<&Register> {
        if self.registers.iter().any(|r| r.name == name) {
            return Err(SimError::DuplicateRegister(name.to_string()));
        }
        let offset = self.num_qubits();
        self.registers.push(Register { name: name.to_string(), offset, width });
        Ok(self.registers.last().expect("just pushed"))
    }

    /// Builder form of [`push`](Self::push).
    pub fn with(mut self, name: &str, width: usize) -> Result<Self> {
        self.push(name, width)?;
        Ok(self)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn num_qubits(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    /// Errors when the layout is larger than its cap.
    pub fn check_cap(&self) -> Result<()> {
        let needed = self.num_qubits();
        if needed > self.cap {
            Err(SimError::CapExceeded { needed, cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn get(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| SimError::UnknownRegister(name.to_string()))
    }

    pub fn has(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name && r.width > 0)
    }

    /// Stable 64-bit FNV-1a hash of register names and widths.
    pub fn hash64(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        };
        for r in &self.registers {
            r.name.bytes().for_each(&mut eat);
            eat(0);
            (r.width as u32).to_le_bytes().into_iter().for_each(&mut eat);
        }
        h
    }
}
