//! Gate-level circuits for the qubitized Metropolis-Hastings walk.
//!
//! Register roles in a walk layout (see [`walk_layout`]):
//! - `x`, `y`: the edge register `F = (x, y)`;
//! - `z`, `xc`: the second edge register `G = (z, xc)`, tail `z`, head `xc`;
//! - `b`: branch ancilla selecting `□*` (`b = 0`) or `□` (`b = 1`);
//! - `a`: acceptance ancilla; `c`: proposal coin; `d`: direction scratch
//!   (grid only); `flag`: penalty membership flag; `p`: phase register.
//!
//! `□` encodes the dual kernel `𝒫 = 𝒯𝒜` and `□*` its time reversal
//! `𝒜𝒯`. Both leave the acceptance outcome in `a`, so the two encodings
//! share their garbage and `S □* |√ν⟩ = □ |√ν⟩`.

mod decode;
mod error;
mod layout;
mod oracles;
mod qpe;
mod walk;

pub use decode::{build_decoding, seed_circuit, seed_state, target_state};
pub use error::BuildError;
pub use layout::{walk_layout, WalkRegisters, CHECK_REGISTERS};
pub use oracles::{build_acceptance, build_ot_grid, build_ot_ising, proposal_oracle};
pub use qpe::{build_qpe, qft, run_semiclassical_qpe, SemiclassicalOutcome};
pub use walk::{box_circuit, box_star_circuit, boxtimes_circuit, build_penalty, build_walk, build_penalised_walk, zero_reflection};

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, BuildError>;
