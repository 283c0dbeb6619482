//! Projected unitary encodings, qubitized walk operators and their spectra.
//!
//! Two families of operators live here:
//! - dense, discriminant-level objects: a synthetic symmetric encoding of
//!   `D`, its qubitized walk `(2□□† - I)U` and the hermitianization of a
//!   general encoding;
//! - circuit-backed walk objects on the pair space: `⊠`, the dual walk
//!   `𝒲 = (2⊠⊠† - I)(X ⊗ S)` and the penalised walk `𝒱`.
//!
//! Circuit-backed walks are analysed on `K = span(Im ⊠ ∪ (X ⊗ S) Im ⊠)`,
//! which both walks leave invariant. On `K^⊥` the walk acts as `-(X ⊗ S)`
//! and the penalised walk as `-e^{iφ}(X ⊗ S)`, so their full spectra follow
//! from one small dense eigensolve.

mod error;
mod isometry;
mod operator;
mod spectral;
mod subspace;
mod synthetic;
mod walk;

pub use error::WalkError;
pub use isometry::PartialIsometryHandle;
pub use operator::LinearOperatorHandle;
pub use spectral::{spectral_report, spectrum_summary, unitary_eigen, SpectralReport, UnitaryEigen, PHASE_TOLERANCE};
pub use subspace::{RestrictedOperator, DEPENDENCE_TOL};
pub use synthetic::{hermitianize, qubitized_walk, synthetic_spue_of_discriminant};
pub use walk::{boxtimes_from_circuits, dual_walk, penalise, restricted_walk, walk_spectral_report, WalkKind};

/// Complex amplitude type.
pub use qmh_sim::C64;

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, WalkError>;
