//! Phase-zero spectral filtering and the end-to-end sampling pipeline.
//!
//! The pipeline prepares the seed `⊠|+⟩|edges⟩|0⟩`, filters it towards the
//! eigenphase-zero space of the (penalised) walk, decodes and reads the
//! marginal of register `x`. The filter runs as coherent phase estimation,
//! single-ancilla phase estimation, or the equivalent power sum
//! `2^{-m} Σ_{k<2^m} 𝒱^k`, whose postselected outputs coincide exactly.

mod error;
mod pipeline;
mod response;

pub use error::{FilterError, Result};
pub use pipeline::{
    exact_filter, pipeline_operator, power_sum_filter, run_oracle_sweep, run_pipeline, seed_krylov, target_distribution,
    FilterMode, FilterSpec, PipelineResult,
};
pub use response::{dirichlet_weight, required_precision, survival_probability};
pub use qmh_sim::C64;
