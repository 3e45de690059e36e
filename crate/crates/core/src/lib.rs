//! Mean-field theory of a pumped Bose-Einstein condensate coupled to a
//! single optical cavity mode.
//!
//! Above a critical pump strength the condensate self-organizes into a
//! lattice pattern that scatters light into the cavity. This crate computes,
//! over a cosine-mode expansion of the condensate wavefunction:
//!
//! - the self-consistent mean-field ground state and the transition point
//!   ([`meanfield`]),
//! - the quasiparticle excitation spectrum of the coupled photon-condensate
//!   fluctuations ([`fluctuations`]),
//! - ground-state covariances, incoherent populations and the matter-light
//!   entanglement of the Gaussian ground state ([`observables`]),
//! - parameter sweeps with CSV output behind a small config format
//!   ([`sweep`]).
//!
//! All energies are angular frequencies in units fixed by the recoil
//! frequency `ω_R`; see [`model::ModelParams`] for the parameter set.

pub mod error;
pub mod fluctuations;
pub mod linalg;
pub mod meanfield;
pub mod model;
pub mod observables;
pub mod sweep;

pub use error::Error;
pub use fluctuations::{
    build_s, coupling_vector, goldstone_phase_growth, omega_pm_closed_form,
    quasiparticle_spectrum, FluctuationResult,
};
pub use linalg::{eigh, EigenDecomposition, Matrix, SymmetricMatrix};
pub use meanfield::{
    detect_threshold, solve_mean_field, solve_mean_field_seeded, update_alpha,
    MeanFieldSolution, SolverOptions,
};
pub use model::{
    build_m, build_m_alpha, build_m_alpha_prime, effective_frequency, mean_field_energy,
    ModelParams,
};
pub use observables::{
    covariances, entanglement, incoherent_photons, populations_b, populations_c,
    GroundStateObservables,
};
pub use sweep::{
    execute_sweep, parse_config, refine_threshold, render_csv, RunConfig, SweepRecord,
    SweepSummary,
};
