//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong between parameter validation and CSV output.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation was handed a value outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The Jacobi eigensolver exhausted its sweep budget (indicates a defect,
    /// not a hard numerical problem at these dimensions).
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    /// The damped mean-field iteration ran out of iterations.
    #[error("mean-field iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },

    /// The effective cavity frequency dropped to or below zero; the cavity
    /// potential is unbounded and the mean-field problem has no ground state.
    #[error("unstable cavity: effective frequency {omega:.6e} is not positive")]
    UnstableCavity { omega: f64 },

    /// Two lowest condensate levels collapsed onto each other; the Goldstone
    /// elimination that the fluctuation analysis relies on is ill-defined.
    #[error("degenerate gap: level {mode} sits {gap:.3e} above the condensate (tolerance {tol:.1e})")]
    DegenerateGap { mode: usize, gap: f64, tol: f64 },

    /// A squared quasiparticle frequency came out significantly negative.
    #[error("dynamical instability: squared frequency {omega_sq:.6e}")]
    DynamicalInstability { omega_sq: f64 },

    /// Threshold bisection was started on an interval that does not bracket
    /// the onset of the ordered phase.
    #[error("bracket failure: indicator is {lo} at y={y_lo} and {hi} at y={y_hi}")]
    BracketFailure { y_lo: f64, lo: bool, y_hi: f64, hi: bool },

    /// The run configuration could not be parsed or failed validation.
    #[error("config error: {0}")]
    Config(String),
}
