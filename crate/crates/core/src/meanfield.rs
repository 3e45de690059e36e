//! Self-consistent mean-field ground state of the coupled condensate-cavity
//! system.
//!
//! The stationary state solves two coupled equations: the photon amplitude
//! balance `Ω(γ) α + (y/2) γᵀM1γ = 0` and the condensate eigenvalue problem
//! `M(α) γ = μ γ` with `μ` the lowest eigenvalue. The solver alternates the
//! two, damping the photon amplitude update with a linear mixing step; plain
//! alternation oscillates close to the cavity-instability regime.
//!
//! The trivial state `α = 0, γ = e0` solves the equations at every pump
//! strength, so runs that look for the self-organized branch must start from
//! a symmetry-broken seed. Sweeps warm-start each point from the previous
//! solution and re-break the symmetry whenever the amplitude has collapsed
//! below the seed scale.

use crate::error::Error;
use crate::linalg::{eigh, norm2, Matrix};
use crate::model::{assemble_m_alpha, build_m, effective_frequency, ModeMatrices, ModelParams};

/// Iteration controls for [`solve_mean_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Convergence threshold on the combined residual in units of `ω_R`.
    pub tol: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Mixing weight of the fresh amplitude update, in `(0, 1]`.
    pub damping: f64,
    /// Magnitude of the symmetry-breaking seed. A positive value selects the
    /// sector with `γ1 ≥ 0` (photon amplitude `α ≤ 0` for red detuning);
    /// a negative value lands in the parity-mirrored sector.
    pub seed_alpha: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 10_000, damping: 0.5, seed_alpha: 1e-3 }
    }
}

impl SolverOptions {
    pub(crate) fn validate(&self) -> Result<(), Error> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter < 4 {
            return Err(Error::InvalidParameter(format!(
                "max_iter must be at least 4, got {}",
                self.max_iter
            )));
        }
        if !self.damping.is_finite() || self.damping <= 0.0 || self.damping > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if !self.seed_alpha.is_finite() {
            return Err(Error::InvalidParameter("seed_alpha must be finite".into()));
        }
        Ok(())
    }
}

/// Converged mean-field state.
#[derive(Debug, Clone)]
pub struct MeanFieldSolution {
    /// Photon amplitude per square root of atom number.
    pub alpha: f64,
    /// Condensate mode over the cosine basis, unit norm, `γ0 > 0`.
    pub gamma: Vec<f64>,
    /// Chemical potential, the lowest eigenvalue of `M(α)`.
    pub mu: f64,
    /// All eigenvalues of `M(α)`, ascending; `lambdas[0] == mu`.
    pub lambdas: Vec<f64>,
    /// Orthogonal eigenbasis of `M(α)`; column 0 equals `gamma`.
    pub eigenbasis: Matrix,
    /// Effective cavity frequency `Ω(γ)` at the solution.
    pub omega: f64,
    /// Iterations consumed.
    pub iterations: usize,
    /// Final combined residual in units of `ω_R`.
    pub residual: f64,
}

/// `|Ω| / ω_R` below this is treated as a collapsing cavity potential.
const OMEGA_FLOOR: f64 = 1e-9;
/// Relative gap under which the condensate level is flagged degenerate.
const DEGENERATE_GAP: f64 = 1e-8;
/// `|α|` above this marks the ordered phase in threshold detection.
const ORDER_INDICATOR: f64 = 1e-6;
/// Bisection stops once the bracket is narrower than this.
const BISECT_WIDTH: f64 = 1e-6;

/// One exact photon-amplitude update `α = -(y/2) γᵀM1γ / Ω(γ)` at fixed
/// condensate mode.
pub fn update_alpha(params: &ModelParams, gamma: &[f64]) -> Result<f64, Error> {
    let omega = effective_frequency(params, gamma);
    if omega.abs() < OMEGA_FLOOR * params.omega_r {
        return Err(Error::UnstableCavity { omega });
    }
    let m1 = build_m(1, params.n_cutoff)?;
    Ok(-0.5 * params.y * m1.quadratic_form(gamma) / omega)
}

pub(crate) enum IterationOutcome {
    Converged(MeanFieldSolution),
    /// Budget exhausted. Close to the transition the linear convergence rate
    /// approaches 1 and the iteration stalls, but the drift direction of the
    /// amplitude magnitude still identifies the attracting branch: growth
    /// away from the seed means the ordered state, decay means the trivial
    /// one.
    Exhausted { iterations: usize, residual: f64, alpha_start: f64, alpha_end: f64 },
}

pub(crate) fn iterate(
    params: &ModelParams,
    opts: &SolverOptions,
    alpha0: f64,
) -> Result<IterationOutcome, Error> {
    opts.validate()?;
    let mm = ModeMatrices::new(params.n_cutoff)?;
    let dim = params.dim();
    let mut alpha = alpha0;
    let mut last_residual = f64::INFINITY;

    for iter in 1..=opts.max_iter {
        let m_alpha = assemble_m_alpha(params, alpha, &mm);
        let eig = eigh(&m_alpha)?;
        let mu = eig.eigenvalues[0];
        let mut basis = eig.eigenvectors;
        if basis[(0, 0)] < 0.0 {
            for i in 0..dim {
                basis[(i, 0)] = -basis[(i, 0)];
            }
        }
        let gamma = basis.col(0);

        let omega = -params.delta_c + params.u * mm.m2.quadratic_form(&gamma);
        if omega < OMEGA_FLOOR * params.omega_r {
            return Err(Error::UnstableCavity { omega });
        }

        let q1 = mm.m1.quadratic_form(&gamma);
        let amp_residual = (omega * alpha + 0.5 * params.y * q1).abs();
        let mode_residual = {
            let av = m_alpha.mul_vec(&gamma);
            let defect: Vec<f64> =
                av.iter().zip(&gamma).map(|(a, g)| a - mu * g).collect();
            norm2(&defect)
        };
        let residual = amp_residual.max(mode_residual) / params.omega_r;
        last_residual = residual;

        if residual <= opts.tol {
            let gap = eig.eigenvalues[1] - mu;
            if gap < DEGENERATE_GAP * params.omega_r {
                return Err(Error::DegenerateGap {
                    mode: 1,
                    gap,
                    tol: DEGENERATE_GAP * params.omega_r,
                });
            }
            return Ok(IterationOutcome::Converged(MeanFieldSolution {
                alpha,
                gamma,
                mu,
                lambdas: eig.eigenvalues,
                eigenbasis: basis,
                omega,
                iterations: iter,
                residual,
            }));
        }

        let target = -0.5 * params.y * q1 / omega;
        alpha = (1.0 - opts.damping) * alpha + opts.damping * target;
    }

    Ok(IterationOutcome::Exhausted {
        iterations: opts.max_iter,
        residual: last_residual,
        alpha_start: alpha0,
        alpha_end: alpha,
    })
}

/// Solves the coupled mean-field equations from the default symmetry-broken
/// seed. Positive `seed_alpha` lands in the canonical sector `γ1 ≥ 0`.
pub fn solve_mean_field(
    params: &ModelParams,
    opts: &SolverOptions,
) -> Result<MeanFieldSolution, Error> {
    solve_mean_field_seeded(params, opts, -opts.seed_alpha)
}

/// Same iteration started from an explicit amplitude, used for continuation
/// along a parameter sweep.
pub fn solve_mean_field_seeded(
    params: &ModelParams,
    opts: &SolverOptions,
    alpha0: f64,
) -> Result<MeanFieldSolution, Error> {
    match iterate(params, opts, alpha0)? {
        IterationOutcome::Converged(sol) => Ok(sol),
        IterationOutcome::Exhausted { iterations, residual, .. } => {
            Err(Error::NoConvergence { iterations, residual })
        }
    }
}

/// Locates the onset of the self-organized phase by bisecting the indicator
/// `|α| > 1e-6` over `[y_lo, y_hi]` down to a bracket of width `1e-6`. Every
/// evaluation starts from the fresh symmetry-broken seed; points where the
/// damped iteration cannot settle within budget are classified by the drift
/// of the amplitude away from or back toward the seed.
pub fn detect_threshold(
    params: &ModelParams,
    y_lo: f64,
    y_hi: f64,
    opts: &SolverOptions,
) -> Result<f64, Error> {
    if !y_lo.is_finite() || !y_hi.is_finite() || y_lo < 0.0 || y_hi <= y_lo {
        return Err(Error::InvalidParameter(format!(
            "threshold bracket must satisfy 0 <= y_lo < y_hi, got [{y_lo}, {y_hi}]"
        )));
    }
    let indicator = |y: f64| -> Result<bool, Error> {
        let p = params.with_y(y)?;
        match iterate(&p, opts, -opts.seed_alpha)? {
            IterationOutcome::Converged(sol) => Ok(sol.alpha.abs() > ORDER_INDICATOR),
            IterationOutcome::Exhausted { alpha_start, alpha_end, .. } => {
                Ok(alpha_end.abs() > alpha_start.abs().max(ORDER_INDICATOR))
            }
        }
    };

    let lo_ordered = indicator(y_lo)?;
    let hi_ordered = indicator(y_hi)?;
    if lo_ordered || !hi_ordered {
        return Err(Error::BracketFailure {
            y_lo,
            lo: lo_ordered,
            y_hi,
            hi: hi_ordered,
        });
    }

    let (mut lo, mut hi) = (y_lo, y_hi);
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if indicator(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
