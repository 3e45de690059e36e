//! Quadratic fluctuations on top of a converged mean field.
//!
//! In the eigenbasis of M(α) the condensate mode carries no excitation
//! energy (the broken phase symmetry makes it a zero mode) and its
//! dynamics is dropped. The cavity quadrature couples to the remaining
//! matter modes through an arrowhead kernel matrix whose eigenvalues
//! are the squared quasiparticle frequencies.

use crate::error::Error;
use crate::linalg::{eigh, Matrix, SymmetricMatrix};
use crate::meanfield::MeanFieldSolution;
use crate::model::{build_m_alpha_prime, ModelParams};

/// Smallest admissible excitation gap λ_k − μ, in units of ω_R.
const GAP_FLOOR: f64 = 1e-9;

/// Width of the clamping window for squared frequencies, in units of
/// ω_R². Eigenvalues inside [-MARGINAL_WINDOW·ω_R², 0] are rounding
/// noise around a closing mode and are clamped to zero; anything more
/// negative is a genuine instability.
const MARGINAL_WINDOW: f64 = 1e-9;

/// Fluctuation analysis attached to one mean-field point.
#[derive(Clone, Debug)]
pub struct FluctuationResult {
    /// Couplings g_j between the cavity quadrature and the matter
    /// modes; g_0 belongs to the condensate mode and stays out of the
    /// kernel, but drives the phase diffusion.
    pub g: Vec<f64>,
    /// Arrowhead kernel of the position quadratures.
    pub s: SymmetricMatrix,
    /// Quasiparticle frequencies, sorted ascending.
    pub omegas: Vec<f64>,
    /// Orthogonal eigenbasis of the kernel; column j pairs with
    /// omegas[j].
    pub u: Matrix,
    /// Excitation gaps λ_k − μ for k = 1..=n_cutoff.
    pub gaps: Vec<f64>,
    /// True when a squared frequency inside the clamping window was
    /// rounded up to zero (the spectrum touches the instability edge).
    pub marginal: bool,
}

impl FluctuationResult {
    /// Runs the full pipeline: couplings, kernel, diagonalization.
    pub fn compute(params: &ModelParams, sol: &MeanFieldSolution) -> Result<Self, Error> {
        let g = coupling_vector(params, sol);
        let s = build_s(params, sol, &g)?;
        let (omegas, u, marginal) = quasiparticle_spectrum(&s, params.omega_r)?;
        let gaps = (1..params.dim()).map(|k| sol.lambdas[k] - sol.mu).collect();
        Ok(Self { g, s, omegas, u, gaps, marginal })
    }
}

/// Couplings between the cavity quadrature and the matter modes,
/// g = Oᵀ·M′(α)·γ, where O is the eigenbasis of M(α).
pub fn coupling_vector(params: &ModelParams, sol: &MeanFieldSolution) -> Vec<f64> {
    let dim = params.dim();
    let w = build_m_alpha_prime(params, sol.alpha).mul_vec(&sol.gamma);
    let mut g = vec![0.0; dim];
    for (k, gk) in g.iter_mut().enumerate() {
        for n in 0..dim {
            *gk += sol.eigenbasis[(n, k)] * w[n];
        }
    }
    g
}

/// Assembles the kernel matrix of the position quadratures: Ω² in the
/// cavity corner, squared gaps on the matter diagonal, and the scaled
/// couplings g_k·√(Ω(λ_k − μ)) along row and column 0. The condensate
/// mode is excluded.
pub fn build_s(
    params: &ModelParams,
    sol: &MeanFieldSolution,
    g: &[f64],
) -> Result<SymmetricMatrix, Error> {
    let dim = params.dim();
    assert_eq!(g.len(), dim, "coupling vector must match the mode count");
    if sol.omega <= 0.0 {
        return Err(Error::UnstableCavity { omega: sol.omega });
    }
    let tol = GAP_FLOOR * params.omega_r;
    let mut s = SymmetricMatrix::zeros(dim);
    s.set_sym(0, 0, sol.omega * sol.omega);
    for k in 1..dim {
        let gap = sol.lambdas[k] - sol.mu;
        if gap <= tol {
            return Err(Error::DegenerateGap { mode: k, gap, tol });
        }
        s.set_sym(k, k, gap * gap);
        s.set_sym(0, k, g[k] * (sol.omega * gap).sqrt());
    }
    Ok(s)
}

/// Diagonalizes the kernel and takes square roots. Returns the
/// frequencies (ascending), the orthogonal transform, and a flag for
/// clamped marginal modes.
pub fn quasiparticle_spectrum(
    s: &SymmetricMatrix,
    omega_r: f64,
) -> Result<(Vec<f64>, Matrix, bool), Error> {
    let eig = eigh(s)?;
    let floor = -MARGINAL_WINDOW * omega_r * omega_r;
    let mut marginal = false;
    let mut omegas = Vec::with_capacity(eig.eigenvalues.len());
    for &w_sq in &eig.eigenvalues {
        if w_sq < floor {
            return Err(Error::DynamicalInstability { omega_sq: w_sq });
        }
        if w_sq <= 0.0 {
            marginal = true;
            omegas.push(0.0);
        } else {
            omegas.push(w_sq.sqrt());
        }
    }
    Ok((omegas, eig.eigenvectors, marginal))
}

/// Closed-form polariton frequencies (ω_minus, ω_plus) of the
/// homogeneous phase, valid up to the critical pump. ω_minus is
/// evaluated through the 2×2 block determinant, which stays accurate
/// as the mode softens and vanishes exactly at the critical point.
pub fn omega_pm_closed_form(params: &ModelParams) -> Result<(f64, f64), Error> {
    let y_crit = params.critical_pump()?;
    if params.y > y_crit {
        return Err(Error::InvalidParameter(format!(
            "pump strength {} exceeds the critical value {y_crit}; the homogeneous phase does not exist there",
            params.y
        )));
    }
    let dc_sq = params.delta_c * params.delta_c;
    let wr_sq = params.omega_r * params.omega_r;
    let ratio_sq = (params.y / y_crit) * (params.y / y_crit);
    let half_sum = 0.5 * (dc_sq + wr_sq);
    let half_diff = 0.5 * (dc_sq - wr_sq);
    let plus_sq = half_sum + (half_diff * half_diff + dc_sq * wr_sq * ratio_sq).sqrt();
    let minus_sq = dc_sq * wr_sq * (1.0 - ratio_sq).max(0.0) / plus_sq;
    Ok((minus_sq.sqrt(), plus_sq.sqrt()))
}

/// Growth of the condensate phase variance driven by the cavity field:
/// ⟨φ²(t)⟩ grows as `coefficient`·t², and `timescale` is the time over
/// which the phase spreads by order π. Below threshold g_0 = 0 and the
/// phase does not grow at all.
pub fn goldstone_phase_growth(
    sol: &MeanFieldSolution,
    g0: f64,
    xx00: f64,
    atom_number: f64,
) -> (f64, f64) {
    assert!(atom_number > 0.0, "atom number must be positive");
    if g0 == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let coefficient = g0 * g0 / (4.0 * atom_number) * 2.0 * sol.omega * xx00;
    let timescale = std::f64::consts::PI * atom_number.sqrt() / g0.abs();
    (coefficient, timescale)
}
