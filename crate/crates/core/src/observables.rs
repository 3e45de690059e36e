//! Expectation values in the Gaussian ground state of the fluctuations.
//!
//! The quasiparticle vacuum, rotated back to the photon and matter
//! quadratures, is a correlated Gaussian state. Its covariance matrix
//! yields the incoherent photon number, the depletion of the
//! condensate into excited modes, and the entanglement between the
//! cavity field and the matter as closed-form functions of a single
//! uncertainty parameter χ.

use crate::error::Error;
use crate::fluctuations::FluctuationResult;
use crate::linalg::SymmetricMatrix;
use crate::meanfield::MeanFieldSolution;

/// Scalar and matrix observables of one ground state.
#[derive(Clone, Debug)]
pub struct GroundStateObservables {
    /// Position covariances ⟨x_k x_l⟩; index 0 is the photon quadrature.
    pub xx: SymmetricMatrix,
    /// Momentum covariances ⟨p_k p_l⟩.
    pub pp: SymmetricMatrix,
    /// Incoherent photons carried by the fluctuations.
    pub n_photon: f64,
    /// Populations of the matter modes b_k, k = 1..=n_cutoff.
    pub n_b: Vec<f64>,
    /// Populations of the cosine modes c_n, n = 0..=n_cutoff.
    pub n_c: Vec<f64>,
    /// Total number of atoms outside the condensate.
    pub n_out: f64,
    /// Photon-mode uncertainty product 2√(⟨x₀²⟩⟨p₀²⟩) ≥ 1.
    pub chi: f64,
    /// Entanglement entropy of the cavity subsystem, in nats.
    pub s_vn: f64,
    /// Linear entropy of the cavity subsystem, in [0, 1).
    pub s_lin: f64,
}

impl GroundStateObservables {
    /// Evaluates every observable at one converged, stable point.
    pub fn compute(
        sol: &MeanFieldSolution,
        fluct: &FluctuationResult,
    ) -> Result<Self, Error> {
        let (xx, pp) = covariances(fluct)?;
        let n_photon = incoherent_photons(fluct, sol.omega)?;
        let n_b = populations_b(fluct)?;
        let n_c = populations_c(sol, fluct)?;
        let n_out = n_b.iter().sum();
        let (chi, s_vn, s_lin) = entanglement(&xx, &pp);
        Ok(Self { xx, pp, n_photon, n_b, n_c, n_out, chi, s_vn, s_lin })
    }
}

/// A clamped zero frequency makes the position variance diverge; every
/// observable below requires a strictly positive spectrum.
fn ensure_stable(fluct: &FluctuationResult) -> Result<(), Error> {
    for &w in &fluct.omegas {
        if w <= 0.0 {
            return Err(Error::DynamicalInstability { omega_sq: w * w });
        }
    }
    Ok(())
}

/// Covariance matrices of the position and momentum quadratures,
/// xx[k][l] = ½ Σ_j U[k][j] U[l][j] / ω_j and its ω_j-weighted partner.
/// Symmetrized cross terms ⟨x_k p_l⟩ vanish identically and are not
/// represented.
pub fn covariances(
    fluct: &FluctuationResult,
) -> Result<(SymmetricMatrix, SymmetricMatrix), Error> {
    ensure_stable(fluct)?;
    let dim = fluct.omegas.len();
    let mut xx = SymmetricMatrix::zeros(dim);
    let mut pp = SymmetricMatrix::zeros(dim);
    for k in 0..dim {
        for l in k..dim {
            let mut x = 0.0;
            let mut p = 0.0;
            for j in 0..dim {
                let w = fluct.u[(k, j)] * fluct.u[(l, j)];
                x += w / fluct.omegas[j];
                p += w * fluct.omegas[j];
            }
            xx.set_sym(k, l, 0.5 * x);
            pp.set_sym(k, l, 0.5 * p);
        }
    }
    Ok((xx, pp))
}

/// Incoherent photon number ⟨â†â⟩ = ¼ Σ_j U[0][j]² (ω_j/Ω + Ω/ω_j − 2).
pub fn incoherent_photons(fluct: &FluctuationResult, omega: f64) -> Result<f64, Error> {
    ensure_stable(fluct)?;
    let mut sum = 0.0;
    for (j, &w) in fluct.omegas.iter().enumerate() {
        let weight = fluct.u[(0, j)] * fluct.u[(0, j)];
        sum += weight * (w / omega + omega / w - 2.0);
    }
    Ok(0.25 * sum)
}

/// Populations of the matter modes above the condensate,
/// ⟨b_k†b_k⟩ = ¼ Σ_j U[k][j]² (ω_j/(λ_k−μ) + (λ_k−μ)/ω_j − 2).
pub fn populations_b(fluct: &FluctuationResult) -> Result<Vec<f64>, Error> {
    ensure_stable(fluct)?;
    let dim = fluct.omegas.len();
    let mut n_b = Vec::with_capacity(dim - 1);
    for k in 1..dim {
        let gap = fluct.gaps[k - 1];
        let mut sum = 0.0;
        for (j, &w) in fluct.omegas.iter().enumerate() {
            let weight = fluct.u[(k, j)] * fluct.u[(k, j)];
            sum += weight * (w / gap + gap / w - 2.0);
        }
        n_b.push(0.25 * sum);
    }
    Ok(n_b)
}

/// Populations of the cosine modes, obtained by rotating the matter
/// modes back through the eigenbasis of M(α). Each quasiparticle
/// contributes the square of a rotated amplitude, so every entry is
/// nonnegative and the total matches the b-mode sum.
pub fn populations_c(
    sol: &MeanFieldSolution,
    fluct: &FluctuationResult,
) -> Result<Vec<f64>, Error> {
    ensure_stable(fluct)?;
    let dim = fluct.omegas.len();
    let mut n_c = vec![0.0; dim];
    let mut t = vec![0.0; dim];
    for (j, &w) in fluct.omegas.iter().enumerate() {
        for k in 1..dim {
            let r = (fluct.gaps[k - 1] / w).sqrt();
            t[k] = fluct.u[(k, j)] * (r - 1.0 / r);
        }
        for (n, entry) in n_c.iter_mut().enumerate() {
            let mut amplitude = 0.0;
            for k in 1..dim {
                amplitude += sol.eigenbasis[(n, k)] * t[k];
            }
            *entry += 0.25 * amplitude * amplitude;
        }
    }
    Ok(n_c)
}

/// Uncertainty parameter of the photon mode and the two entanglement
/// entropies it determines. χ = 1 marks a pure reduced state; the von
/// Neumann entropy is continued by its limit 0 there.
pub fn entanglement(xx: &SymmetricMatrix, pp: &SymmetricMatrix) -> (f64, f64, f64) {
    let chi = 2.0 * (xx[(0, 0)] * pp[(0, 0)]).sqrt();
    let m = 0.5 * (chi - 1.0);
    let s_vn = if m <= 0.0 {
        0.0
    } else {
        let p = 0.5 * (chi + 1.0);
        p * p.ln() - m * m.ln()
    };
    let s_lin = (1.0 - 1.0 / chi).max(0.0);
    (chi, s_vn, s_lin)
}
