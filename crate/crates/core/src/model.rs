//! Reduced parameters and cosine-mode matrices of the cavity-condensate model.
//!
//! A transversally pumped condensate coupled to a single cavity mode reduces,
//! in the thermodynamic limit, to three couplings measured in units of the
//! recoil frequency `ω_R`: a shifted cavity detuning `δ_C`, a dispersive
//! shift `u`, and a pump strength `y`. The condensate wavefunction lives in
//! the even sector and is expanded over cosine modes `cos(n k x)`,
//! `n = 0..n_cutoff`; every operator in the problem is then a small dense
//! symmetric matrix over that basis:
//!
//! - `M0 = diag(0, 1, 4, 9, …)`, the kinetic energy in recoil units,
//! - `M1`, the pump-lattice coupling, tridiagonal with `M1[0][1] = 1` and
//!   `M1[n][n+1] = 1/√2` for `n ≥ 1`,
//! - `M2`, the cavity-lattice coupling, with `M2[0][2] = √2`, `M2[1][1] = 1`
//!   and `M2[n][n+2] = 1` for `n ≥ 1`.
//!
//! The mean-field condensate mode solves the self-consistent eigenvalue
//! problem built from `M(α) = ω_R M0 + y α M1 + u α² (M2 + 2 I)` together
//! with the photon amplitude equation; see [`crate::meanfield`].

use crate::error::Error;
use crate::linalg::SymmetricMatrix;

/// Reduced parameters of the pumped cavity-condensate system.
///
/// Validated at construction: `omega_r > 0` and finite, `y ≥ 0`,
/// `n_cutoff ≥ 2`. `delta_c` and `u` carry their own signs; the
/// self-organizing regime studied here has both negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Recoil frequency `ω_R`, the energy scale of the atomic motion.
    pub omega_r: f64,
    /// Cavity detuning including the mean dispersive shift of the whole cloud.
    pub delta_c: f64,
    /// Dispersive shift of the cavity per condensate in the ordered pattern.
    pub u: f64,
    /// Effective pump strength.
    pub y: f64,
    /// Highest cosine mode index kept in the expansion.
    pub n_cutoff: usize,
}

impl ModelParams {
    pub fn new(
        omega_r: f64,
        delta_c: f64,
        u: f64,
        y: f64,
        n_cutoff: usize,
    ) -> Result<Self, Error> {
        if !omega_r.is_finite() || omega_r <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "omega_R must be positive and finite, got {omega_r}"
            )));
        }
        if !delta_c.is_finite() || !u.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "couplings must be finite, got delta_C={delta_c}, u={u}"
            )));
        }
        if !y.is_finite() || y < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pump strength y must be nonnegative and finite, got {y}"
            )));
        }
        if n_cutoff < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_cutoff must be at least 2, got {n_cutoff}"
            )));
        }
        Ok(ModelParams { omega_r, delta_c, u, y, n_cutoff })
    }

    /// Reduces microscopic cavity parameters to the thermodynamic-limit set:
    /// `δ_C = Δ_C - N U0 / 2`, `u = N U0 / 4`, `y = √(2N) η_t`.
    pub fn from_microscopic(
        cavity_detuning: f64,
        light_shift: f64,
        pump_rabi: f64,
        atom_number: f64,
        omega_r: f64,
        n_cutoff: usize,
    ) -> Result<Self, Error> {
        if !atom_number.is_finite() || atom_number <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "atom number must be positive and finite, got {atom_number}"
            )));
        }
        let delta_c = cavity_detuning - atom_number * light_shift / 2.0;
        let u = atom_number * light_shift / 4.0;
        let y = (2.0 * atom_number).sqrt() * pump_rabi;
        ModelParams::new(omega_r, delta_c, u, y, n_cutoff)
    }

    /// Mode-space dimension `n_cutoff + 1`.
    pub fn dim(&self) -> usize {
        self.n_cutoff + 1
    }

    /// Same parameters at a different pump strength.
    pub fn with_y(&self, y: f64) -> Result<Self, Error> {
        ModelParams::new(self.omega_r, self.delta_c, self.u, y, self.n_cutoff)
    }

    /// Same parameters at a different dispersive shift.
    pub fn with_u(&self, u: f64) -> Result<Self, Error> {
        ModelParams::new(self.omega_r, self.delta_c, u, self.y, self.n_cutoff)
    }

    /// Critical pump strength `y_crit = √(-δ_C ω_R)` of the homogeneous
    /// phase. Independent of both `u` and the mode cutoff.
    pub fn critical_pump(&self) -> Result<f64, Error> {
        if self.delta_c >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "critical pump requires delta_C < 0, got {}",
                self.delta_c
            )));
        }
        Ok((-self.delta_c * self.omega_r).sqrt())
    }
}

/// Cosine-mode matrix of the given order (0 kinetic, 1 pump lattice,
/// 2 cavity lattice) over modes `0..=n_cutoff`.
pub fn build_m(order: usize, n_cutoff: usize) -> Result<SymmetricMatrix, Error> {
    if order > 2 {
        return Err(Error::InvalidParameter(format!(
            "mode matrix order must be 0, 1 or 2, got {order}"
        )));
    }
    if n_cutoff < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_cutoff must be at least 2, got {n_cutoff}"
        )));
    }
    let dim = n_cutoff + 1;
    let mut m = SymmetricMatrix::zeros(dim);
    match order {
        0 => {
            for n in 0..dim {
                m.set_sym(n, n, (n * n) as f64);
            }
        }
        1 => {
            // the homogeneous mode couples with weight 1, all higher
            // neighbors with 1/√2, from the cosine product expansion
            m.set_sym(0, 1, 1.0);
            for n in 1..dim - 1 {
                m.set_sym(n, n + 1, 0.5_f64.sqrt());
            }
        }
        _ => {
            m.set_sym(0, 2, 2.0_f64.sqrt());
            m.set_sym(1, 1, 1.0);
            for n in 1..dim.saturating_sub(2) {
                m.set_sym(n, n + 2, 1.0);
            }
        }
    }
    Ok(m)
}

/// The three mode matrices of one cutoff, built once and reused.
#[derive(Debug, Clone)]
pub struct ModeMatrices {
    pub m0: SymmetricMatrix,
    pub m1: SymmetricMatrix,
    pub m2: SymmetricMatrix,
}

impl ModeMatrices {
    pub fn new(n_cutoff: usize) -> Result<Self, Error> {
        Ok(ModeMatrices {
            m0: build_m(0, n_cutoff)?,
            m1: build_m(1, n_cutoff)?,
            m2: build_m(2, n_cutoff)?,
        })
    }
}

/// Effective cavity frequency `Ω(γ) = -δ_C + u γᵀ M2 γ` seen by the photon
/// mode when the condensate occupies `γ`. Positive `Ω` means the photon
/// potential is confining; `Ω ≤ 0` is the unstable-cavity regime.
pub fn effective_frequency(params: &ModelParams, gamma: &[f64]) -> f64 {
    debug_assert!(unit_norm_defect(gamma) < 1e-12, "gamma must be unit-normalized");
    let m2 = build_m(2, params.n_cutoff).expect("validated params");
    -params.delta_c + params.u * m2.quadratic_form(gamma)
}

/// Single-particle grand-canonical matrix
/// `M(α) = ω_R M0 + y α M1 + u α² (M2 + 2 I)`.
pub fn build_m_alpha(params: &ModelParams, alpha: f64) -> SymmetricMatrix {
    let mm = ModeMatrices::new(params.n_cutoff).expect("validated params");
    assemble_m_alpha(params, alpha, &mm)
}

/// Derivative `M'(α) = y M1 + 2 u α (M2 + 2 I)`.
pub fn build_m_alpha_prime(params: &ModelParams, alpha: f64) -> SymmetricMatrix {
    let mm = ModeMatrices::new(params.n_cutoff).expect("validated params");
    assemble_m_alpha_prime(params, alpha, &mm)
}

pub(crate) fn assemble_m_alpha(
    params: &ModelParams,
    alpha: f64,
    mm: &ModeMatrices,
) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(params.dim());
    m.scaled_add(params.omega_r, &mm.m0);
    m.scaled_add(params.y * alpha, &mm.m1);
    let ua2 = params.u * alpha * alpha;
    m.scaled_add(ua2, &mm.m2);
    m.shift_diagonal(2.0 * ua2);
    m
}

pub(crate) fn assemble_m_alpha_prime(
    params: &ModelParams,
    alpha: f64,
    mm: &ModeMatrices,
) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(params.dim());
    m.scaled_add(params.y, &mm.m1);
    let two_ua = 2.0 * params.u * alpha;
    m.scaled_add(two_ua, &mm.m2);
    m.shift_diagonal(2.0 * two_ua);
    m
}

/// Grand-canonical mean-field energy per particle,
/// `e = -δ_C α² + ω_R γᵀM0γ + y α γᵀM1γ + u α² γᵀM2γ - μ`.
pub fn mean_field_energy(
    params: &ModelParams,
    alpha: f64,
    gamma: &[f64],
    mu: f64,
) -> f64 {
    debug_assert!(unit_norm_defect(gamma) < 1e-12, "gamma must be unit-normalized");
    let mm = ModeMatrices::new(params.n_cutoff).expect("validated params");
    -params.delta_c * alpha * alpha
        + params.omega_r * mm.m0.quadratic_form(gamma)
        + params.y * alpha * mm.m1.quadratic_form(gamma)
        + params.u * alpha * alpha * mm.m2.quadratic_form(gamma)
        - mu
}

fn unit_norm_defect(gamma: &[f64]) -> f64 {
    (gamma.iter().map(|g| g * g).sum::<f64>() - 1.0).abs()
}
