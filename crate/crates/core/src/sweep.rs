//! Parameter sweeps behind a small TOML config format.
//!
//! A sweep walks one coupling (the pump strength or the dispersive
//! shift) over a linear grid, warm-starting each mean-field solve from
//! the previous point so the scan follows one branch. Every grid point
//! becomes one CSV row; points that fail to converge are recorded and
//! skipped, while a dynamical instability ends the scan since no
//! ground state exists beyond it.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::Error;
use crate::fluctuations::{goldstone_phase_growth, FluctuationResult};
use crate::meanfield::{detect_threshold, solve_mean_field_seeded, SolverOptions};
use crate::model::ModelParams;
use crate::observables::GroundStateObservables;

/// Spectra with a lowest frequency under this many ω_R count as
/// near-critical: the point is kept but its state sums are dominated
/// by one diverging term.
const NEAR_CRITICAL_OMEGA: f64 = 1e-6;

/// Amplitudes above this count as ordered for reporting purposes.
const ORDERED_AMPLITUDE: f64 = 1e-6;

/// Which coupling the grid walks.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Y,
    U,
}

impl Axis {
    fn label(self) -> &'static str {
        match self {
            Axis::Y => "y",
            Axis::U => "u",
        }
    }
}

/// Grid description: `steps` evenly spaced values from `start` to
/// `stop` inclusive, in either direction.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// Solver overrides; absent keys fall back to the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub damping: Option<f64>,
    pub seed_alpha: Option<f64>,
}

impl SolverSection {
    fn resolved(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            tol: self.tol.unwrap_or(d.tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            damping: self.damping.unwrap_or(d.damping),
            seed_alpha: self.seed_alpha.unwrap_or(d.seed_alpha),
        }
    }

    /// Fills defaults and validates the resulting options.
    pub fn options(&self) -> Result<SolverOptions, Error> {
        let opts = self.resolved();
        opts.validate()?;
        Ok(opts)
    }
}

/// One parsed run configuration. The swept coupling must not also be
/// given a fixed value; the other coupling must.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "omega_R")]
    pub omega_r: f64,
    #[serde(rename = "delta_C")]
    pub delta_c: f64,
    pub u: Option<f64>,
    pub y: Option<f64>,
    pub n_cutoff: usize,
    /// Condensate atom number; enables the phase-growth report.
    #[serde(rename = "N_c")]
    pub atom_number: Option<f64>,
    /// Output path prefix; the CLI flag takes precedence.
    pub out: Option<String>,
    pub sweep: SweepSpec,
    #[serde(default)]
    pub solver: SolverSection,
}

impl RunConfig {
    fn validate(&self) -> Result<(), Error> {
        let s = &self.sweep;
        if s.steps < 2 {
            return Err(Error::Config("sweep.steps must be at least 2".into()));
        }
        if !s.start.is_finite() || !s.stop.is_finite() {
            return Err(Error::Config("sweep endpoints must be finite".into()));
        }
        match s.axis {
            Axis::Y => {
                if self.y.is_some() {
                    return Err(Error::Config(
                        "y is the swept coupling; drop the fixed y key".into(),
                    ));
                }
                if self.u.is_none() {
                    return Err(Error::Config("sweeping y requires the fixed coupling u".into()));
                }
                if s.start < 0.0 || s.stop < 0.0 {
                    return Err(Error::Config("pump strengths must be nonnegative".into()));
                }
            }
            Axis::U => {
                if self.u.is_some() {
                    return Err(Error::Config(
                        "u is the swept coupling; drop the fixed u key".into(),
                    ));
                }
                if self.y.is_none() {
                    return Err(Error::Config("sweeping u requires the fixed coupling y".into()));
                }
            }
        }
        if let Some(n) = self.atom_number {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::Config("N_c must be a positive number".into()));
            }
        }
        Ok(())
    }

    /// Model parameters at the first grid point.
    pub fn base_params(&self) -> Result<ModelParams, Error> {
        let first = grid(&self.sweep)[0];
        let (u, y) = match self.sweep.axis {
            Axis::Y => (self.u.expect("validated"), first),
            Axis::U => (first, self.y.expect("validated")),
        };
        ModelParams::new(self.omega_r, self.delta_c, u, y, self.n_cutoff)
    }
}

/// Parses and validates a config document. Unknown keys are rejected
/// with the offending name in the message.
pub fn parse_config(text: &str) -> Result<RunConfig, Error> {
    let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// The grid values, endpoints exact.
pub fn grid(spec: &SweepSpec) -> Vec<f64> {
    let n = spec.steps;
    let span = spec.stop - spec.start;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                spec.stop
            } else {
                spec.start + span * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Per-point outcome recorded in the dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    NearCritical,
    Unstable,
    NoConverge,
}

impl PointStatus {
    pub fn label(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::NearCritical => "near-critical",
            PointStatus::Unstable => "unstable",
            PointStatus::NoConverge => "no-converge",
        }
    }
}

/// One CSV row. Quantities that could not be computed hold NaN.
#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub swept: f64,
    pub alpha_abs: f64,
    pub mu: f64,
    pub omega: f64,
    pub n_photon: f64,
    pub n_out: f64,
    pub chi: f64,
    pub s_vn: f64,
    pub s_lin: f64,
    pub status: PointStatus,
    pub gamma: Vec<f64>,
    pub omegas: Vec<f64>,
    pub n_c: Vec<f64>,
}

impl SweepRecord {
    fn unavailable(swept: f64, dim: usize, status: PointStatus) -> Self {
        Self {
            swept,
            alpha_abs: f64::NAN,
            mu: f64::NAN,
            omega: f64::NAN,
            n_photon: f64::NAN,
            n_out: f64::NAN,
            chi: f64::NAN,
            s_vn: f64::NAN,
            s_lin: f64::NAN,
            status,
            gamma: vec![f64::NAN; dim],
            omegas: vec![f64::NAN; dim],
            n_c: vec![f64::NAN; dim],
        }
    }
}

/// Phase-variance growth at the last ordered stable point.
#[derive(Clone, Copy, Debug)]
pub struct GoldstoneReport {
    pub swept: f64,
    pub coefficient: f64,
    pub timescale: f64,
}

/// What happened across the whole scan.
#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub requested: usize,
    pub completed: usize,
    pub no_converge: usize,
    /// Error text when the scan ended early in an unstable region.
    pub stopped: Option<String>,
    /// Bisection refinement of the transition point, for pump sweeps
    /// whose grid brackets it.
    pub threshold: Option<f64>,
    pub goldstone: Option<GoldstoneReport>,
}

/// Refines the transition point over the sweep range of a pump scan.
/// A zero seed cannot probe ordering, so it falls back to the default
/// seed amplitude for the probes.
pub fn refine_threshold(config: &RunConfig) -> Result<f64, Error> {
    if config.sweep.axis != Axis::Y {
        return Err(Error::Config("threshold refinement requires a pump sweep (axis = \"y\")".into()));
    }
    let opts = config.solver.options()?;
    let probe = SolverOptions {
        seed_alpha: if opts.seed_alpha > 0.0 {
            opts.seed_alpha
        } else {
            SolverOptions::default().seed_alpha
        },
        ..opts
    };
    let lo = config.sweep.start.min(config.sweep.stop);
    let hi = config.sweep.start.max(config.sweep.stop);
    detect_threshold(&config.base_params()?, lo, hi, &probe)
}

/// Walks the grid with continuation and assembles records plus a
/// summary. Non-converged points are skipped (the next point reuses
/// the last good seed); instability errors close the scan.
pub fn execute_sweep(config: &RunConfig) -> Result<(Vec<SweepRecord>, SweepSummary), Error> {
    let opts = config.solver.options()?;
    let base = config.base_params()?;
    let points = grid(&config.sweep);
    let dim = base.dim();
    let mut records = Vec::with_capacity(points.len());
    let mut summary = SweepSummary { requested: points.len(), ..SweepSummary::default() };
    let mut prev_alpha: Option<f64> = None;

    for &value in &points {
        let params = match config.sweep.axis {
            Axis::Y => base.with_y(value)?,
            Axis::U => base.with_u(value)?,
        };
        let seed = match prev_alpha {
            Some(a) if a.abs() >= opts.seed_alpha => a,
            _ => -opts.seed_alpha,
        };
        let sol = match solve_mean_field_seeded(&params, &opts, seed) {
            Ok(sol) => sol,
            Err(Error::NoConvergence { .. }) => {
                records.push(SweepRecord::unavailable(value, dim, PointStatus::NoConverge));
                summary.no_converge += 1;
                continue;
            }
            Err(e @ (Error::UnstableCavity { .. } | Error::DegenerateGap { .. })) => {
                records.push(SweepRecord::unavailable(value, dim, PointStatus::Unstable));
                summary.stopped = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        };
        prev_alpha = Some(sol.alpha);

        let fluct = match FluctuationResult::compute(&params, &sol) {
            Ok(fluct) => fluct,
            Err(e) => {
                let mut record = SweepRecord::unavailable(value, dim, PointStatus::Unstable);
                record.alpha_abs = sol.alpha.abs();
                record.mu = sol.mu;
                record.omega = sol.omega;
                record.gamma = sol.gamma.clone();
                records.push(record);
                summary.stopped = Some(e.to_string());
                break;
            }
        };

        if fluct.marginal {
            // a clamped zero mode: the spectrum is reportable, the
            // diverging state sums are not
            let mut record = SweepRecord::unavailable(value, dim, PointStatus::NearCritical);
            record.alpha_abs = sol.alpha.abs();
            record.mu = sol.mu;
            record.omega = sol.omega;
            record.gamma = sol.gamma.clone();
            record.omegas = fluct.omegas.clone();
            records.push(record);
            continue;
        }

        let obs = GroundStateObservables::compute(&sol, &fluct)?;
        if let Some(atom_number) = config.atom_number {
            if sol.alpha.abs() > ORDERED_AMPLITUDE {
                let (coefficient, timescale) =
                    goldstone_phase_growth(&sol, fluct.g[0], obs.xx[(0, 0)], atom_number);
                summary.goldstone = Some(GoldstoneReport { swept: value, coefficient, timescale });
            }
        }
        let status = if fluct.omegas[0] < NEAR_CRITICAL_OMEGA * params.omega_r {
            PointStatus::NearCritical
        } else {
            PointStatus::Ok
        };
        records.push(SweepRecord {
            swept: value,
            alpha_abs: sol.alpha.abs(),
            mu: sol.mu,
            omega: sol.omega,
            n_photon: obs.n_photon,
            n_out: obs.n_out,
            chi: obs.chi,
            s_vn: obs.s_vn,
            s_lin: obs.s_lin,
            status,
            gamma: sol.gamma.clone(),
            omegas: fluct.omegas.clone(),
            n_c: obs.n_c,
        });
    }

    summary.completed = records.len();
    if config.sweep.axis == Axis::Y && config.sweep.start != config.sweep.stop {
        summary.threshold = refine_threshold(config).ok();
    }
    Ok((records, summary))
}

fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

fn config_echo(config: &RunConfig) -> String {
    let opts = config.solver.resolved();
    let mut line = format!(
        "# omega_R={} delta_C={} n_cutoff={}",
        config.omega_r, config.delta_c, config.n_cutoff
    );
    match config.sweep.axis {
        Axis::Y => write!(line, " u={}", config.u.expect("validated")).unwrap(),
        Axis::U => write!(line, " y={}", config.y.expect("validated")).unwrap(),
    }
    write!(
        line,
        " sweep.axis={} sweep.start={} sweep.stop={} sweep.steps={}",
        config.sweep.axis.label(),
        config.sweep.start,
        config.sweep.stop,
        config.sweep.steps
    )
    .unwrap();
    write!(
        line,
        " solver.tol={} solver.max_iter={} solver.damping={} solver.seed_alpha={}",
        opts.tol, opts.max_iter, opts.damping, opts.seed_alpha
    )
    .unwrap();
    if let Some(n) = config.atom_number {
        write!(line, " N_c={n}").unwrap();
    }
    if let Some(out) = &config.out {
        write!(line, " out={out}").unwrap();
    }
    line.push('\n');
    line
}

/// Renders the dataset: a `#` header echoing the resolved config, a
/// column-name line, then one row per record with every float printed
/// to 17 significant digits.
pub fn render_csv(config: &RunConfig, records: &[SweepRecord]) -> String {
    let dim = config.n_cutoff + 1;
    let mut out = config_echo(config);
    out.push_str("swept,alpha_abs,mu,Omega,n_photon,n_out,chi,S_vn,S_lin,status");
    for name in ["gamma", "omega", "nc"] {
        for i in 0..dim {
            write!(out, ",{name}_{i}").unwrap();
        }
    }
    out.push('\n');
    for r in records {
        write!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            cell(r.swept),
            cell(r.alpha_abs),
            cell(r.mu),
            cell(r.omega),
            cell(r.n_photon),
            cell(r.n_out),
            cell(r.chi),
            cell(r.s_vn),
            cell(r.s_lin),
            r.status.label()
        )
        .unwrap();
        for v in r.gamma.iter().chain(&r.omegas).chain(&r.n_c) {
            write!(out, ",{}", cell(*v)).unwrap();
        }
        out.push('\n');
    }
    out
}
