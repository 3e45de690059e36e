//! Acceptance suite. Each test checks one numbered criterion at its
//! stated tolerance and prints a single verdict line (visible with
//! `--nocapture`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selforg::{
    build_m, coupling_vector, detect_threshold, eigh, mean_field_energy, omega_pm_closed_form,
    solve_mean_field, solve_mean_field_seeded, update_alpha, Error, FluctuationResult,
    GroundStateObservables, MeanFieldSolution, ModelParams, SolverOptions, SymmetricMatrix,
};

fn pass(n: usize, what: &str) {
    println!("criterion {n:02}: PASS ({what})");
}

fn reference_params(y: f64, n_cutoff: usize) -> ModelParams {
    ModelParams::new(1.0, -100.0, -20.0, y, n_cutoff).unwrap()
}

fn solve(params: &ModelParams) -> MeanFieldSolution {
    solve_mean_field(params, &SolverOptions::default()).unwrap()
}

fn solve_trivial(params: &ModelParams) -> MeanFieldSolution {
    let opts = SolverOptions { seed_alpha: 0.0, ..SolverOptions::default() };
    solve_mean_field(params, &opts).unwrap()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Twenty seeded random working points spanning both phases, each
/// solved through the full pipeline.
fn random_stable_points(
) -> Vec<(ModelParams, MeanFieldSolution, FluctuationResult, GroundStateObservables)> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut points = Vec::with_capacity(20);
    for i in 0..20 {
        let omega_r = rng.gen_range(0.7..1.5);
        let delta_c = rng.gen_range(-150.0..-60.0);
        let u = rng.gen_range(-25.0..-2.0);
        let n_cutoff = rng.gen_range(3..=8);
        let fraction =
            if i < 10 { rng.gen_range(0.1..0.9) } else { rng.gen_range(1.05..1.6) };
        let base = ModelParams::new(omega_r, delta_c, u, 0.0, n_cutoff).unwrap();
        let params = base.with_y(fraction * base.critical_pump().unwrap()).unwrap();
        let sol = solve(&params);
        let fluct = FluctuationResult::compute(&params, &sol).unwrap();
        assert!(!fluct.marginal, "sampled points must stay away from the critical pump");
        let obs = GroundStateObservables::compute(&sol, &fluct).unwrap();
        points.push((params, sol, fluct, obs));
    }
    points
}

#[test]
fn criterion_01_threshold_is_ten_for_every_cutoff() {
    let opts = SolverOptions::default();
    for n_cutoff in [2, 3, 5, 10] {
        let params = reference_params(0.0, n_cutoff);
        let found = detect_threshold(&params, 0.0, 15.0, &opts).unwrap();
        assert!(
            (found - 10.0).abs() < 1e-3,
            "n_cutoff = {n_cutoff}: threshold {found} is off by more than 1e-3"
        );
    }
    pass(1, "threshold 10 within 1e-3 for n_cutoff in {2, 3, 5, 10}");
}

#[test]
fn criterion_02_normal_phase_spectrum_matches_the_closed_form() {
    let n_cutoff = 6;
    for y in [0.0, 2.5, 5.0, 7.5, 9.9] {
        let params = reference_params(y, n_cutoff);
        let sol = solve_trivial(&params);
        let fluct = FluctuationResult::compute(&params, &sol).unwrap();
        let (minus, plus) = omega_pm_closed_form(&params).unwrap();
        let mut expected: Vec<f64> = vec![minus, plus];
        expected.extend((2..=n_cutoff).map(|k| (k * k) as f64 * params.omega_r));
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (w, e) in fluct.omegas.iter().zip(&expected) {
            assert!(
                (w - e).abs() <= 1e-10 * e,
                "y = {y}: frequency {w} differs from the closed form {e}"
            );
        }
    }
    pass(2, "polariton pair and bare ladder reproduced to 1e-10 relative");
}

#[test]
fn criterion_03_soft_mode_closes_at_the_critical_pump() {
    let base = reference_params(0.0, 6);
    let y_crit = base.critical_pump().unwrap();

    let at_crit = base.with_y(y_crit).unwrap();
    let (minus, _) = omega_pm_closed_form(&at_crit).unwrap();
    assert!(minus < 1e-6 * base.omega_r, "soft mode {minus} has not closed at the critical pump");

    let mut previous = f64::INFINITY;
    for i in 0..50 {
        let y = y_crit * i as f64 / 49.0;
        let (minus, _) = omega_pm_closed_form(&base.with_y(y).unwrap()).unwrap();
        assert!(minus < previous, "soft mode must decrease monotonically, stalled at y = {y}");
        previous = minus;
    }
    pass(3, "soft mode closes at the critical pump and decreases monotonically");
}

#[test]
fn criterion_04_zero_pump_spectrum_is_the_box_ladder() {
    for n_cutoff in [3, 10] {
        let params = reference_params(0.0, n_cutoff);
        let sol = solve_trivial(&params);
        let fluct = FluctuationResult::compute(&params, &sol).unwrap();
        let mut expected: Vec<f64> = (1..=n_cutoff).map(|k| (k * k) as f64).collect();
        expected.push(100.0);
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (w, e) in fluct.omegas.iter().zip(&expected) {
            assert!(
                (w - e).abs() <= 1e-10 * e.max(1.0),
                "n_cutoff = {n_cutoff}: frequency {w} should be {e}"
            );
        }
    }
    pass(4, "decoupled spectrum is the box ladder plus the cavity line");
}

#[test]
fn criterion_05_normal_phase_coupling_is_exactly_first_mode() {
    for n_cutoff in [2, 3, 5, 10] {
        let params = reference_params(7.0, n_cutoff);
        let sol = solve_trivial(&params);
        let g = coupling_vector(&params, &sol);
        for (k, gk) in g.iter().enumerate() {
            let expected = if k == 1 { params.y } else { 0.0 };
            assert!(
                (gk - expected).abs() <= 1e-12,
                "n_cutoff = {n_cutoff}: g[{k}] = {gk}, expected {expected}"
            );
        }
    }
    pass(5, "homogeneous coupling vector is y times the first unit vector");
}

/// Scans the shift term downward in 0.25 steps at y = 11 until the
/// effective cavity frequency turns over, returning the abort point.
fn abort_shift(n_cutoff: usize) -> f64 {
    let opts = SolverOptions::default();
    let base = ModelParams::new(1.0, -100.0, -20.0, 11.0, n_cutoff).unwrap();
    let mut prev_alpha: Option<f64> = None;
    for k in 0.. {
        let u = -40.0 - 0.25 * k as f64;
        assert!(u > -120.0, "the scan should abort before u = -120");
        let params = base.with_u(u).unwrap();
        let seed = match prev_alpha {
            Some(a) if a.abs() >= opts.seed_alpha => a,
            _ => -opts.seed_alpha,
        };
        match solve_mean_field_seeded(&params, &opts, seed) {
            Ok(sol) => prev_alpha = Some(sol.alpha),
            Err(Error::UnstableCavity { .. }) => return u,
            Err(Error::NoConvergence { .. }) => {}
            Err(e) => panic!("unexpected error during the shift scan: {e}"),
        }
    }
    unreachable!()
}

#[test]
fn criterion_06_two_mode_divergence_point() {
    let narrow = abort_shift(2);
    let wide = abort_shift(10);
    assert!(
        wide.abs() < narrow.abs(),
        "the wider basis must abort at a smaller shift: {wide} vs {narrow}"
    );
    assert!(
        (narrow + 100.0).abs() <= 1.0,
        "n_cutoff = 2 aborts at u = {narrow}, not at the cavity detuning -100: with modes \
         0..=2 the shift form gamma' M2 gamma reaches sqrt(2) on the unit sphere, so the \
         effective cavity frequency crosses zero near delta_C / sqrt(2); reaching -100 \
         requires restricting the basis to modes 0..=1, below the supported cutoff range"
    );
    pass(6, "downward shift scan aborts at the two-mode divergence point");
}

#[test]
fn criterion_07_populations_balance_across_bases() {
    for (params, _, _, obs) in random_stable_points() {
        let total_c: f64 = obs.n_c.iter().sum();
        assert!(
            (obs.n_out - total_c).abs() <= 1e-10 * (1.0 + obs.n_out),
            "population mismatch at y = {}: {} vs {}",
            params.y,
            obs.n_out,
            total_c
        );
    }
    pass(7, "excitation totals agree between mode bases at 20 random points");
}

#[test]
fn criterion_08_photon_number_routes_agree() {
    for (params, sol, _, obs) in random_stable_points() {
        let route =
            0.5 * (sol.omega * obs.xx[(0, 0)] + obs.pp[(0, 0)] / sol.omega) - 0.5;
        assert!(
            (obs.n_photon - route).abs() <= 1e-10,
            "photon routes disagree at y = {}: {} vs {}",
            params.y,
            obs.n_photon,
            route
        );
    }
    pass(8, "spectral and covariance photon numbers agree at 20 random points");
}

/// Per-particle energy with the cavity amplitude eliminated at its
/// stationary value.
fn envelope_energy(
    params: &ModelParams,
    m: &[SymmetricMatrix; 3],
    gamma: &[f64],
) -> f64 {
    let q1 = m[1].quadratic_form(gamma);
    let q2 = m[2].quadratic_form(gamma);
    let omega = -params.delta_c + params.u * q2;
    params.omega_r * m[0].quadratic_form(gamma) - 0.25 * params.y * params.y * q1 * q1 / omega
}

fn envelope_gradient(
    params: &ModelParams,
    m: &[SymmetricMatrix; 3],
    gamma: &[f64],
) -> Vec<f64> {
    let q1 = m[1].quadratic_form(gamma);
    let q2 = m[2].quadratic_form(gamma);
    let omega = -params.delta_c + params.u * q2;
    let alpha = -0.5 * params.y * q1 / omega;
    let g0 = m[0].mul_vec(gamma);
    let g1 = m[1].mul_vec(gamma);
    let g2 = m[2].mul_vec(gamma);
    (0..gamma.len())
        .map(|n| {
            2.0 * (params.omega_r * g0[n]
                + params.y * alpha * g1[n]
                + params.u * alpha * alpha * g2[n])
        })
        .collect()
}

/// Projected gradient descent on the unit sphere with backtracking,
/// run to a tight stationarity residual.
fn descend(params: &ModelParams, m: &[SymmetricMatrix; 3], start: &[f64]) -> (f64, Vec<f64>) {
    let mut gamma = normalize(start);
    let mut energy = envelope_energy(params, m, &gamma);
    let mut step = 1e-3;
    for _ in 0..400_000 {
        let grad = envelope_gradient(params, m, &gamma);
        let radial: f64 = grad.iter().zip(&gamma).map(|(g, c)| g * c).sum();
        let tangent: Vec<f64> =
            grad.iter().zip(&gamma).map(|(g, c)| g - radial * c).collect();
        let norm_sq: f64 = tangent.iter().map(|t| t * t).sum();
        if norm_sq < 1e-24 {
            break;
        }
        loop {
            let trial: Vec<f64> = normalize(
                &gamma
                    .iter()
                    .zip(&tangent)
                    .map(|(c, t)| c - step * t)
                    .collect::<Vec<f64>>(),
            );
            let trial_energy = envelope_energy(params, m, &trial);
            if trial_energy <= energy - 0.1 * step * norm_sq {
                gamma = trial;
                energy = trial_energy;
                step *= 1.5;
                break;
            }
            step *= 0.5;
            assert!(step > 1e-18, "line search collapsed");
        }
    }
    (energy, gamma)
}

/// Maps a minimizer into the sector with positive condensate and
/// first-mode components; the mirror sector is physically identical.
fn canonical_sector(mut gamma: Vec<f64>) -> Vec<f64> {
    if gamma[0] < 0.0 {
        for c in gamma.iter_mut() {
            *c = -*c;
        }
    }
    if gamma[1] < 0.0 {
        for (n, c) in gamma.iter_mut().enumerate() {
            if n % 2 == 1 {
                *c = -*c;
            }
        }
    }
    gamma
}

#[test]
fn criterion_09_gradient_descent_confirms_the_mean_field() {
    let n_cutoff = 10;
    let m = [
        build_m(0, n_cutoff).unwrap(),
        build_m(1, n_cutoff).unwrap(),
        build_m(2, n_cutoff).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for y in [10.5, 11.0, 15.0] {
        let params = reference_params(y, n_cutoff);
        let sol = solve(&params);

        let dim = params.dim();
        let mut starts: Vec<Vec<f64>> = vec![
            {
                let mut s = vec![0.0; dim];
                s[0] = 1.0;
                s[1] = 0.3;
                s
            },
            {
                let mut s = vec![0.0; dim];
                s[0] = 1.0;
                s[1] = -0.3;
                s
            },
        ];
        starts.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());

        let best = starts
            .into_iter()
            .map(|s| descend(&params, &m, &s))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap();
        let gamma = canonical_sector(best.1);
        let alpha = update_alpha(&params, &gamma).unwrap();

        assert!(
            (alpha.abs() - sol.alpha.abs()).abs() <= 1e-6,
            "y = {y}: amplitudes differ, {} vs {}",
            alpha.abs(),
            sol.alpha.abs()
        );
        for (n, (a, b)) in gamma.iter().zip(&sol.gamma).enumerate() {
            assert!(
                (a - b).abs() <= 1e-6,
                "y = {y}: component {n} differs, {a} vs {b}"
            );
        }
    }
    pass(9, "projected descent reproduces the solved branch to 1e-6");
}

/// Root-sum-square of centered finite differences of the energy along
/// a spanning set of tangent directions at the solution.
fn stationarity_residual(params: &ModelParams, sol: &MeanFieldSolution) -> f64 {
    let h = 1e-5;
    let dim = params.dim();
    let mut sum = 0.0;
    for i in 0..dim {
        let tangent: Vec<f64> = (0..dim)
            .map(|n| {
                let unit = if n == i { 1.0 } else { 0.0 };
                unit - sol.gamma[i] * sol.gamma[n]
            })
            .collect();
        let probe = |s: f64| {
            let shifted: Vec<f64> = sol
                .gamma
                .iter()
                .zip(&tangent)
                .map(|(c, t)| c + s * t)
                .collect();
            mean_field_energy(params, sol.alpha, &normalize(&shifted), sol.mu)
        };
        let d = (probe(h) - probe(-h)) / (2.0 * h);
        sum += d * d;
    }
    sum.sqrt()
}

#[test]
fn criterion_10_solutions_are_stationary_on_the_sphere() {
    for y in [2.5, 5.0, 9.0, 10.5, 11.0, 15.0] {
        let params = reference_params(y, 10);
        let sol = solve(&params);
        let residual = stationarity_residual(&params, &sol);
        assert!(
            residual < 1e-6 * params.omega_r,
            "y = {y}: tangential gradient norm {residual}"
        );
    }
    for (params, sol, _, _) in random_stable_points() {
        let residual = stationarity_residual(&params, &sol);
        assert!(
            residual < 1e-6 * params.omega_r,
            "y = {}: tangential gradient norm {residual}",
            params.y
        );
    }
    pass(10, "finite-difference gradient vanishes at every converged solution");
}

#[test]
fn criterion_11_entanglement_limits_and_monotonicity() {
    let observables_at = |y: f64| {
        let params = reference_params(y, 6);
        let sol = solve_trivial(&params);
        let fluct = FluctuationResult::compute(&params, &sol).unwrap();
        GroundStateObservables::compute(&sol, &fluct).unwrap()
    };

    let decoupled = observables_at(0.0);
    assert!((decoupled.chi - 1.0).abs() <= 1e-12, "chi at zero pump is {}", decoupled.chi);
    assert_eq!(decoupled.s_vn, 0.0);
    assert_eq!(decoupled.s_lin, 0.0);

    let mut previous = (decoupled.chi, decoupled.s_vn, decoupled.s_lin);
    for y in [2.0, 4.0, 6.0, 8.0, 9.0, 9.5, 9.9] {
        let obs = observables_at(y);
        assert!(obs.chi > previous.0, "chi must grow toward the transition, y = {y}");
        assert!(obs.s_vn > previous.1, "S_vn must grow toward the transition, y = {y}");
        assert!(obs.s_lin > previous.2, "S_lin must grow toward the transition, y = {y}");
        assert!(obs.s_lin < 1.0, "linear entropy must stay below one, y = {y}");
        previous = (obs.chi, obs.s_vn, obs.s_lin);
    }
    for (params, _, _, obs) in random_stable_points() {
        assert!(obs.s_lin < 1.0, "linear entropy must stay below one, y = {}", params.y);
    }
    pass(11, "entanglement vanishes when decoupled and grows monotonically");
}

#[test]
fn criterion_12_covariances_describe_a_physical_state() {
    for (params, _, _, obs) in random_stable_points() {
        for matrix in [&obs.xx, &obs.pp] {
            let eig = eigh(matrix).unwrap();
            let floor = -1e-12 * matrix.max_abs();
            assert!(
                eig.eigenvalues[0] >= floor,
                "covariance not positive semidefinite at y = {}: {}",
                params.y,
                eig.eigenvalues[0]
            );
        }
        for k in 0..params.dim() {
            let product = obs.xx[(k, k)] * obs.pp[(k, k)];
            assert!(
                product >= 0.25 - 1e-12,
                "uncertainty product {product} below the vacuum bound at y = {}",
                params.y
            );
        }
        assert!(obs.n_photon >= -1e-12);
        for population in obs.n_b.iter().chain(&obs.n_c) {
            assert!(*population >= -1e-12, "negative population at y = {}", params.y);
        }
    }
    pass(12, "covariances and populations are physical at 20 random points");
}
