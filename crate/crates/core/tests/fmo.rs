// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use qsolar::fmo::*;
use qsolar::io::config::{Command, RunConfig};
use qsolar::qdyn::{max_abs, steady_state, BathId, CMatrix};

fn default_config() -> (FmoConfig, Vec<f64>) {
    RunConfig::parse(Command::FmoTrace, None, &[]).unwrap().fmo_config().unwrap()
}

#[test]
fn effective_temperature() {
    let t = effective_sun_temperature(13333.0, 5780.0, 2e-5).unwrap();
    assert!((t / 1356.0 - 1.0).abs() < 0.02, "{t}");
    // direct evaluation of ω / ln(1 + 1/(λ n))
    let n = 1.0 / ((13333.0 / (KB_CM_PER_K * 5780.0)).exp() - 1.0);
    let direct = 13333.0 / (KB_CM_PER_K * (1.0 + 1.0 / (2e-5 * n)).ln());
    assert!((t - direct).abs() < 1e-9 * direct);

    let lambdas = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];
    let temps: Vec<f64> = lambdas
        .iter()
        .map(|&l| effective_sun_temperature(13333.0, 5780.0, l).unwrap())
        .collect();
    assert!(temps.windows(2).all(|w| w[0] < w[1]));
    assert!((temps[6] - 5780.0).abs() < 1e-9 * 5780.0);
    // far in the Wien tail the closed form must not overflow
    assert!(effective_sun_temperature(1e6, 300.0, 1e-3).unwrap().is_finite());
}

#[test]
fn thermal_generator_relaxes_to_gibbs() {
    let (mut cfg, _) = default_config();
    cfg.gamma_sink = 0.0;
    cfg.lambda_geo = 1.0;
    cfg.t_sun = 5000.0;
    cfg.t_loss = 5000.0;
    let gen = build_fmo_generator(&cfg).unwrap();
    let reduced = gen.restrict(&(0..SINK).collect::<Vec<_>>()).unwrap();
    let rho = steady_state(&reduced).unwrap();

    let beta = 1.0 / (KB_CM_PER_K * 5000.0);
    let h = reduced.hamiltonian().clone();
    let eig = SymmetricEigen::new(h.map(|z| z.re));
    let weights = eig.eigenvalues.map(|e| (-beta * e).exp());
    let z: f64 = weights.sum();
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let d = CMatrix::from_diagonal(&weights.map(|w| Complex64::new(w / z, 0.0)));
    let gibbs = &v * d * v.adjoint();
    assert!(max_abs(&(rho.matrix() - gibbs)) < 1e-7);
}

#[test]
fn sink_run_violates_and_thermal_run_does_not() {
    let (cfg, grid) = default_config();
    let trace = sigma_trace(&cfg, &grid).unwrap();
    assert!(trace.iter().any(|p| p.t_ps <= 10.0 && p.sigma < 0.0));

    let mut thermal = cfg.clone();
    thermal.gamma_sink = 0.0;
    for init in [InitialState::Antenna, InitialState::Ground] {
        thermal.initial_state = init;
        let trace = sigma_trace(&thermal, &grid).unwrap();
        let min = trace.iter().map(|p| p.sigma).fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-9, "{init:?}: {min}");
    }
}

#[test]
fn populations_and_sink() {
    let (mut cfg, grid) = default_config();
    for init in [InitialState::Antenna, InitialState::Ground] {
        cfg.initial_state = init;
        let states = fmo_trajectory(&cfg, &grid).unwrap();
        let mut last = 0.0;
        for s in &states {
            let p = s.populations();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(p[SINK] >= last - 1e-9);
            last = p[SINK];
        }
        assert!(last > 0.0, "{init:?}");
    }
}

#[test]
fn ground_start_is_finite() {
    let (mut cfg, _) = default_config();
    cfg.initial_state = InitialState::Ground;
    let trace = sigma_trace(&cfg, &[0.0, 0.01]).unwrap();
    assert!(trace.iter().all(|p| p.sigma.is_finite()));
}

#[test]
fn sun_temperature_only_touches_radiation() {
    let (cfg, _) = default_config();
    let mut hotter = cfg.clone();
    hotter.t_sun = 6500.0;
    let a = build_fmo_generator(&cfg).unwrap();
    let b = build_fmo_generator(&hotter).unwrap();
    let rates = |g: &qsolar::qdyn::LindbladGenerator, bath| g.channels_for(bath).map(|c| c.rate()).collect::<Vec<_>>();
    assert_eq!(rates(&a, BathId::Loss), rates(&b, BathId::Loss));
    assert_eq!(rates(&a, BathId::Sink), rates(&b, BathId::Sink));
    assert_ne!(rates(&a, BathId::Abs), rates(&b, BathId::Abs));

    let grid = [0.0, 0.5, 1.0];
    let ja = sigma_trace(&cfg, &grid).unwrap();
    let jb = sigma_trace(&hotter, &grid).unwrap();
    assert!(jb[2].j_abs != ja[2].j_abs);
}

#[test]
fn data_file_round_trip() {
    let path = std::env::temp_dir().join(format!("fmo-data-{}.dat", std::process::id()));
    std::fs::write(&path, DEFAULT_FMO_DATA).unwrap();
    let h = FmoHamiltonian::from_file(&path).unwrap();
    assert_eq!(h, FmoHamiltonian::bundled());
    std::fs::remove_file(&path).unwrap();

    let flag = vec![("data_file".to_string(), "/nonexistent/fmo.dat".to_string())];
    let e = RunConfig::parse(Command::FmoTrace, None, &flag).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn rejects_nonphysical_config() {
    let (cfg, _) = default_config();
    let mut bad = cfg.clone();
    bad.omega_ant = 12000.0;
    assert!(build_fmo_generator(&bad).is_err());
    let mut bad = cfg.clone();
    bad.lambda_geo = 2.0;
    assert!(build_fmo_generator(&bad).is_err());
    let mut bad = cfg;
    bad.hamiltonian.couplings[0][1] = 1.0;
    assert!(build_fmo_generator(&bad).is_err());
}
