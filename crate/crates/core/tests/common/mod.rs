// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qsolar::models::{DonorAcceptorParams, PhotocellParams, ToyParams};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn log_uniform(r: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (r.random_range(lo.ln()..hi.ln())).exp()
}

/// Toy parameters satisfying the weak-coupling condition.
pub fn toy(r: &mut StdRng) -> ToyParams {
    let omega_abs: f64 = r.random_range(0.5..2.0);
    let omega_rc = omega_abs * r.random_range(0.05..1.9);
    let gamma = (omega_rc / 25.0).min(log_uniform(r, 1e-4, 0.05));
    let t_abs = r.random_range(0.5..5.0);
    let t_loss = t_abs * r.random_range(0.05..1.0);
    ToyParams::new(omega_abs, omega_rc, gamma, t_abs, t_loss).unwrap()
}

pub fn dorfman(r: &mut StdRng) -> DonorAcceptorParams {
    let omega_abs: f64 = r.random_range(0.5..2.0);
    let x = r.random_range(0.02..0.98);
    let t_h = r.random_range(0.5..5.0);
    DonorAcceptorParams::from_gaps(
        omega_abs,
        x * omega_abs,
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        t_h,
        t_h * r.random_range(0.05..1.0),
    )
    .unwrap()
}

pub fn photocell(r: &mut StdRng) -> PhotocellParams {
    let omega_abs: f64 = r.random_range(0.5..2.0);
    let x = r.random_range(0.02..0.98);
    let t_h = r.random_range(0.5..5.0);
    PhotocellParams::from_gaps(
        omega_abs,
        x * omega_abs,
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        log_uniform(r, 1e-3, 1.0),
        t_h,
        t_h * r.random_range(0.05..1.0),
    )
    .unwrap()
}

pub fn bose(omega: f64, t: f64) -> f64 {
    1.0 / ((omega / t).exp() - 1.0)
}

/// Stationary distribution of a classical rate matrix given as
/// `(from, to, rate)` transitions, by replacing one balance equation with
/// normalization and solving with LU.
pub fn markov_stationary(n: usize, transitions: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut w = DMatrix::<f64>::zeros(n, n);
    for &(from, to, rate) in transitions {
        w[(to, from)] += rate;
        w[(from, from)] -= rate;
    }
    let mut b = DVector::<f64>::zeros(n);
    for j in 0..n {
        w[(n - 1, j)] = 1.0;
    }
    b[n - 1] = 1.0;
    w.lu().solve(&b).expect("rate matrix is regular").iter().copied().collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
