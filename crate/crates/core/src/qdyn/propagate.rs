// SPDX-License-Identifier: Apache-2.0

//! Fixed-step classical Runge–Kutta propagation.
//!
//! The generator is vectorized once and restricted to the coordinates that
//! are reachable from the initial state, which is an exactly invariant
//! subspace. The step bound uses the Gershgorin radius of that restriction,
//! so coherences that can never be populated (e.g. ground/optical-excitation
//! coherences oscillating at 10⁴ cm⁻¹) do not force tiny steps.

use num_complex::Complex64;

use super::superop::{unvectorize, vectorize};
use super::{DensityMatrix, LindbladGenerator, Superoperator};
use crate::error::{Error, Result};

/// Step budget per propagation; beyond this the requested accuracy is treated
/// as unreachable.
const MAX_STEPS: u64 = 200_000_000;

/// `h = min(0.01 / max_rate, spacing / 10)`.
pub fn step_size(max_rate: f64, spacing: f64) -> f64 {
    let by_rate = if max_rate > 0.0 {
        0.01 / max_rate
    } else {
        f64::INFINITY
    };
    by_rate.min(spacing / 10.0)
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    let first = *t_grid.first().ok_or(Error::InvalidGrid("empty time grid"))?;
    if !first.is_finite() || first < 0.0 {
        return Err(Error::InvalidGrid("grid must start at t0 >= 0"));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(Error::InvalidGrid("grid must be strictly ascending"));
    }
    Ok(())
}

/// Propagates `rho0` and returns the state at every grid point (the first
/// entry is `rho0` itself).
pub fn propagate(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    run(gen, rho0, t_grid, None)
}

/// Same as [`propagate`] with a caller-chosen maximum step instead of the
/// automatic rule.
pub fn propagate_with_step(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    max_step: f64,
) -> Result<Vec<DensityMatrix>> {
    if !(max_step > 0.0) {
        return Err(Error::InvalidGrid("step must be positive"));
    }
    run(gen, rho0, t_grid, Some(max_step))
}

struct Restricted {
    sup: Superoperator,
    coords: Vec<usize>,
    dim: usize,
}

impl Restricted {
    fn gather(&self, full: &[Complex64]) -> Vec<Complex64> {
        self.coords.iter().map(|&i| full[i]).collect()
    }

    fn scatter(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for (&i, &v) in self.coords.iter().zip(x) {
            full[i] = v;
        }
        full
    }
}

fn run(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    max_step: Option<f64>,
) -> Result<Vec<DensityMatrix>> {
    let d = gen.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho0.dim(),
        });
    }
    validate_grid(t_grid)?;

    let full_sup = gen.superoperator();
    let v0 = vectorize(rho0.matrix());
    let seeds: Vec<usize> = (0..v0.len())
        .filter(|&i| v0[i] != Complex64::new(0.0, 0.0))
        .collect();
    let coords = full_sup.reachable_from(&seeds);
    let restricted = Restricted {
        sup: full_sup.restrict(&coords),
        coords,
        dim: d,
    };
    let max_rate = restricted.sup.gershgorin_bound();

    let n = restricted.sup.size();
    let mut x = restricted.gather(&v0);
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    let mut out = Vec::with_capacity(t_grid.len());
    out.push(rho0.clone());
    let mut budget = MAX_STEPS;

    for w in t_grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let span = t1 - t0;
        let h_max = max_step.unwrap_or_else(|| step_size(max_rate, span));
        let steps_f = (span / h_max).ceil().max(1.0);
        if steps_f > budget as f64 {
            return Err(Error::StepUnderflow { time: t0 });
        }
        let steps = steps_f as u64;
        budget -= steps;
        let h = span / steps as f64;
        if t0 + h == t0 {
            return Err(Error::StepUnderflow { time: t0 });
        }
        let hc = Complex64::new(h, 0.0);
        let half = Complex64::new(0.5 * h, 0.0);
        let sixth = Complex64::new(h / 6.0, 0.0);
        for _ in 0..steps {
            let sup = &restricted.sup;
            sup.apply(&x, &mut k1);
            for i in 0..n {
                tmp[i] = x[i] + half * k1[i];
            }
            sup.apply(&tmp, &mut k2);
            for i in 0..n {
                tmp[i] = x[i] + half * k2[i];
            }
            sup.apply(&tmp, &mut k3);
            for i in 0..n {
                tmp[i] = x[i] + hc * k3[i];
            }
            sup.apply(&tmp, &mut k4);
            for i in 0..n {
                x[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time: t1 });
        }
        let raw = unvectorize(&restricted.scatter(&x), d);
        let state = DensityMatrix::repaired(&raw).map_err(|e| match e {
            Error::NegativeEigenvalue { value, .. } => Error::NegativeEigenvalue {
                value,
                time: Some(t1),
            },
            Error::NonFinite { .. } => Error::NonFinite { time: t1 },
            other => other,
        })?;
        x = restricted.gather(&vectorize(state.matrix()));
        out.push(state);
    }
    Ok(out)
}
