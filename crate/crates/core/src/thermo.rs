// SPDX-License-Identifier: Apache-2.0

//! Heat currents, entropy production and the steady-state second-law test.
//!
//! Sign convention: energy flowing into the system is positive. Sink channels
//! are excluded from both heat currents and from σ; their energy flow is kept
//! separately as `sink_flow` so the first law can still be closed.

use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::{
    hermiticity_defect, hermitize, max_abs, BathId, CMatrix, DensityMatrix, DissipationChannel,
    LindbladGenerator,
};

/// Eigenvalues of ρ below this are floored before taking logarithms.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Relative tolerance of the steady-state verdict.
pub const VERDICT_TOL: f64 = 1e-9;
/// `|j_abs|` below this fraction of the current scale makes the verdict undefined.
pub const UNDEFINED_FRACTION: f64 = 1e-14;

/// Mean occupation `1 / (e^{ω/T} − 1)` of a bosonic mode.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid("omega", "> 0"));
    }
    if !(temperature > 0.0) {
        return Err(Error::invalid("temperature", "> 0"));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// One reservoir: its temperature (none for a sink) and zero-temperature rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub bath: BathId,
    pub temperature: Option<f64>,
    pub gamma0: f64,
}

impl BathSpec {
    pub fn thermal(bath: BathId, temperature: f64, gamma0: f64) -> Result<Self> {
        if bath == BathId::Sink {
            return Err(Error::invalid("sink temperature", "absent (sinks are athermal)"));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::invalid(format!("{bath} temperature"), "> 0"));
        }
        check_rate("gamma0", gamma0)?;
        Ok(Self {
            bath,
            temperature: Some(temperature),
            gamma0,
        })
    }

    pub fn sink(gamma0: f64) -> Result<Self> {
        check_rate("gamma0", gamma0)?;
        Ok(Self {
            bath: BathId::Sink,
            temperature: None,
            gamma0,
        })
    }

    pub fn occupation(&self, omega: f64) -> Result<f64> {
        match self.temperature {
            Some(t) => bose_occupation(omega, t),
            None => Ok(0.0),
        }
    }

    /// Emission and absorption channels for a lowering operator at Bohr
    /// frequency `omega > 0`, with rates `γ₀ w (1 + n̄)` and `γ₀ w n̄`.
    pub fn channel_pair(
        &self,
        lowering: CMatrix,
        omega: f64,
        weight: f64,
    ) -> Result<[DissipationChannel; 2]> {
        let n = self.occupation(omega)?;
        let raising = lowering.adjoint();
        let g = self.gamma0 * weight;
        Ok([
            DissipationChannel::new(lowering, g * (1.0 + n), self.bath, omega)?,
            DissipationChannel::new(raising, g * n, self.bath, -omega)?,
        ])
    }
}

pub(crate) fn check_rate(name: &str, rate: f64) -> Result<()> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::invalid(name, ">= 0"));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::invalid(name, "> 0"));
    }
    Ok(())
}

/// `Σₖ Tr[Dₖ(ρ) H_S]` over the channels tagged `bath`.
pub fn heat_current(gen: &LindbladGenerator, bath: BathId, rho: &DensityMatrix) -> Result<f64> {
    heat_current_of(gen, bath, rho.matrix())
}

pub(crate) fn heat_current_of(gen: &LindbladGenerator, bath: BathId, rho: &CMatrix) -> Result<f64> {
    if !gen.has_bath(bath) {
        return Err(Error::UnknownBath(bath));
    }
    let flow: Complex64 = (gen.bath_action(bath, rho)? * gen.hamiltonian()).trace();
    Ok(flow.re)
}

/// Von Neumann entropy `−Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// `Ṡ = −Tr[ρ̇ ln ρ]`, evaluated in the eigenbasis of ρ.
pub fn entropy_rate(rho: &DensityMatrix, rho_dot: &CMatrix) -> Result<f64> {
    if rho_dot.nrows() != rho.dim() || rho_dot.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: rho_dot.nrows(),
        });
    }
    let deviation = hermiticity_defect(rho_dot);
    if deviation > 1e-10 * max_abs(rho_dot).max(1.0) {
        return Err(Error::NotHermitian {
            what: "state derivative",
            deviation,
        });
    }
    let eig = SymmetricEigen::new(hermitize(rho.matrix()));
    let u = &eig.eigenvectors;
    let rotated = u.adjoint() * hermitize(rho_dot) * u;
    let mut rate = 0.0;
    for (k, &p) in eig.eigenvalues.iter().enumerate() {
        let flow = rotated[(k, k)].re;
        if flow == 0.0 {
            continue;
        }
        rate -= flow * p.max(EIGENVALUE_FLOOR).ln();
    }
    Ok(rate)
}

/// `σ = Ṡ − J_abs/T_abs − J_loss/T_loss`.
pub fn entropy_production(
    rho: &DensityMatrix,
    rho_dot: &CMatrix,
    currents: (f64, f64),
    temps: (f64, f64),
) -> Result<f64> {
    check_positive("t_abs", temps.0)?;
    check_positive("t_loss", temps.1)?;
    Ok(entropy_rate(rho, rho_dot)? - currents.0 / temps.0 - currents.1 / temps.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violation,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Violation => "violation",
            Verdict::Undefined => "undefined",
        })
    }
}

/// Steady-state second law: `−J_loss/J_abs ≥ T_loss/T_abs` when `J_abs > 0`,
/// and `≤` when `J_abs < 0`.
pub fn second_law_verdict(j_abs: f64, j_loss: f64, t_abs: f64, t_loss: f64) -> Verdict {
    let scale = j_abs.abs().max(j_loss.abs());
    if !(scale > 0.0) || !scale.is_finite() || j_abs.abs() < UNDEFINED_FRACTION * scale {
        return Verdict::Undefined;
    }
    let ratio = -j_loss / j_abs;
    let bound = t_loss / t_abs;
    let tol = VERDICT_TOL * bound.abs();
    let ok = if j_abs > 0.0 {
        ratio >= bound - tol
    } else {
        ratio <= bound + tol
    };
    if ok {
        Verdict::Consistent
    } else {
        Verdict::Violation
    }
}

/// Thermodynamic summary of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub j_abs: f64,
    pub j_loss: f64,
    pub power: f64,
    pub sink_flow: f64,
    pub sigma: f64,
    pub ratio: f64,
    pub verdict: Verdict,
}

impl ThermoReport {
    /// Report for a stationary state, where `Ṡ = 0` and `σ = −J_abs/T_abs − J_loss/T_loss`.
    pub fn steady(j_abs: f64, j_loss: f64, power: f64, sink_flow: f64, t_abs: f64, t_loss: f64) -> Self {
        Self {
            j_abs,
            j_loss,
            power,
            sink_flow,
            sigma: -j_abs / t_abs - j_loss / t_loss,
            ratio: -j_loss / j_abs,
            verdict: second_law_verdict(j_abs, j_loss, t_abs, t_loss),
        }
    }

    /// `J_abs + J_loss + P`, zero at a steady state.
    pub fn first_law_residual(&self) -> f64 {
        self.j_abs + self.j_loss + self.power
    }
}

/// Numeric report for a stationary state of a sink model: the power is the
/// sink flow and σ includes the (vanishing) entropy rate of the given state.
pub fn sink_model_report(
    gen: &LindbladGenerator,
    rho: &DensityMatrix,
    t_abs: f64,
    t_loss: f64,
) -> Result<ThermoReport> {
    let j_abs = heat_current(gen, BathId::Abs, rho)?;
    let j_loss = heat_current(gen, BathId::Loss, rho)?;
    let sink_flow = if gen.has_bath(BathId::Sink) {
        heat_current(gen, BathId::Sink, rho)?
    } else {
        0.0
    };
    let rho_dot = gen.apply_matrix(rho.matrix())?;
    let sigma = entropy_production(rho, &rho_dot, (j_abs, j_loss), (t_abs, t_loss))?;
    Ok(ThermoReport {
        sigma,
        ..ThermoReport::steady(j_abs, j_loss, sink_flow, sink_flow, t_abs, t_loss)
    })
}
