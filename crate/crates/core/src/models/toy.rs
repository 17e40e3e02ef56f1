// SPDX-License-Identifier: Apache-2.0

//! Three-level toy absorber `ω_abs|2⟩⟨2| + (ω_rc/2)(|1⟩⟨1| − |0⟩⟨0|)`, with
//! energy delivered from |1⟩ to |0⟩ through an irreversible decay.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::{diagonal, ket_bra, BathId, DissipationChannel, LindbladGenerator};
use crate::thermo::{bose_occupation, BathSpec, ThermoReport};

/// Parameters shared by both transfer schemes. `gamma` is the transfer
/// (decay or coupling) rate; the bath rates default to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyParams {
    pub omega_abs: f64,
    pub omega_rc: f64,
    pub gamma: f64,
    pub t_abs: f64,
    pub t_loss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_c: Option<f64>,
}

impl ToyParams {
    pub fn new(omega_abs: f64, omega_rc: f64, gamma: f64, t_abs: f64, t_loss: f64) -> Result<Self> {
        let p = Self {
            omega_abs,
            omega_rc,
            gamma,
            t_abs,
            t_loss,
            gamma_h: None,
            gamma_c: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_bath_rates(mut self, gamma_h: f64, gamma_c: f64) -> Result<Self> {
        self.gamma_h = Some(gamma_h);
        self.gamma_c = Some(gamma_c);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_abs", self.omega_abs)?;
        positive("omega_rc", self.omega_rc)?;
        if !(self.omega_rc < 2.0 * self.omega_abs) {
            return Err(Error::invalid("omega_rc", "< 2*omega_abs"));
        }
        positive("gamma", self.gamma)?;
        positive("t_abs", self.t_abs)?;
        positive("t_loss", self.t_loss)?;
        if let Some(g) = self.gamma_h {
            crate::thermo::check_rate("gamma_h", g)?;
        }
        if let Some(g) = self.gamma_c {
            crate::thermo::check_rate("gamma_c", g)?;
        }
        Ok(())
    }

    /// `ω_rc ≥ 20 Γ`, required by the Hamiltonian transfer scheme.
    pub fn validate_weak_coupling(&self) -> Result<()> {
        self.validate()?;
        if !(self.omega_rc >= 20.0 * self.gamma) {
            return Err(Error::invalid("omega_rc", ">= 20*gamma (weak coupling)"));
        }
        Ok(())
    }

    pub fn gamma_h(&self) -> f64 {
        self.gamma_h.unwrap_or(self.gamma)
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c.unwrap_or(self.gamma)
    }

    /// Absorption gap `ω_abs + ω_rc/2`.
    pub fn omega_hot(&self) -> f64 {
        self.omega_abs + 0.5 * self.omega_rc
    }

    /// Loss gap `ω_abs − ω_rc/2`.
    pub fn omega_cold(&self) -> f64 {
        self.omega_abs - 0.5 * self.omega_rc
    }

    pub fn n_hot(&self) -> Result<f64> {
        bose_occupation(self.omega_hot(), self.t_abs)
    }

    pub fn n_cold(&self) -> Result<f64> {
        bose_occupation(self.omega_cold(), self.t_loss)
    }

    pub fn temp_ratio(&self) -> f64 {
        self.t_loss / self.t_abs
    }

    /// `(2ω_abs − ω_rc)/(2ω_abs + ω_rc)`: the decay-scheme current ratio and
    /// the temperature ratio at which the Hamiltonian scheme stops producing power.
    pub fn gap_ratio(&self) -> f64 {
        self.omega_cold() / self.omega_hot()
    }

    pub(crate) fn hamiltonian_diag(&self) -> [f64; 3] {
        [-0.5 * self.omega_rc, 0.5 * self.omega_rc, self.omega_abs]
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    crate::thermo::check_positive(name, v)
}

/// Steady populations `[ρ₀₀, ρ₁₁, ρ₂₂]` of the decay scheme for general rates.
pub fn toy_decay_populations(p: &ToyParams) -> Result<[f64; 3]> {
    p.validate()?;
    let (gh, gc, g) = (p.gamma_h(), p.gamma_c(), p.gamma);
    let (nh, nc) = (p.n_hot()?, p.n_cold()?);
    // relative to ρ₁₁ = 1
    let r2 = (g + gc * nc) / (gc * (1.0 + nc));
    let r0 = (gc * nc * gh * (1.0 + nh) + g * (gh * (1.0 + nh) + gc * (1.0 + nc))) / (gh * nh * gc * (1.0 + nc));
    if !r0.is_finite() {
        return Err(Error::invalid("t_abs", "large enough for a nonzero absorption rate"));
    }
    let z = 1.0 + r0 + r2;
    Ok([r0 / z, 1.0 / z, r2 / z])
}

/// `ρ₁₁ = 1/(1 + 2e^{(ω_abs+ω_rc/2)/T_abs})`, valid when all three rates are equal.
pub fn toy_decay_rho11_equal_rates(p: &ToyParams) -> f64 {
    1.0 / (1.0 + 2.0 * (p.omega_hot() / p.t_abs).exp())
}

/// Closed-form steady-state currents of the decay scheme.
pub fn toy_decay_report(p: &ToyParams) -> Result<ThermoReport> {
    let [_, rho11, _] = toy_decay_populations(p)?;
    let flux = p.gamma * rho11;
    let power = -p.omega_rc * flux;
    Ok(ThermoReport::steady(
        p.omega_hot() * flux,
        -p.omega_cold() * flux,
        power,
        power,
        p.t_abs,
        p.t_loss,
    ))
}

/// Three-level generator of the decay scheme: thermal abs (0↔2) and loss
/// (1↔2) channels plus the sink `|0⟩⟨1|` at rate Γ.
pub fn toy_decay_generator(p: &ToyParams) -> Result<LindbladGenerator> {
    toy_decay_generator_with_sink(p, p.gamma)
}

/// Same as [`toy_decay_generator`] with an independent sink rate (may be 0).
pub fn toy_decay_generator_with_sink(p: &ToyParams, sink_rate: f64) -> Result<LindbladGenerator> {
    p.validate()?;
    let abs = BathSpec::thermal(BathId::Abs, p.t_abs, p.gamma_h())?;
    let loss = BathSpec::thermal(BathId::Loss, p.t_loss, p.gamma_c())?;
    let mut channels = Vec::with_capacity(5);
    channels.extend(abs.channel_pair(ket_bra(3, 0, 2), p.omega_hot(), 1.0)?);
    channels.extend(loss.channel_pair(ket_bra(3, 1, 2), p.omega_cold(), 1.0)?);
    channels.push(DissipationChannel::new(
        ket_bra(3, 0, 1),
        sink_rate,
        BathId::Sink,
        p.omega_rc,
    )?);
    LindbladGenerator::new_secular(diagonal(&p.hamiltonian_diag()), channels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ToyParams {
        ToyParams::new(2.0, 1.0, 0.01, 1.5, 0.3).unwrap()
    }

    #[test]
    fn validation_messages() {
        let e = ToyParams::new(1.0, 2.5, 0.01, 1.0, 1.0).unwrap_err();
        assert_eq!(e.to_string(), "omega_rc must be < 2*omega_abs");
        assert!(ToyParams::new(1.0, 0.5, 0.0, 1.0, 1.0).is_err());
        assert!(ToyParams::new(1.0, 0.5, 0.1, 1.0, 1.0)
            .unwrap()
            .validate_weak_coupling()
            .is_err());
    }

    #[test]
    fn ratio_substitution() {
        let r = toy_decay_report(&base()).unwrap();
        assert!((r.ratio - 0.6).abs() < 1e-14);
        assert!(r.power < 0.0);
    }

    #[test]
    fn infinite_temperature_limit() {
        let mut p = base();
        p.t_abs = 1e9;
        let [_, rho11, _] = toy_decay_populations(&p).unwrap();
        assert!((rho11 - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn equal_rate_closed_form() {
        let p = base();
        let [_, rho11, rho22] = toy_decay_populations(&p).unwrap();
        assert!((rho11 - toy_decay_rho11_equal_rates(&p)).abs() < 1e-15);
        assert!((rho11 - rho22).abs() < 1e-15);
    }

    #[test]
    fn generator_is_secular() {
        let gen = toy_decay_generator(&base()).unwrap();
        assert_eq!(gen.dim(), 3);
        assert_eq!(gen.channels().len(), 5);
    }
}
