// SPDX-License-Identifier: Apache-2.0

//! Four-level donor–acceptor engine. Levels `b` (ground) and `a` (donor
//! excited) exchange photons with the hot bath; `a → α` and `β → b` are
//! phonon-assisted; `α → β` is the irreversible load.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::{diagonal, ket_bra, BathId, DissipationChannel, LindbladGenerator};
use crate::thermo::{bose_occupation, check_positive, check_rate, BathSpec, ThermoReport};

/// Basis order of the generator.
pub const DORFMAN_LEVELS: [&str; 4] = ["a", "b", "alpha", "beta"];
const A: usize = 0;
const B: usize = 1;
const ALPHA: usize = 2;
const BETA: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DonorAcceptorParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_alpha: f64,
    pub omega_beta: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    /// Load rate `Γ` of `α → β`.
    pub gamma_load: f64,
    /// Return rate `Γ_c` of `β → b`.
    pub gamma_return: f64,
    pub t_h: f64,
    pub t_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DorfmanPopulations {
    pub aa: f64,
    pub bb: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl DorfmanPopulations {
    pub fn as_array(&self) -> [f64; 4] {
        [self.aa, self.bb, self.alpha, self.beta]
    }
}

impl DonorAcceptorParams {
    /// Places the levels so that the absorption gap is `omega_abs` and
    /// `ω_α − ω_β = omega_rc`, symmetric about `omega_abs/2`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_gaps(
        omega_abs: f64,
        omega_rc: f64,
        gamma_h: f64,
        gamma_c: f64,
        gamma_load: f64,
        gamma_return: f64,
        t_h: f64,
        t_c: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_a: omega_abs,
            omega_b: 0.0,
            omega_alpha: 0.5 * (omega_abs + omega_rc),
            omega_beta: 0.5 * (omega_abs - omega_rc),
            gamma_h,
            gamma_c,
            gamma_load,
            gamma_return,
            t_h,
            t_c,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_a > self.omega_b) {
            return Err(Error::invalid("omega_a", "> omega_b"));
        }
        if !(self.omega_a > self.omega_alpha) {
            return Err(Error::invalid("omega_alpha", "< omega_a"));
        }
        if !(self.omega_beta > self.omega_b) {
            return Err(Error::invalid("omega_beta", "> omega_b"));
        }
        check_positive("gamma_h", self.gamma_h)?;
        check_positive("gamma_c", self.gamma_c)?;
        check_rate("gamma_load", self.gamma_load)?;
        check_positive("gamma_return", self.gamma_return)?;
        check_positive("t_h", self.t_h)?;
        check_positive("t_c", self.t_c)?;
        Ok(())
    }

    fn occupations(&self) -> Result<(f64, f64, f64)> {
        Ok((
            bose_occupation(self.omega_a - self.omega_b, self.t_h)?,
            bose_occupation(self.omega_a - self.omega_alpha, self.t_c)?,
            bose_occupation(self.omega_beta - self.omega_b, self.t_c)?,
        ))
    }
}

pub fn dorfman_steady_state(p: &DonorAcceptorParams) -> Result<DorfmanPopulations> {
    p.validate()?;
    let (nh, nc, big_nc) = p.occupations()?;
    let (gh, gc, g, g_ret) = (p.gamma_h, p.gamma_c, p.gamma_load, p.gamma_return);
    if !(nh > 0.0) {
        return Err(Error::invalid("t_h", "large enough for a nonzero excitation rate"));
    }
    // relative to ρ_αα = 1
    let aa = (gc * nc + g) / (gc * (nc + 1.0));
    let d = g * (gc * (nc + 1.0) + gh * (nh + 1.0)) + gh * gc * nc * (1.0 + nh);
    let bb = d / (gh * nh * gc * (nc + 1.0));
    let boltz = big_nc / (1.0 + big_nc);
    let beta = bb * boltz + g / (g_ret * (1.0 + big_nc));
    let z = aa + bb + 1.0 + beta;
    if !z.is_finite() {
        return Err(Error::invalid("t_h", "large enough for a nonzero excitation rate"));
    }
    Ok(DorfmanPopulations {
        aa: aa / z,
        bb: bb / z,
        alpha: 1.0 / z,
        beta: beta / z,
    })
}

/// Steady currents: `J_h = (ω_a−ω_b) F`, `J_c = −F(ω_a − ω_α + ω_β − ω_b)`
/// with the load flux `F = Γ ρ_αα`.
pub fn dorfman_currents(p: &DonorAcceptorParams) -> Result<ThermoReport> {
    let pops = dorfman_steady_state(p)?;
    let flux = p.gamma_load * pops.alpha;
    let j_h = (p.omega_a - p.omega_b) * flux;
    let j_c = -flux * (p.omega_a - p.omega_alpha + p.omega_beta - p.omega_b);
    let sink = -flux * (p.omega_alpha - p.omega_beta);
    Ok(ThermoReport::steady(j_h, j_c, sink, sink, p.t_h, p.t_c))
}

/// `1 + (ω_β − ω_α)/(ω_a − ω_b)`.
pub fn dorfman_ratio(p: &DonorAcceptorParams) -> f64 {
    1.0 + (p.omega_beta - p.omega_alpha) / (p.omega_a - p.omega_b)
}

/// Rate equations embedded as a diagonal Lindblad generator on
/// `[a, b, α, β]`.
pub fn dorfman_generator(p: &DonorAcceptorParams) -> Result<LindbladGenerator> {
    p.validate()?;
    let hot = BathSpec::thermal(BathId::Abs, p.t_h, p.gamma_h)?;
    let cold = BathSpec::thermal(BathId::Loss, p.t_c, p.gamma_c)?;
    let ret = BathSpec::thermal(BathId::Loss, p.t_c, p.gamma_return)?;
    let mut channels = Vec::with_capacity(7);
    channels.extend(hot.channel_pair(ket_bra(4, B, A), p.omega_a - p.omega_b, 1.0)?);
    channels.extend(cold.channel_pair(ket_bra(4, ALPHA, A), p.omega_a - p.omega_alpha, 1.0)?);
    channels.push(DissipationChannel::new(
        ket_bra(4, BETA, ALPHA),
        p.gamma_load,
        BathId::Sink,
        p.omega_alpha - p.omega_beta,
    )?);
    channels.extend(ret.channel_pair(ket_bra(4, B, BETA), p.omega_beta - p.omega_b, 1.0)?);
    let h = diagonal(&[p.omega_a, p.omega_b, p.omega_alpha, p.omega_beta]);
    LindbladGenerator::new_secular(h, channels)
}
