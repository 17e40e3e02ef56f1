// SPDX-License-Identifier: Apache-2.0

//! Five-level photocell: ground `b`, two donor excitons `x1`, `x2`, and the
//! charge-separated pair `α`, `β`. Recombination from acceptor to donor is
//! not included.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::{diagonal, ket_bra, BathId, DissipationChannel, LindbladGenerator};
use crate::thermo::{bose_occupation, check_positive, check_rate, BathSpec, ThermoReport};

/// Basis order of the generator.
pub const PHOTOCELL_LEVELS: [&str; 5] = ["b", "x1", "x2", "alpha", "beta"];
const B: usize = 0;
const X1: usize = 1;
const X2: usize = 2;
const ALPHA: usize = 3;
const BETA: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotocellParams {
    pub omega_x1: f64,
    pub omega_x2: f64,
    pub omega_alpha: f64,
    pub omega_beta: f64,
    pub omega_b: f64,
    pub gamma_h: f64,
    pub gamma_x: f64,
    pub gamma_c: f64,
    pub gamma_load: f64,
    pub gamma_return: f64,
    pub t_h: f64,
    pub t_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotocellPopulations {
    pub x1: f64,
    pub x2: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PhotocellPopulations {
    /// In generator basis order.
    pub fn as_array(&self) -> [f64; 5] {
        [self.b, self.x1, self.x2, self.alpha, self.beta]
    }
}

impl PhotocellParams {
    /// Same level placement as the donor–acceptor sweep, with `x2` midway
    /// between `α` and `x1`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_gaps(
        omega_abs: f64,
        omega_rc: f64,
        gamma_h: f64,
        gamma_x: f64,
        gamma_c: f64,
        gamma_load: f64,
        gamma_return: f64,
        t_h: f64,
        t_c: f64,
    ) -> Result<Self> {
        let alpha = 0.5 * (omega_abs + omega_rc);
        let p = Self {
            omega_x1: omega_abs,
            omega_x2: alpha + 0.5 * (omega_abs - alpha),
            omega_alpha: alpha,
            omega_beta: 0.5 * (omega_abs - omega_rc),
            omega_b: 0.0,
            gamma_h,
            gamma_x,
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
        if !(self.omega_x1 > self.omega_b) {
            return Err(Error::invalid("omega_x1", "> omega_b"));
        }
        if !(self.omega_x1 > self.omega_x2) {
            return Err(Error::invalid("omega_x2", "< omega_x1"));
        }
        if !(self.omega_x2 > self.omega_alpha) {
            return Err(Error::invalid("omega_alpha", "< omega_x2"));
        }
        if !(self.omega_beta > self.omega_b) {
            return Err(Error::invalid("omega_beta", "> omega_b"));
        }
        check_positive("gamma_h", self.gamma_h)?;
        check_positive("gamma_x", self.gamma_x)?;
        check_positive("gamma_c", self.gamma_c)?;
        check_rate("gamma_load", self.gamma_load)?;
        check_positive("gamma_return", self.gamma_return)?;
        check_positive("t_h", self.t_h)?;
        check_positive("t_c", self.t_c)?;
        Ok(())
    }

    fn occupations(&self) -> Result<[f64; 4]> {
        Ok([
            bose_occupation(self.omega_x1 - self.omega_b, self.t_h)?,
            bose_occupation(self.omega_x1 - self.omega_x2, self.t_c)?,
            bose_occupation(self.omega_x2 - self.omega_alpha, self.t_c)?,
            bose_occupation(self.omega_beta - self.omega_b, self.t_c)?,
        ])
    }
}

struct Solution {
    pops: PhotocellPopulations,
    flux: f64,
}

fn solve(p: &PhotocellParams) -> Result<Solution> {
    p.validate()?;
    let [nh, nx, n2c, big_nc] = p.occupations()?;
    let (gh, gx, gc, g, g_ret) = (p.gamma_h, p.gamma_x, p.gamma_c, p.gamma_load, p.gamma_return);
    if !(nh > 0.0) {
        return Err(Error::invalid("t_h", "large enough for a nonzero excitation rate"));
    }
    let q = gx * nx * (g + gc * n2c) + gc * (1.0 + n2c) * g;
    let load = gx * gc * g * (1.0 + nx) * (1.0 + n2c);
    let d = load + gh * (1.0 + nh) * q;
    // relative to ρ_bb = 1
    let x1 = gh * nh * q / d;
    let x2 = x1 * gx * (1.0 + nx) * (g + gc * n2c) / q;
    let alpha = x2 * gc * (1.0 + n2c) / (g + gc * n2c);
    let flux_rel = gh * nh * load / d;
    let beta = big_nc / (1.0 + big_nc) + flux_rel / (g_ret * (1.0 + big_nc));
    let z = 1.0 + x1 + x2 + alpha + beta;
    if !z.is_finite() || !x2.is_finite() {
        return Err(Error::invalid("t_h", "large enough for a nonzero excitation rate"));
    }
    Ok(Solution {
        pops: PhotocellPopulations {
            x1: x1 / z,
            x2: x2 / z,
            b: 1.0 / z,
            alpha: alpha / z,
            beta: beta / z,
        },
        flux: flux_rel / z,
    })
}

pub fn creatore_steady_state(p: &PhotocellParams) -> Result<PhotocellPopulations> {
    Ok(solve(p)?.pops)
}

/// Steady currents: `J_h = (ω_x1−ω_b) F`, `J_c = −F(ω_x1 − ω_α + ω_β − ω_b)`.
pub fn creatore_currents(p: &PhotocellParams) -> Result<ThermoReport> {
    let flux = solve(p)?.flux;
    let j_h = (p.omega_x1 - p.omega_b) * flux;
    let j_c = -flux * (p.omega_x1 - p.omega_alpha + p.omega_beta - p.omega_b);
    let sink = -flux * (p.omega_alpha - p.omega_beta);
    Ok(ThermoReport::steady(j_h, j_c, sink, sink, p.t_h, p.t_c))
}

/// `1 + (ω_β − ω_α)/(ω_x1 − ω_b)`.
pub fn creatore_ratio(p: &PhotocellParams) -> f64 {
    1.0 + (p.omega_beta - p.omega_alpha) / (p.omega_x1 - p.omega_b)
}

/// Rate equations embedded as a diagonal Lindblad generator on
/// `[b, x1, x2, α, β]`.
pub fn creatore_generator(p: &PhotocellParams) -> Result<LindbladGenerator> {
    p.validate()?;
    let hot = BathSpec::thermal(BathId::Abs, p.t_h, p.gamma_h)?;
    let relax = BathSpec::thermal(BathId::Loss, p.t_c, p.gamma_x)?;
    let cold = BathSpec::thermal(BathId::Loss, p.t_c, p.gamma_c)?;
    let ret = BathSpec::thermal(BathId::Loss, p.t_c, p.gamma_return)?;
    let mut channels = Vec::with_capacity(9);
    channels.extend(hot.channel_pair(ket_bra(5, B, X1), p.omega_x1 - p.omega_b, 1.0)?);
    channels.extend(relax.channel_pair(ket_bra(5, X2, X1), p.omega_x1 - p.omega_x2, 1.0)?);
    channels.extend(cold.channel_pair(ket_bra(5, ALPHA, X2), p.omega_x2 - p.omega_alpha, 1.0)?);
    channels.push(DissipationChannel::new(
        ket_bra(5, BETA, ALPHA),
        p.gamma_load,
        BathId::Sink,
        p.omega_alpha - p.omega_beta,
    )?);
    channels.extend(ret.channel_pair(ket_bra(5, B, BETA), p.omega_beta - p.omega_b, 1.0)?);
    let h = diagonal(&[p.omega_b, p.omega_x1, p.omega_x2, p.omega_alpha, p.omega_beta]);
    LindbladGenerator::new_secular(h, channels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PhotocellParams {
        PhotocellParams {
            omega_x1: 2.0,
            omega_x2: 1.8,
            omega_alpha: 1.5,
            omega_beta: 0.5,
            omega_b: 0.0,
            gamma_h: 0.2,
            gamma_x: 1.0,
            gamma_c: 0.6,
            gamma_load: 0.3,
            gamma_return: 0.4,
            t_h: 3.0,
            t_c: 0.5,
        }
    }

    #[test]
    fn ratio_substitution() {
        let p = params();
        assert!((creatore_ratio(&p) - 0.5).abs() < 1e-15);
        let r = creatore_currents(&p).unwrap();
        assert!((r.ratio - 0.5).abs() < 1e-12);
        assert!(r.first_law_residual().abs() < 1e-15);
    }

    #[test]
    fn level_ordering_enforced() {
        let mut p = params();
        p.omega_x2 = 2.1;
        assert!(p.validate().is_err());
    }

    #[test]
    fn normalized() {
        let s = creatore_steady_state(&params()).unwrap();
        assert!((s.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
