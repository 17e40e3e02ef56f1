// SPDX-License-Identifier: Apache-2.0

//! Antenna + seven-site FMO complex + reaction-centre sink.
//!
//! Energies are in cm⁻¹ with ħ = 1, so one internal time unit is
//! [`PS_PER_TIME_UNIT`] picoseconds. Temperatures are given in kelvin and
//! converted with [`KB_CM_PER_K`].
//!
//! Basis: `|ground⟩, |antenna⟩, |site 1⟩ … |site 7⟩, |sink⟩`.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::{
    ket_bra, propagate, BathId, CMatrix, DensityMatrix, DissipationChannel, LindbladGenerator,
};
use crate::thermo::{
    bose_occupation, check_positive, check_rate, entropy_production, heat_current_of,
};

/// Boltzmann constant in cm⁻¹/K.
pub const KB_CM_PER_K: f64 = 0.6950348;
/// `ħ / (hc · 1 cm⁻¹)` in picoseconds.
pub const PS_PER_TIME_UNIT: f64 = 5.308837458876;

pub const N_SITES: usize = 7;
pub const DIM: usize = N_SITES + 3;
pub const GROUND: usize = 0;
pub const ANTENNA: usize = 1;
pub const SINK: usize = DIM - 1;

/// Basis index of FMO site `m` (1-based).
pub fn site(m: usize) -> usize {
    assert!((1..=N_SITES).contains(&m), "FMO sites are numbered 1..=7");
    m + 1
}

/// Bundled site energies and couplings.
pub const DEFAULT_FMO_DATA: &str = include_str!("../data/fmo_paestuarii.dat");

/// Exciton Hamiltonian of the seven sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmoHamiltonian {
    pub site_energies: [f64; N_SITES],
    pub couplings: [[f64; N_SITES]; N_SITES],
}

impl FmoHamiltonian {
    /// Parses 7 site-energy lines followed by a 7×7 coupling block;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>()
                            .map_err(|_| Error::invalid("FMO data", format!("numeric (bad token {tok:?})")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        if rows.len() != 2 * N_SITES {
            return Err(Error::invalid(
                "FMO data",
                format!("7 energy lines and 7 coupling rows (found {} lines)", rows.len()),
            ));
        }
        let mut site_energies = [0.0; N_SITES];
        for (e, row) in site_energies.iter_mut().zip(&rows[..N_SITES]) {
            if row.len() != 1 {
                return Err(Error::invalid("FMO data", "one site energy per line"));
            }
            *e = row[0];
        }
        let mut couplings = [[0.0; N_SITES]; N_SITES];
        for (i, row) in rows[N_SITES..].iter().enumerate() {
            if row.len() != N_SITES {
                return Err(Error::invalid("FMO data", "7 couplings per row"));
            }
            couplings[i].copy_from_slice(row);
        }
        let h = Self {
            site_energies,
            couplings,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(DEFAULT_FMO_DATA).expect("bundled FMO data is valid")
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..N_SITES {
            if !self.site_energies[i].is_finite() {
                return Err(Error::invalid("site energies", "finite"));
            }
            if self.couplings[i][i] != 0.0 {
                return Err(Error::invalid("couplings", "zero on the diagonal"));
            }
            for j in 0..i {
                if self.couplings[i][j] != self.couplings[j][i] {
                    return Err(Error::invalid("couplings", "symmetric"));
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(N_SITES, N_SITES, |i, j| {
            if i == j {
                self.site_energies[i]
            } else {
                self.couplings[i][j]
            }
        })
    }

    /// Exciton energies (ascending) and eigenvectors, `vectors[(m, k)] = c_km`.
    /// Each eigenvector's largest component is made positive.
    pub fn excitons(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.matrix());
        let mut order: Vec<usize> = (0..N_SITES).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::zeros(N_SITES, N_SITES);
        for (col, &k) in order.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let lead = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            let sign = if lead < 0.0 { -1.0 } else { 1.0 };
            vectors.set_column(col, &(v * sign));
        }
        (energies, vectors)
    }
}

/// Ohmic spectral density with Drude cutoff, `J(ω) = 2λωγ/(ω² + γ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeSpectralDensity {
    /// Reorganization energy λ (cm⁻¹).
    pub reorganization: f64,
    /// Cutoff γ (cm⁻¹).
    pub cutoff: f64,
}

impl DrudeSpectralDensity {
    pub fn at(&self, omega: f64) -> f64 {
        2.0 * self.reorganization * omega * self.cutoff / (omega * omega + self.cutoff * self.cutoff)
    }

    /// Zero-frequency limit of `2J(ω)(1 + n(ω))`, i.e. `4λT/γ`.
    pub fn dephasing_rate(&self, temperature: f64) -> f64 {
        4.0 * self.reorganization * temperature / self.cutoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// All population in the global ground state.
    Ground,
    /// One excitation on the antenna.
    Antenna,
}

/// Full FMO model configuration. Rates are in cm⁻¹, temperatures in K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmoConfig {
    pub hamiltonian: FmoHamiltonian,
    pub omega_ant: f64,
    pub n_pigments: u32,
    /// Debye.
    pub mu_ant_ind: f64,
    /// Debye.
    pub mu_fmo: f64,
    pub lambda_geo: f64,
    pub t_sun: f64,
    pub t_loss: f64,
    pub gamma_sink: f64,
    pub gamma_ant_fmo: f64,
    /// Radiative rate of a single dipole of strength `mu_fmo`.
    pub radiative_rate: f64,
    pub spectral_density: DrudeSpectralDensity,
    pub initial_state: InitialState,
}

impl FmoConfig {
    pub fn validate(&self) -> Result<()> {
        self.hamiltonian.validate()?;
        check_positive("omega_ant", self.omega_ant)?;
        if self.n_pigments == 0 {
            return Err(Error::invalid("n_pigments", ">= 1"));
        }
        check_positive("mu_ant_ind", self.mu_ant_ind)?;
        check_positive("mu_fmo", self.mu_fmo)?;
        check_positive("lambda_geo", self.lambda_geo)?;
        if self.lambda_geo > 1.0 {
            return Err(Error::invalid("lambda_geo", "<= 1"));
        }
        check_positive("t_sun", self.t_sun)?;
        check_positive("t_loss", self.t_loss)?;
        check_rate("gamma_sink", self.gamma_sink)?;
        check_rate("gamma_ant_fmo", self.gamma_ant_fmo)?;
        check_rate("radiative_rate", self.radiative_rate)?;
        check_positive("reorganization", self.spectral_density.reorganization)?;
        check_positive("cutoff", self.spectral_density.cutoff)?;
        let (energies, _) = self.hamiltonian.excitons();
        if energies.iter().any(|&e| !(e > 0.0) || !(e < self.omega_ant)) {
            return Err(Error::invalid("omega_ant", "above every exciton energy (and excitons > 0)"));
        }
        Ok(())
    }

    /// Effective absorption temperature in K.
    pub fn t_abs(&self) -> Result<f64> {
        effective_sun_temperature(self.omega_ant, self.t_sun, self.lambda_geo)
    }
}

/// Temperature of diluted black-body radiation: `e^{−ω/T_abs} = λn/(λn + 1)`
/// with `n` the occupation at the source temperature. `omega` in cm⁻¹,
/// temperatures in K.
pub fn effective_sun_temperature(omega: f64, t_sun: f64, lambda_geo: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("t_sun", t_sun)?;
    check_positive("lambda_geo", lambda_geo)?;
    let x = omega / (KB_CM_PER_K * t_sun);
    // ω/T_abs = ln(1 + (e^x − 1)/λ)
    let log_term = if x > 1.0 {
        x + ((lambda_geo - 1.0) * (-x).exp()).ln_1p() - lambda_geo.ln()
    } else {
        (x.exp_m1() / lambda_geo).ln_1p()
    };
    Ok(omega / (KB_CM_PER_K * log_term))
}

fn thermal_pair(
    dim: usize,
    lower: usize,
    upper: usize,
    amplitude: f64,
    omega: f64,
    base_rate: f64,
    temperature: f64,
    bath: BathId,
) -> Result<[DissipationChannel; 2]> {
    let n = bose_occupation(omega, temperature)?;
    let down = vec![(lower, upper, Complex64::new(amplitude, 0.0))];
    let up = vec![(upper, lower, Complex64::new(amplitude, 0.0))];
    Ok([
        DissipationChannel::from_entries(dim, down, base_rate * (1.0 + n), bath, omega)?,
        DissipationChannel::from_entries(dim, up, base_rate * n, bath, -omega)?,
    ])
}

/// Assembles the dim-10 generator (site basis).
///
/// Channels: radiative absorption/emission on ground↔antenna and
/// ground↔excitons (abs); secular exciton relaxation, pure dephasing and
/// antenna→exciton transfer (loss); `|sink⟩⟨site 3|` (sink).
pub fn build_fmo_generator(cfg: &FmoConfig) -> Result<LindbladGenerator> {
    cfg.validate()?;
    let t_abs = KB_CM_PER_K * cfg.t_abs()?;
    let t_loss = KB_CM_PER_K * cfg.t_loss;
    let (energies, c) = cfg.hamiltonian.excitons();

    // exciton k in the site basis
    let exciton = |k: usize| -> Vec<(usize, f64)> { (0..N_SITES).map(|m| (site(m + 1), c[(m, k)])).collect() };
    // |i⟩⟨exciton k| style operators built from (row, col) amplitudes
    let entries = |pairs: Vec<(usize, usize, f64)>| -> Vec<(usize, usize, Complex64)> {
        pairs
            .into_iter()
            .filter(|&(_, _, v)| v != 0.0)
            .map(|(i, j, v)| (i, j, Complex64::new(v, 0.0)))
            .collect()
    };

    let mut h = CMatrix::zeros(DIM, DIM);
    h[(ANTENNA, ANTENNA)] = Complex64::new(cfg.omega_ant, 0.0);
    let hm = cfg.hamiltonian.matrix();
    for i in 0..N_SITES {
        for j in 0..N_SITES {
            h[(site(i + 1), site(j + 1))] = Complex64::new(hm[(i, j)], 0.0);
        }
    }

    let mut channels = Vec::new();

    // radiation
    let mu_ratio = cfg.mu_ant_ind / cfg.mu_fmo;
    let antenna_rate = cfg.radiative_rate * f64::from(cfg.n_pigments) * mu_ratio * mu_ratio;
    channels.extend(thermal_pair(
        DIM,
        GROUND,
        ANTENNA,
        1.0,
        cfg.omega_ant,
        antenna_rate,
        t_abs,
        BathId::Abs,
    )?);
    for k in 0..N_SITES {
        let dipole: f64 = (0..N_SITES).map(|m| c[(m, k)]).sum();
        let rate = cfg.radiative_rate * dipole * dipole;
        if rate == 0.0 {
            continue;
        }
        let n = bose_occupation(energies[k], t_abs)?;
        let down = entries(exciton(k).into_iter().map(|(i, v)| (GROUND, i, v)).collect());
        let up = entries(exciton(k).into_iter().map(|(i, v)| (i, GROUND, v)).collect());
        channels.push(DissipationChannel::from_entries(DIM, down, rate * (1.0 + n), BathId::Abs, energies[k])?);
        channels.push(DissipationChannel::from_entries(DIM, up, rate * n, BathId::Abs, -energies[k])?);
    }

    // vibrations: secular relaxation between excitons
    let sd = cfg.spectral_density;
    for k in 0..N_SITES {
        for l in 0..N_SITES {
            let omega = energies[k] - energies[l];
            if !(omega > 0.0) {
                continue;
            }
            let weight: f64 = (0..N_SITES).map(|m| c[(m, k)].powi(2) * c[(m, l)].powi(2)).sum();
            let n = bose_occupation(omega, t_loss)?;
            let base = 2.0 * sd.at(omega) * weight;
            // |l⟩⟨k| = Σ_{m,m'} c_lm c_km' |m⟩⟨m'|
            let mut down = Vec::new();
            for (i, a) in exciton(l) {
                for (j, b) in exciton(k) {
                    down.push((i, j, a * b));
                }
            }
            let up: Vec<_> = down.iter().map(|&(i, j, v)| (j, i, v)).collect();
            channels.push(DissipationChannel::from_entries(DIM, entries(down), base * (1.0 + n), BathId::Loss, omega)?);
            channels.push(DissipationChannel::from_entries(DIM, entries(up), base * n, BathId::Loss, -omega)?);
        }
    }
    // pure dephasing, one channel per site fluctuation projected on the exciton diagonal
    let deph = sd.dephasing_rate(t_loss);
    for m in 0..N_SITES {
        let mut op = Vec::new();
        for k in 0..N_SITES {
            let w = c[(m, k)].powi(2);
            for (i, a) in exciton(k) {
                for (j, b) in exciton(k) {
                    op.push((i, j, w * a * b));
                }
            }
        }
        // merge duplicates
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for (i, j, v) in op {
            *merged.entry((i, j)).or_default() += v;
        }
        let op = merged.into_iter().filter(|(_, v)| v.abs() > 1e-15).map(|((i, j), v)| (i, j, v)).collect();
        channels.push(DissipationChannel::from_entries(DIM, entries(op), deph, BathId::Loss, 0.0)?);
    }
    // vibration-assisted antenna → exciton transfer
    for k in 0..N_SITES {
        let omega = cfg.omega_ant - energies[k];
        let n = bose_occupation(omega, t_loss)?;
        let down = entries(exciton(k).into_iter().map(|(i, v)| (i, ANTENNA, v)).collect());
        let up = entries(exciton(k).into_iter().map(|(i, v)| (ANTENNA, i, v)).collect());
        let g = cfg.gamma_ant_fmo;
        channels.push(DissipationChannel::from_entries(DIM, down, g * (1.0 + n), BathId::Loss, omega)?);
        channels.push(DissipationChannel::from_entries(DIM, up, g * n, BathId::Loss, -omega)?);
    }

    // trap
    channels.push(DissipationChannel::new(
        ket_bra(DIM, SINK, site(3)),
        cfg.gamma_sink,
        BathId::Sink,
        cfg.hamiltonian.site_energies[2],
    )?);

    LindbladGenerator::new(h, channels)
}

pub fn initial_state(cfg: &FmoConfig) -> DensityMatrix {
    match cfg.initial_state {
        InitialState::Ground => DensityMatrix::pure(DIM, GROUND),
        InitialState::Antenna => DensityMatrix::pure(DIM, ANTENNA),
    }
}

/// One output row of the entropy-production trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmoPoint {
    pub t_ps: f64,
    /// cm⁻¹ per ps.
    pub j_abs: f64,
    pub j_loss: f64,
    pub sink_flow: f64,
    /// ps⁻¹ (k_B = 1).
    pub sigma: f64,
}

/// Converts a picosecond grid to internal time units.
pub fn to_internal_time(t_ps: &[f64]) -> Vec<f64> {
    t_ps.iter().map(|t| t / PS_PER_TIME_UNIT).collect()
}

/// Currents and entropy production of a state under `gen`.
pub fn fmo_point(gen: &LindbladGenerator, cfg: &FmoConfig, rho: &DensityMatrix, t_ps: f64) -> Result<FmoPoint> {
    let t_abs = KB_CM_PER_K * cfg.t_abs()?;
    let t_loss = KB_CM_PER_K * cfg.t_loss;
    let m = rho.matrix();
    let j_abs = heat_current_of(gen, BathId::Abs, m)?;
    let j_loss = heat_current_of(gen, BathId::Loss, m)?;
    let sink_flow = if gen.has_bath(BathId::Sink) {
        heat_current_of(gen, BathId::Sink, m)?
    } else {
        0.0
    };
    let rho_dot = gen.apply_matrix(m)?;
    let sigma = entropy_production(rho, &rho_dot, (j_abs, j_loss), (t_abs, t_loss))?;
    Ok(FmoPoint {
        t_ps,
        j_abs: j_abs / PS_PER_TIME_UNIT,
        j_loss: j_loss / PS_PER_TIME_UNIT,
        sink_flow: sink_flow / PS_PER_TIME_UNIT,
        sigma: sigma / PS_PER_TIME_UNIT,
    })
}

/// Propagates the configured initial state over `t_ps` (picoseconds).
pub fn fmo_trajectory(cfg: &FmoConfig, t_ps: &[f64]) -> Result<Vec<DensityMatrix>> {
    let gen = build_fmo_generator(cfg)?;
    propagate(&gen, &initial_state(cfg), &to_internal_time(t_ps))
}

/// Entropy production time series.
pub fn sigma_trace(cfg: &FmoConfig, t_ps: &[f64]) -> Result<Vec<FmoPoint>> {
    let gen = build_fmo_generator(cfg)?;
    let states = propagate(&gen, &initial_state(cfg), &to_internal_time(t_ps))?;
    states
        .iter()
        .zip(t_ps)
        .map(|(rho, &t)| fmo_point(&gen, cfg, rho, t))
        .collect()
}
