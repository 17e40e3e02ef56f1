// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian transfer scheme: the |0⟩↔|1⟩ transition of the toy absorber
//! is coupled coherently to an oscillator `ω_rc c†c` (the bosonized reaction
//! centre), `√Γ (c|1⟩⟨0| + c†|0⟩⟨1|)`. Energy extraction is the net growth
//! of the oscillator population.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::toy::ToyParams;
use crate::error::{Error, Result};
use crate::qdyn::{diagonal, BathId, CMatrix, DensityMatrix, DissipationChannel, LindbladGenerator};
use crate::thermo::{bose_occupation, ThermoReport};

/// Birth (`s`) and death (`r`) rates of the oscillator ladder, with
/// `s − r = k1 (e^{−ω_h/T_abs} − e^{−ω_c/T_loss})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathRates {
    pub s: f64,
    pub r: f64,
    pub k1: f64,
}

impl BirthDeathRates {
    pub fn net(&self) -> f64 {
        self.s - self.r
    }
}

/// Steady populations of the three-level system in the dressed picture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamPopulations {
    pub plus: f64,
    pub minus: f64,
    pub excited: f64,
}

pub fn ham_populations(p: &ToyParams) -> Result<HamPopulations> {
    p.validate_weak_coupling()?;
    let (gh, gc) = (p.gamma_h(), p.gamma_c());
    let (nh, nc) = (p.n_hot()?, p.n_cold()?);
    let den = gh * (1.0 + nh) + gc * (1.0 + nc);
    if !(den > 0.0) {
        return Err(Error::invalid("gamma_h + gamma_c", "> 0"));
    }
    let x = (gh * nh + gc * nc) / den;
    let rho_pm = 1.0 / (2.0 + x);
    Ok(HamPopulations {
        plus: rho_pm,
        minus: rho_pm,
        excited: x * rho_pm,
    })
}

pub fn birth_death_rates(p: &ToyParams) -> Result<BirthDeathRates> {
    let pops = ham_populations(p)?;
    let (gh, gc) = (p.gamma_h(), p.gamma_c());
    let (nh, nc) = (p.n_hot()?, p.n_cold()?);
    let den = gh * (1.0 + nh) + gc * (1.0 + nc);
    Ok(BirthDeathRates {
        s: 0.5 * gh * nh * (pops.plus + pops.minus),
        r: gh * (1.0 + nh) * pops.excited,
        k1: gh * gc * pops.plus * (1.0 + nh) * (1.0 + nc) / den,
    })
}

/// `s − r` written directly as `Γ_hΓ_c ρ₊ (n_h − n_c)/(Γ_h(1+n_h) + Γ_c(1+n_c))`,
/// which avoids the cancellation in `s − r` near the power boundary.
pub fn net_birth_rate(p: &ToyParams) -> Result<f64> {
    let pops = ham_populations(p)?;
    let (gh, gc) = (p.gamma_h(), p.gamma_c());
    let (nh, nc) = (p.n_hot()?, p.n_cold()?);
    Ok(gh * gc * pops.plus * (nh - nc) / (gh * (1.0 + nh) + gc * (1.0 + nc)))
}

/// Closed-form steady-state currents of the Hamiltonian scheme.
pub fn toy_ham_report(p: &ToyParams) -> Result<ThermoReport> {
    let net = net_birth_rate(p)?;
    Ok(ThermoReport::steady(
        p.omega_hot() * net,
        -p.omega_cold() * net,
        -p.omega_rc * net,
        0.0,
        p.t_abs,
        p.t_loss,
    ))
}

/// Dressed splitting `Ω_n = 2√(Γ(n+1))`.
pub fn dressed_spectrum(n: usize, gamma: f64) -> Result<f64> {
    crate::thermo::check_positive("gamma", gamma)?;
    Ok(2.0 * (gamma * (n as f64 + 1.0)).sqrt())
}

/// Which frequency the bath occupations of the dressed generator use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumModel {
    /// Occupations at the bare gaps `ω_abs ± ω_rc/2` (flat bath spectrum).
    Flat,
    /// Occupations at the exact dressed Bohr frequencies.
    Dressed,
}

/// Eigenstates of the coupled absorber + oscillator Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressedLabel {
    /// `|0, 0⟩`, the only uncoupled ground-manifold state.
    Ground,
    /// `(|0, n+1⟩ − |1, n⟩)/√2`.
    Minus(usize),
    /// `(|1, n⟩ + |0, n+1⟩)/√2`.
    Plus(usize),
    /// `|1, n_max⟩`, left unpaired by the truncation.
    Top,
    /// `|2, m⟩`.
    Excited(usize),
}

fn bare_index(level: usize, m: usize) -> usize {
    3 * m + level
}

/// Hamiltonian in the product basis `|s, m⟩` (index `3m + s`), shifted by
/// `−j ω_rc` so that the oscillator vacuum sits at `−j ω_rc`.
pub fn bare_hamiltonian(p: &ToyParams, n_max: usize, j_shift: f64) -> CMatrix {
    let d = 3 * (n_max + 1);
    let mut h = CMatrix::zeros(d, d);
    let diag = p.hamiltonian_diag();
    for m in 0..=n_max {
        for s in 0..3 {
            let i = bare_index(s, m);
            h[(i, i)] = Complex64::new(diag[s] + p.omega_rc * (m as f64 - j_shift), 0.0);
        }
        if m < n_max {
            let g = Complex64::new((p.gamma * (m as f64 + 1.0)).sqrt(), 0.0);
            let (a, b) = (bare_index(1, m), bare_index(0, m + 1));
            h[(a, b)] = g;
            h[(b, a)] = g;
        }
    }
    h
}

/// Numeric dressed-basis model of the Hamiltonian scheme.
#[derive(Debug, Clone)]
pub struct DressedModel {
    params: ToyParams,
    n_max: usize,
    mode: SpectrumModel,
    labels: Vec<DressedLabel>,
    /// Columns are the dressed states in the product basis.
    basis: CMatrix,
    generator: LindbladGenerator,
}

/// Three-level dressed marginal in the bulk of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamMarginal {
    pub populations: HamPopulations,
    /// `d⟨c†c⟩/dt`.
    pub growth_rate: f64,
    pub j_abs: f64,
    pub j_loss: f64,
}

/// Builds the secular Lindblad generator of absorber + oscillator in the
/// dressed eigenbasis. There is no sink: energy accumulates in the oscillator.
pub fn toy_ham_generator(p: &ToyParams, n_max: usize, mode: SpectrumModel) -> Result<DressedModel> {
    p.validate_weak_coupling()?;
    if n_max < 10 {
        return Err(Error::invalid("n_max", ">= 10"));
    }
    let dim = 3 * (n_max + 1);
    let mut labels = vec![DressedLabel::Ground];
    for n in 0..n_max {
        labels.push(DressedLabel::Minus(n));
        labels.push(DressedLabel::Plus(n));
    }
    labels.push(DressedLabel::Top);
    labels.extend((0..=n_max).map(DressedLabel::Excited));

    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut basis = CMatrix::zeros(dim, dim);
    let mut energies = Vec::with_capacity(dim);
    let diag = p.hamiltonian_diag();
    for (k, label) in labels.iter().enumerate() {
        let e = match *label {
            DressedLabel::Ground => {
                basis[(bare_index(0, 0), k)] = Complex64::new(1.0, 0.0);
                diag[0]
            }
            DressedLabel::Top => {
                basis[(bare_index(1, n_max), k)] = Complex64::new(1.0, 0.0);
                diag[1] + p.omega_rc * n_max as f64
            }
            DressedLabel::Excited(m) => {
                basis[(bare_index(2, m), k)] = Complex64::new(1.0, 0.0);
                diag[2] + p.omega_rc * m as f64
            }
            DressedLabel::Plus(n) => {
                basis[(bare_index(1, n), k)] = s;
                basis[(bare_index(0, n + 1), k)] = s;
                p.omega_rc * (n as f64 + 0.5) + 0.5 * dressed_spectrum(n, p.gamma)?
            }
            DressedLabel::Minus(n) => {
                basis[(bare_index(1, n), k)] = -s;
                basis[(bare_index(0, n + 1), k)] = s;
                p.omega_rc * (n as f64 + 0.5) - 0.5 * dressed_spectrum(n, p.gamma)?
            }
        };
        energies.push(e);
    }

    let mut channels = Vec::new();
    let couplings = [
        (0usize, BathId::Abs, p.t_abs, p.gamma_h(), p.omega_hot()),
        (1usize, BathId::Loss, p.t_loss, p.gamma_c(), p.omega_cold()),
    ];
    for (lower, bath, temp, rate, nominal) in couplings {
        let mut op = CMatrix::zeros(dim, dim);
        for m in 0..=n_max {
            op[(bare_index(lower, m), bare_index(2, m))] = Complex64::new(1.0, 0.0);
        }
        let dressed_op = basis.adjoint() * op * &basis;
        for e in 0..dim {
            for d in 0..dim {
                let amp = dressed_op[(d, e)];
                if amp.norm() < 1e-12 {
                    continue;
                }
                let gap = energies[e] - energies[d];
                if !(gap > 0.0) {
                    return Err(Error::invalid("gamma", "small enough that dressed transition frequencies stay positive"));
                }
                let occ_freq = match mode {
                    SpectrumModel::Flat => nominal,
                    SpectrumModel::Dressed => gap,
                };
                if rate == 0.0 {
                    continue;
                }
                let n = bose_occupation(occ_freq, temp)?;
                channels.push(DissipationChannel::from_entries(dim, vec![(e, d, amp.conj())], rate * n, bath, -gap)?);
                channels.push(DissipationChannel::from_entries(dim, vec![(d, e, amp)], rate * (1.0 + n), bath, gap)?);
            }
        }
    }
    let generator = LindbladGenerator::new_secular(diagonal(&energies), channels)?;
    Ok(DressedModel {
        params: *p,
        n_max,
        mode,
        labels,
        basis,
        generator,
    })
}

/// `−Σ p ln p` terms of a classical mutual information.
fn mutual_information(joint: &DMatrix<f64>) -> f64 {
    let rows: DVector<f64> = joint.column_sum();
    let cols = joint.row_sum();
    let mut mi = 0.0;
    for i in 0..joint.nrows() {
        for j in 0..joint.ncols() {
            let pij = joint[(i, j)];
            if pij > 0.0 {
                mi += pij * (pij / (rows[i] * cols[j])).ln();
            }
        }
    }
    mi.max(0.0)
}

impl DressedModel {
    pub fn params(&self) -> &ToyParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mode(&self) -> SpectrumModel {
        self.mode
    }

    pub fn generator(&self) -> &LindbladGenerator {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[DressedLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: DressedLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Unitary whose columns are the dressed states in the product basis.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Dressed-basis matrix in the product basis.
    pub fn to_bare(&self, rho: &CMatrix) -> CMatrix {
        &self.basis * rho * self.basis.adjoint()
    }

    /// `c†c` expressed in the dressed basis.
    pub fn number_operator(&self) -> CMatrix {
        let dim = self.dim();
        let mut n = CMatrix::zeros(dim, dim);
        for m in 0..=self.n_max {
            for s in 0..3 {
                let i = bare_index(s, m);
                n[(i, i)] = Complex64::new(m as f64, 0.0);
            }
        }
        self.basis.adjoint() * n * &self.basis
    }

    /// Oscillator occupation distribution `P(m)`.
    pub fn oscillator_distribution(&self, rho: &DensityMatrix) -> Vec<f64> {
        let bare = self.to_bare(rho.matrix());
        (0..=self.n_max)
            .map(|m| (0..3).map(|s| bare[(bare_index(s, m), bare_index(s, m))].re).sum())
            .collect()
    }

    /// Fails when the top oscillator level holds more than `1e-6`.
    pub fn check_truncation(&self, rho: &DensityMatrix) -> Result<()> {
        let population = self.oscillator_distribution(rho)[self.n_max];
        if population > 1e-6 {
            return Err(Error::TruncationOverflow {
                n_max: self.n_max,
                population,
            });
        }
        Ok(())
    }

    /// Classical mutual information (nats) between the dressed label
    /// (`+`, `−`, `2`, edge) and the manifold index of a dressed-diagonal state.
    pub fn label_mutual_information(&self, rho: &DensityMatrix) -> f64 {
        let mut joint = DMatrix::<f64>::zeros(4, self.n_max + 1);
        for (k, label) in self.labels.iter().enumerate() {
            let p = rho.matrix()[(k, k)].re.max(0.0);
            let (class, n) = match *label {
                DressedLabel::Plus(n) => (0, n),
                DressedLabel::Minus(n) => (1, n),
                DressedLabel::Excited(m) => (2, m),
                DressedLabel::Ground => (3, 0),
                DressedLabel::Top => (3, self.n_max),
            };
            joint[(class, n)] += p;
        }
        mutual_information(&joint)
    }

    /// Reduces the dynamics to the three dressed labels around manifold `n0`
    /// (rates are taken from the generator acting on `|+,n0⟩`, `|−,n0⟩` and
    /// `|2,n0⟩`), solves for their stationary distribution and evaluates the
    /// oscillator growth rate and bath currents in that state.
    pub fn marginal(&self, n0: usize) -> Result<HamMarginal> {
        if n0 == 0 || n0 + 1 >= self.n_max {
            return Err(Error::invalid("n0", "inside the ladder (1 <= n0 < n_max - 1)"));
        }
        let sources = [
            DressedLabel::Plus(n0),
            DressedLabel::Minus(n0),
            DressedLabel::Excited(n0),
        ];
        let class = |l: DressedLabel| match l {
            DressedLabel::Plus(_) => Some(0),
            DressedLabel::Minus(_) => Some(1),
            DressedLabel::Excited(_) => Some(2),
            _ => None,
        };
        let dim = self.dim();
        let number = self.number_operator();
        let h = self.generator.hamiltonian();
        let mut rates = DMatrix::<f64>::zeros(3, 3);
        let mut growth = [0.0; 3];
        let mut j_abs = [0.0; 3];
        let mut j_loss = [0.0; 3];
        for (a, &label) in sources.iter().enumerate() {
            let k = self.index_of(label).expect("bulk label");
            let mut proj = CMatrix::zeros(dim, dim);
            proj[(k, k)] = Complex64::new(1.0, 0.0);
            let flow = self.generator.apply_matrix(&proj)?;
            for (t, &target) in self.labels.iter().enumerate() {
                let f = flow[(t, t)].re;
                match class(target) {
                    Some(c) => rates[(c, a)] += f,
                    None if f != 0.0 => return Err(Error::invalid("n0", "away from the ladder edges")),
                    None => {}
                }
            }
            growth[a] = (&number * &flow).trace().re;
            j_abs[a] = (self.generator.bath_action(BathId::Abs, &proj)? * h).trace().re;
            j_loss[a] = (self.generator.bath_action(BathId::Loss, &proj)? * h).trace().re;
        }
        // stationary vector: replace the last balance equation by normalization
        let mut m = rates.clone();
        for j in 0..3 {
            m[(2, j)] = 1.0;
        }
        let rhs = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let p = m.lu().solve(&rhs).ok_or(Error::NoConvergence)?;
        let dot = |v: &[f64; 3]| p[0] * v[0] + p[1] * v[1] + p[2] * v[2];
        Ok(HamMarginal {
            populations: HamPopulations {
                plus: p[0],
                minus: p[1],
                excited: p[2],
            },
            growth_rate: dot(&growth),
            j_abs: dot(&j_abs),
            j_loss: dot(&j_loss),
        })
    }

    /// Product of the bulk marginal with a given oscillator distribution,
    /// as a dressed-diagonal state.
    pub fn product_state(&self, label_pops: &HamPopulations, oscillator: &[f64]) -> Result<DensityMatrix> {
        let mut pops = vec![0.0; self.dim()];
        for (k, label) in self.labels.iter().enumerate() {
            pops[k] = match *label {
                DressedLabel::Plus(n) => label_pops.plus * oscillator.get(n).copied().unwrap_or(0.0),
                DressedLabel::Minus(n) => label_pops.minus * oscillator.get(n).copied().unwrap_or(0.0),
                DressedLabel::Excited(m) => label_pops.excited * oscillator.get(m).copied().unwrap_or(0.0),
                _ => 0.0,
            };
        }
        let total: f64 = pops.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("oscillator distribution", "nonzero on the ladder"));
        }
        pops.iter_mut().for_each(|x| *x /= total);
        DensityMatrix::from_populations(&pops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn params() -> ToyParams {
        ToyParams::new(1.0, 0.5, 0.001, 2.0, 0.2).unwrap()
    }

    #[test]
    fn splitting_values() {
        assert!((dressed_spectrum(0, 0.25).unwrap() - 1.0).abs() < 1e-15);
        assert!((dressed_spectrum(3, 1.0).unwrap() - 4.0).abs() < 1e-15);
        assert!(dressed_spectrum(0, 0.0).is_err());
    }

    #[test]
    fn power_sign_example() {
        let r = toy_ham_report(&params()).unwrap();
        assert!(r.power < 0.0);
        assert!(r.sigma >= -1e-9);
        assert!((r.first_law_residual()).abs() < 1e-15);
    }

    #[test]
    fn single_bath_gives_no_power() {
        let mut p = params();
        p.t_loss = p.t_abs;
        let r = birth_death_rates(&p).unwrap();
        assert!(r.net() < 0.0);
        assert!(toy_ham_report(&p).unwrap().power > 0.0);
    }

    #[test]
    fn rate_and_k1_forms_agree() {
        let p = params();
        let r = birth_death_rates(&p).unwrap();
        let boltz = (-p.omega_hot() / p.t_abs).exp() - (-p.omega_cold() / p.t_loss).exp();
        assert!((r.net() - r.k1 * boltz).abs() < 1e-15);
        assert!((r.net() - net_birth_rate(&p).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn basis_diagonalizes_bare_hamiltonian() {
        let p = ToyParams::new(1.0, 1.0, 0.01, 1.0, 0.5).unwrap();
        let model = toy_ham_generator(&p, 10, SpectrumModel::Flat).unwrap();
        let u = model.basis();
        let unitary_defect = crate::qdyn::max_abs(&(u.adjoint() * u - CMatrix::identity(33, 33)));
        assert!(unitary_defect < 1e-14);
        let h = u.adjoint() * bare_hamiltonian(&p, 10, 0.0) * u;
        let defect = crate::qdyn::max_abs(&(h - model.generator().hamiltonian()));
        assert!(defect < 1e-13);
    }

    #[test]
    fn numeric_diagonalization_matches_dressed_energies() {
        let (n_max, j) = (10usize, 3.0);
        let p = ToyParams::new(1.3, 1.0, 0.02, 1.0, 0.5).unwrap();
        let eig = SymmetricEigen::new(bare_hamiltonian(&p, n_max, j));
        let mut numeric: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let mut expected = vec![-0.5 - j, 0.5 + n_max as f64 - j];
        for n in 0..n_max {
            let w = dressed_spectrum(n, p.gamma).unwrap();
            let c = n as f64 + 0.5 - j;
            expected.extend([c + w / 2.0, c - w / 2.0]);
        }
        expected.extend((0..=n_max).map(|m| 1.3 + m as f64 - j));
        expected.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_small_ladder_and_strong_coupling() {
        let p = params();
        assert!(toy_ham_generator(&p, 5, SpectrumModel::Flat).is_err());
        let strong = ToyParams::new(1.0, 0.5, 0.1, 2.0, 0.2).unwrap();
        assert!(toy_ham_generator(&strong, 20, SpectrumModel::Flat).is_err());
    }

    #[test]
    fn no_bath_coupling_is_static() {
        let p = params().with_bath_rates(0.0, 0.0).unwrap();
        let model = toy_ham_generator(&p, 10, SpectrumModel::Flat).unwrap();
        assert!(model.generator().channels().is_empty());
        let k = model.index_of(DressedLabel::Plus(3)).unwrap();
        let rho = DensityMatrix::pure(model.dim(), k);
        let out = crate::qdyn::propagate(model.generator(), &rho, &[0.0, 1.0, 10.0]).unwrap();
        for s in &out {
            assert!(crate::qdyn::max_abs(&(s.matrix() - rho.matrix())) < 1e-12);
        }
    }
}
