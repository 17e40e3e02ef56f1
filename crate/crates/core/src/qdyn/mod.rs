// SPDX-License-Identifier: Apache-2.0

//! Dense density matrices and GKLS generators.
//!
//! The generator is `ρ̇ = −i[H, ρ] + Σₖ γₖ (Aₖ ρ Aₖ† − ½{Aₖ†Aₖ, ρ})`. Each
//! channel carries the bath it belongs to so that heat currents can be split
//! per reservoir later on.

mod propagate;
mod steady;
mod superop;

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use propagate::{propagate, propagate_with_step, step_size};
pub use steady::{steady_state, MAX_DENSE_DIM};
pub use superop::Superoperator;

pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance for states and Hamiltonians, relative to `max(1, ‖·‖max)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a state's trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below this are a genuine positivity violation.
pub const POSITIVITY_FLOOR: f64 = -1e-9;

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest absolute entry of `m − m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub(crate) fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `|i⟩⟨j|` in dimension `dim`.
pub fn ket_bra(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// `|a⟩⟨b|` for arbitrary vectors.
pub fn outer(a: &nalgebra::DVector<Complex64>, b: &nalgebra::DVector<Complex64>) -> CMatrix {
    a * b.adjoint()
}

pub fn diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// A validated system state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (down to [`POSITIVITY_FLOOR`]).
    pub fn new(entries: CMatrix) -> Result<Self> {
        check_square(&entries)?;
        let scale = max_abs(&entries).max(1.0);
        let deviation = hermiticity_defect(&entries);
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                what: "density matrix",
                deviation,
            });
        }
        let trace = entries.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotUnit { trace });
        }
        let min = min_eigenvalue(&hermitize(&entries));
        if min < POSITIVITY_FLOOR {
            return Err(Error::NegativeEigenvalue {
                value: min,
                time: None,
            });
        }
        Ok(Self { entries })
    }

    pub fn pure(dim: usize, index: usize) -> Self {
        Self {
            entries: ket_bra(dim, index, index),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Diagonal state from populations; they must be nonnegative and sum to one.
    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        Self::new(diagonal(populations))
    }

    /// Symmetrizes, floors eigenvalues in `[POSITIVITY_FLOOR, 0)` to zero and
    /// renormalizes. Eigenvalues below the floor are rejected.
    pub fn repaired(raw: &CMatrix) -> Result<Self> {
        check_square(raw)?;
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time: f64::NAN });
        }
        let mut m = hermitize(raw);
        let eig = SymmetricEigen::new(m.clone());
        let min = eig.eigenvalues.min();
        if min < POSITIVITY_FLOOR {
            return Err(Error::NegativeEigenvalue {
                value: min,
                time: None,
            });
        }
        if min < 0.0 {
            let floored = eig.eigenvalues.map(|v| v.max(0.0));
            let d = CMatrix::from_diagonal(&floored.map(|v| Complex64::new(v, 0.0)));
            m = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
            m = hermitize(&m);
        }
        let trace = m.trace().re;
        if !(trace > 0.0) {
            return Err(Error::TraceNotUnit { trace });
        }
        if (trace - 1.0).abs() > f64::EPSILON {
            m /= Complex64::new(trace, 0.0);
        }
        Ok(Self { entries: m })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `Tr[O ρ]`.
    pub fn expectation(&self, observable: &CMatrix) -> Complex64 {
        (observable * &self.entries).trace()
    }
}

pub(crate) fn min_eigenvalue(hermitian: &CMatrix) -> f64 {
    SymmetricEigen::new(hermitian.clone()).eigenvalues.min()
}

/// Reservoir a channel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BathId {
    Abs,
    Loss,
    Sink,
}

impl fmt::Display for BathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BathId::Abs => "abs",
            BathId::Loss => "loss",
            BathId::Sink => "sink",
        })
    }
}

/// Nonzero entries `(row, col, value)` of a square operator.
pub(crate) type Entries = Vec<(usize, usize, Complex64)>;

pub(crate) fn nonzero_entries(m: &CMatrix) -> Entries {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// One GKLS channel `γ D[A]`. Jumps are stored sparsely since most are a
/// handful of matrix elements.
#[derive(Debug, Clone)]
pub struct DissipationChannel {
    dim: usize,
    jump: Entries,
    jump_dag_jump: Entries,
    rate: f64,
    bath: BathId,
    bohr_frequency: f64,
}

impl DissipationChannel {
    pub fn new(jump: CMatrix, rate: f64, bath: BathId, bohr_frequency: f64) -> Result<Self> {
        let dim = check_square(&jump)?;
        Self::from_entries(dim, nonzero_entries(&jump), rate, bath, bohr_frequency)
    }

    /// Builds a channel from the nonzero entries `(row, col, value)` of its jump.
    pub fn from_entries(
        dim: usize,
        entries: Vec<(usize, usize, Complex64)>,
        rate: f64,
        bath: BathId,
        bohr_frequency: f64,
    ) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidRate { rate });
        }
        if let Some(&(i, j, _)) = entries.iter().find(|&&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: i.max(j) + 1,
            });
        }
        // (A†A)_{jl} = Σ_i conj(A_ij) A_il
        let mut products: std::collections::BTreeMap<(usize, usize), Complex64> = Default::default();
        for &(i, j, a) in &entries {
            for &(k, l, b) in &entries {
                if i == k {
                    *products.entry((j, l)).or_default() += a.conj() * b;
                }
            }
        }
        let jump_dag_jump = products
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .map(|((j, l), v)| (j, l, v))
            .collect();
        Ok(Self {
            dim,
            jump: entries,
            jump_dag_jump,
            rate,
            bath,
            bohr_frequency,
        })
    }

    /// Dense copy of the jump operator.
    pub fn jump(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.jump {
            m[(i, j)] = v;
        }
        m
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn bath(&self) -> BathId {
        self.bath
    }

    pub fn bohr_frequency(&self) -> f64 {
        self.bohr_frequency
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn jump_entries(&self) -> &Entries {
        &self.jump
    }

    pub(crate) fn jump_dag_jump_entries(&self) -> &Entries {
        &self.jump_dag_jump
    }

    /// `γ (A ρ A† − ½{A†A, ρ})` for an arbitrary square matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim() || rho.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.nrows(),
            });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        self.accumulate(rho, &mut out);
        Ok(out)
    }

    /// Adds the dissipator action to `out`.
    fn accumulate(&self, rho: &CMatrix, out: &mut CMatrix) {
        if self.rate == 0.0 {
            return;
        }
        let g = Complex64::new(self.rate, 0.0);
        let half = Complex64::new(0.5 * self.rate, 0.0);
        for &(i, j, a) in &self.jump {
            for &(k, l, b) in &self.jump {
                out[(i, k)] += g * a * rho[(j, l)] * b.conj();
            }
        }
        let d = self.dim;
        for &(i, j, m) in &self.jump_dag_jump {
            for k in 0..d {
                out[(i, k)] -= half * m * rho[(j, k)];
                out[(k, j)] -= half * rho[(k, i)] * m;
            }
        }
    }
}

/// Dissipator action of one channel on a state.
pub fn dissipator_action(channel: &DissipationChannel, rho: &DensityMatrix) -> Result<CMatrix> {
    channel.apply(rho.matrix())
}

/// A Hamiltonian plus its dissipation channels.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: CMatrix,
    channels: Vec<DissipationChannel>,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: CMatrix, channels: Vec<DissipationChannel>) -> Result<Self> {
        let dim = check_square(&hamiltonian)?;
        let scale = max_abs(&hamiltonian).max(1.0);
        let deviation = hermiticity_defect(&hamiltonian);
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                what: "Hamiltonian",
                deviation,
            });
        }
        if let Some(c) = channels.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            });
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    /// Like [`LindbladGenerator::new`] but also requires every jump to be an
    /// eigenoperator of `H` at its declared Bohr frequency, `[H, A] = −ω A`.
    pub fn new_secular(hamiltonian: CMatrix, channels: Vec<DissipationChannel>) -> Result<Self> {
        let gen = Self::new(hamiltonian, channels)?;
        gen.check_bohr_frequencies()?;
        Ok(gen)
    }

    pub fn check_bohr_frequencies(&self) -> Result<()> {
        let h = &self.hamiltonian;
        let h_scale = max_abs(h).max(1.0);
        let d = self.dim();
        for (index, c) in self.channels.iter().enumerate() {
            // [H, A] + ωA, built from the nonzero entries of A
            let mut residual_m = CMatrix::zeros(d, d);
            let mut a_scale: f64 = 0.0;
            for &(i, j, a) in c.jump_entries() {
                a_scale = a_scale.max(a.norm());
                for r in 0..d {
                    residual_m[(r, j)] += h[(r, i)] * a;
                    residual_m[(i, r)] -= a * h[(j, r)];
                }
                residual_m[(i, j)] += a * c.bohr_frequency;
            }
            let residual = max_abs(&residual_m) / a_scale.max(1e-300);
            if residual > 1e-9 * h_scale {
                return Err(Error::BohrFrequencyMismatch {
                    index,
                    bath: c.bath,
                    declared: c.bohr_frequency,
                    residual,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[DissipationChannel] {
        &self.channels
    }

    pub fn channels_for(&self, bath: BathId) -> impl Iterator<Item = &DissipationChannel> {
        self.channels.iter().filter(move |c| c.bath == bath)
    }

    pub fn has_bath(&self, bath: BathId) -> bool {
        self.channels.iter().any(|c| c.bath == bath)
    }

    /// Largest channel rate.
    pub fn max_rate(&self) -> f64 {
        self.channels.iter().fold(0.0, |m, c| m.max(c.rate))
    }

    /// `L(ρ)` for any square matrix of the right size (not necessarily a state).
    pub fn apply_matrix(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim() || rho.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.nrows(),
            });
        }
        let h = &self.hamiltonian;
        let mut out = (h * rho - rho * h) * Complex64::new(0.0, -1.0);
        for c in &self.channels {
            c.accumulate(rho, &mut out);
        }
        Ok(out)
    }

    /// Sum of the dissipators tagged `bath`.
    pub fn bath_action(&self, bath: BathId, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.nrows(),
            });
        }
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for c in self.channels_for(bath) {
            c.accumulate(rho, &mut out);
        }
        Ok(out)
    }

    /// Generator projected onto the levels `keep` (in that order). Channels
    /// whose jump vanishes on the kept block are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let n = keep.len();
        let project = |m: &CMatrix| CMatrix::from_fn(n, n, |i, j| m[(keep[i], keep[j])]);
        let channels = self
            .channels
            .iter()
            .filter_map(|c| {
                let jump = project(&c.jump());
                (max_abs(&jump) > 0.0)
                    .then(|| DissipationChannel::new(jump, c.rate, c.bath, c.bohr_frequency))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(project(&self.hamiltonian), channels)
    }

    /// Copy of the generator with the channels of `bath` removed.
    pub fn without_bath(&self, bath: BathId) -> Self {
        Self {
            hamiltonian: self.hamiltonian.clone(),
            channels: self
                .channels
                .iter()
                .filter(|c| c.bath != bath)
                .cloned()
                .collect(),
        }
    }

    pub fn superoperator(&self) -> Superoperator {
        Superoperator::from_generator(self)
    }
}

/// `ρ̇ = L(ρ)`.
pub fn liouvillian_apply(gen: &LindbladGenerator, rho: &DensityMatrix) -> Result<CMatrix> {
    gen.apply_matrix(rho.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn decay_of_excited_projector() {
        let gamma = 0.7;
        let ch = DissipationChannel::new(ket_bra(2, 0, 1), gamma, BathId::Sink, 1.0).unwrap();
        let out = dissipator_action(&ch, &DensityMatrix::pure(2, 1)).unwrap();
        let expected = diagonal(&[gamma, -gamma]);
        assert_abs_diff_eq!(max_abs(&(out - expected)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn annihilated_state_is_untouched() {
        let ch = DissipationChannel::new(ket_bra(3, 0, 1), 2.0, BathId::Loss, 1.0).unwrap();
        let out = dissipator_action(&ch, &DensityMatrix::pure(3, 2)).unwrap();
        assert_eq!(max_abs(&out), 0.0);
    }

    #[test]
    fn dimension_mismatch_names_both_sizes() {
        let ch = DissipationChannel::new(ket_bra(3, 0, 1), 1.0, BathId::Abs, 1.0).unwrap();
        let err = dissipator_action(&ch, &DensityMatrix::pure(2, 0)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("3x3") && msg.contains("2x2"), "{msg}");
    }

    #[test]
    fn negative_rate_rejected() {
        assert!(matches!(
            DissipationChannel::new(ket_bra(2, 0, 1), -1.0, BathId::Abs, 1.0),
            Err(Error::InvalidRate { .. })
        ));
    }

    #[test]
    fn hamiltonian_eigenstate_is_stationary() {
        let h = diagonal(&[0.0, 1.3, 2.9]);
        let gen = LindbladGenerator::new(h, vec![]).unwrap();
        let rho = DensityMatrix::from_populations(&[0.2, 0.5, 0.3]).unwrap();
        assert_eq!(max_abs(&liouvillian_apply(&gen, &rho).unwrap()), 0.0);
    }

    #[test]
    fn bohr_frequency_check() {
        let h = diagonal(&[0.0, 1.5]);
        let good = DissipationChannel::new(ket_bra(2, 0, 1), 1.0, BathId::Abs, 1.5).unwrap();
        assert!(LindbladGenerator::new_secular(h.clone(), vec![good]).is_ok());
        let bad = DissipationChannel::new(ket_bra(2, 0, 1), 1.0, BathId::Abs, 1.0).unwrap();
        assert!(matches!(
            LindbladGenerator::new_secular(h, vec![bad]),
            Err(Error::BohrFrequencyMismatch { .. })
        ));
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            DensityMatrix::from_populations(&[0.5, 0.6]),
            Err(Error::TraceNotUnit { .. })
        ));
        assert!(matches!(
            DensityMatrix::from_populations(&[1.1, -0.1]),
            Err(Error::NegativeEigenvalue { .. })
        ));
        let mut m = diagonal(&[0.5, 0.5]);
        m[(0, 1)] = Complex64::new(0.1, 0.1);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn repair_floors_small_negatives() {
        let raw = diagonal(&[1.0 + 5e-10, -5e-10]);
        let rho = DensityMatrix::repaired(&raw).unwrap();
        assert!(rho.eigenvalues()[0] >= 0.0);
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
        assert!(DensityMatrix::repaired(&diagonal(&[1.1, -0.1])).is_err());
    }

    #[test]
    fn restrict_keeps_block() {
        let h = diagonal(&[0.0, 1.0, 2.0]);
        let ch = DissipationChannel::new(ket_bra(3, 0, 1), 1.0, BathId::Loss, 1.0).unwrap();
        let ch2 = DissipationChannel::new(ket_bra(3, 0, 2), 1.0, BathId::Loss, 2.0).unwrap();
        let gen = LindbladGenerator::new(h, vec![ch, ch2]).unwrap();
        let r = gen.restrict(&[0, 1]).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.channels().len(), 1);
        assert_eq!(r.hamiltonian()[(1, 1)], c(1.0));
    }
}
