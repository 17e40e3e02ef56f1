// SPDX-License-Identifier: Apache-2.0

//! Finite-size check of the bosonized reaction centre. A collection of
//! two-level sites in its symmetric sector is a spin `j`; with
//! `J_z = −j + c†c` and `J₋ = √(2j − c†c) c` the coupling
//! `√(Γ/2j)(J₋|1⟩⟨0| + h.c.)` reduces to the oscillator model as `j → ∞`.
//! Only the absorber levels |0⟩, |1⟩ couple to the reservoir, so the
//! comparison is done on that block.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::toy::ToyParams;
use crate::error::{Error, Result};
use crate::qdyn::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpOracleParams {
    /// Collective spin; the symmetric sector has dimension `2j + 1`.
    pub j: usize,
    /// Highest dressed manifold included in the comparison.
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpComparison {
    pub j: usize,
    pub n_max: usize,
    /// Lowest levels of the exact collective-spin model.
    pub finite_j: Vec<f64>,
    /// Same levels of the oscillator model.
    pub oscillator: Vec<f64>,
    pub max_deviation: f64,
}

/// `{|0⟩,|1⟩} ⊗ ladder` block with index `2m + s`; `amplitude(m)` is the
/// matrix element of the lowering operator between `m` and `m − 1`.
fn block_hamiltonian(p: &ToyParams, levels: usize, j: f64, amplitude: impl Fn(usize) -> f64) -> CMatrix {
    let d = 2 * levels;
    let mut h = CMatrix::zeros(d, d);
    for m in 0..levels {
        let base = p.omega_rc * (m as f64 - j);
        h[(2 * m, 2 * m)] = Complex64::new(base - 0.5 * p.omega_rc, 0.0);
        h[(2 * m + 1, 2 * m + 1)] = Complex64::new(base + 0.5 * p.omega_rc, 0.0);
        if m + 1 < levels {
            // ⟨1, m| c |0, m+1⟩
            let g = Complex64::new(amplitude(m + 1), 0.0);
            h[(2 * m + 1, 2 * (m + 1))] = g;
            h[(2 * (m + 1), 2 * m + 1)] = g;
        }
    }
    h
}

fn lowest(h: CMatrix, count: usize) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(count);
    e
}

/// Compares the low-excitation spectra (levels below `ω_rc(n_max + 1) − jω_rc`)
/// of the exact spin-`j` model and the oscillator model.
pub fn hp_finite_j_oracle(p: &ToyParams, hp: HpOracleParams) -> Result<HpComparison> {
    p.validate_weak_coupling()?;
    if !(4..=12).contains(&hp.j) {
        return Err(Error::invalid("j", "in [4, 12]"));
    }
    if hp.n_max + 1 > 2 * hp.j {
        return Err(Error::invalid("n_max", "< 2*j"));
    }
    let j = hp.j as f64;
    let count = 1 + 2 * (hp.n_max + 1);
    let scale = p.gamma / (2.0 * j);
    let spin = block_hamiltonian(p, 2 * hp.j + 1, j, |m| {
        (scale * m as f64 * (2.0 * j - m as f64 + 1.0)).sqrt()
    });
    let osc = block_hamiltonian(p, hp.n_max + 2, j, |m| (p.gamma * m as f64).sqrt());
    let finite_j = lowest(spin, count + 1);
    let oscillator = lowest(osc, count + 1);
    let cutoff = p.omega_rc * (hp.n_max as f64 + 1.0 - j);
    for levels in [&finite_j, &oscillator] {
        if !(levels[count - 1] < cutoff && levels[count] > cutoff) {
            return Err(Error::invalid("gamma", "small enough that dressed manifolds do not overlap"));
        }
    }
    let finite_j = finite_j[..count].to_vec();
    let oscillator = oscillator[..count].to_vec();
    let max_deviation = finite_j
        .iter()
        .zip(&oscillator)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(HpComparison {
        j: hp.j,
        n_max: hp.n_max,
        finite_j,
        oscillator,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ToyParams {
        ToyParams::new(1.0, 1.0, 0.02, 1.0, 0.5).unwrap()
    }

    #[test]
    fn vacuum_energies_agree() {
        let c = hp_finite_j_oracle(&params(), HpOracleParams { j: 12, n_max: 0 }).unwrap();
        assert!((c.finite_j[0] - c.oscillator[0]).abs() < 1e-12);
        assert!((c.finite_j[0] - (-12.0 - 0.5)).abs() < 1e-12);
        // single excitation splitting is exact for the collective spin
        assert!(c.max_deviation < 1e-12);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(hp_finite_j_oracle(&params(), HpOracleParams { j: 2, n_max: 1 }).is_err());
        assert!(hp_finite_j_oracle(&params(), HpOracleParams { j: 13, n_max: 1 }).is_err());
        assert!(hp_finite_j_oracle(&params(), HpOracleParams { j: 4, n_max: 8 }).is_err());
    }
}
