// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::superop::unvectorize;
use super::{DensityMatrix, LindbladGenerator};
use crate::error::{Error, Result};

/// Largest Hilbert-space dimension accepted by the dense null-space solver.
pub const MAX_DENSE_DIM: usize = 48;

/// Singular values below this fraction of the largest one count as zero.
const NULL_TOL: f64 = 1e-11;

/// Unique stationary state from the null space of the vectorized generator.
pub fn steady_state(gen: &LindbladGenerator) -> Result<DensityMatrix> {
    let d = gen.dim();
    if d > MAX_DENSE_DIM {
        return Err(Error::TooLarge { dim: d });
    }
    let dense = gen.superoperator().to_dense();
    let svd = dense
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence)?;
    let sv = &svd.singular_values;
    let smax = sv.max();
    let threshold = (NULL_TOL * smax).max(f64::MIN_POSITIVE);
    let dimension = sv.iter().filter(|&&s| s <= threshold).count();
    if dimension > 1 {
        return Err(Error::DegenerateNullSpace { dimension });
    }
    let k = sv.imin();
    let v_t = svd.v_t.ok_or(Error::NoConvergence)?;
    let null: Vec<Complex64> = v_t.row(k).iter().map(|z| z.conj()).collect();
    let mut rho = unvectorize(&null, d);
    let tr = rho.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::NoConvergence);
    }
    rho /= tr;
    DensityMatrix::repaired(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::{diagonal, ket_bra, max_abs, BathId, DissipationChannel};

    #[test]
    fn isolated_levels_are_degenerate() {
        let gen = LindbladGenerator::new(diagonal(&[0.0, 1.0]), vec![]).unwrap();
        assert!(matches!(
            steady_state(&gen),
            Err(Error::DegenerateNullSpace { dimension: 2 })
        ));
    }

    #[test]
    fn two_level_thermal() {
        let (w, t) = (1.0f64, 0.7f64);
        let n = 1.0 / (w / t).exp_m1();
        let ch = vec![
            DissipationChannel::new(ket_bra(2, 0, 1), 0.3 * (1.0 + n), BathId::Loss, w).unwrap(),
            DissipationChannel::new(ket_bra(2, 1, 0), 0.3 * n, BathId::Loss, -w).unwrap(),
        ];
        let gen = LindbladGenerator::new(diagonal(&[0.0, w]), ch).unwrap();
        let ss = steady_state(&gen).unwrap();
        let z = 1.0 + (-w / t).exp();
        assert!((ss.populations()[0] - 1.0 / z).abs() < 1e-12);
        assert!(max_abs(&gen.apply_matrix(ss.matrix()).unwrap()) < 1e-12);
    }

    #[test]
    fn too_large() {
        let d = MAX_DENSE_DIM + 1;
        let gen = LindbladGenerator::new(diagonal(&vec![0.0; d]), vec![]).unwrap();
        assert!(matches!(steady_state(&gen), Err(Error::TooLarge { .. })));
    }
}
