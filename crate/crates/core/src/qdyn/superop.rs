// SPDX-License-Identifier: Apache-2.0

//! Vectorized generator in compressed-row form.
//!
//! States are column-stacked: element `(i, j)` of a `d×d` matrix lives at
//! index `i + j·d`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{nonzero_entries, CMatrix, LindbladGenerator};

#[derive(Debug, Clone)]
pub struct Superoperator {
    size: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

fn identity_entries(d: usize) -> Vec<(usize, usize, Complex64)> {
    (0..d).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect()
}

struct Builder {
    d: usize,
    entries: HashMap<(usize, usize), Complex64>,
}

impl Builder {
    /// Adds `coef · A X B`.
    fn sandwich(
        &mut self,
        left: &[(usize, usize, Complex64)],
        right: &[(usize, usize, Complex64)],
        coef: Complex64,
    ) {
        let d = self.d;
        for &(i, k, a) in left {
            for &(l, j, b) in right {
                *self
                    .entries
                    .entry((i + j * d, k + l * d))
                    .or_insert(Complex64::new(0.0, 0.0)) += coef * a * b;
            }
        }
    }
}

impl Superoperator {
    pub fn from_generator(gen: &LindbladGenerator) -> Self {
        let d = gen.dim();
        let mut b = Builder {
            d,
            entries: HashMap::new(),
        };
        let id = identity_entries(d);
        let h = nonzero_entries(gen.hamiltonian());
        b.sandwich(&h, &id, Complex64::new(0.0, -1.0));
        b.sandwich(&id, &h, Complex64::new(0.0, 1.0));
        for c in gen.channels() {
            if c.rate() == 0.0 {
                continue;
            }
            let a = c.jump_entries();
            let a_dag: Vec<_> = a.iter().map(|&(i, j, v)| (j, i, v.conj())).collect();
            let ada = c.jump_dag_jump_entries();
            let g = Complex64::new(c.rate(), 0.0);
            b.sandwich(a, &a_dag, g);
            b.sandwich(ada, &id, -g * 0.5);
            b.sandwich(&id, ada, -g * 0.5);
        }
        let mut triplets: Vec<_> = b
            .entries
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        triplets.sort_by_key(|(k, _)| *k);
        Self::from_sorted(d * d, &triplets)
    }

    fn from_sorted(size: usize, triplets: &[((usize, usize), Complex64)]) -> Self {
        let mut row_ptr = vec![0usize; size + 1];
        for ((r, _), _) in triplets {
            row_ptr[r + 1] += 1;
        }
        for r in 0..size {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            size,
            row_ptr,
            cols: triplets.iter().map(|((_, c), _)| *c).collect(),
            vals: triplets.iter().map(|(_, v)| *v).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out = L x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.size, self.size);
        for r in 0..self.size {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] += self.vals[k];
            }
        }
        m
    }

    /// Indices reachable from `seeds` under repeated application of `L`.
    /// The span of the returned coordinates is an invariant subspace.
    pub fn reachable_from(&self, seeds: &[usize]) -> Vec<usize> {
        // column -> rows adjacency
        let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); self.size];
        for r in 0..self.size {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                by_col[self.cols[k]].push(r);
            }
        }
        let mut seen = vec![false; self.size];
        let mut stack: Vec<usize> = seeds.to_vec();
        for &s in seeds {
            seen[s] = true;
        }
        while let Some(c) = stack.pop() {
            for &r in &by_col[c] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        (0..self.size).filter(|&i| seen[i]).collect()
    }

    /// Restriction to an invariant coordinate subset (as returned by
    /// [`Superoperator::reachable_from`]).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.size];
        for (p, &k) in keep.iter().enumerate() {
            position[k] = p;
        }
        let mut triplets = Vec::new();
        for (p, &r) in keep.iter().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = position[self.cols[k]];
                if c != usize::MAX {
                    triplets.push(((p, c), self.vals[k]));
                }
            }
        }
        Self::from_sorted(keep.len(), &triplets)
    }

    /// Gershgorin bound on the spectral radius (max absolute row sum).
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.size)
            .map(|r| {
                self.vals[self.row_ptr[r]..self.row_ptr[r + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn vectorize(m: &CMatrix) -> Vec<Complex64> {
    // nalgebra storage is column-major, which is exactly column stacking
    m.as_slice().to_vec()
}

pub(crate) fn unvectorize(v: &[Complex64], d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v)
}
