use std::collections::BTreeMap;

use num_complex::Complex64;

/// Truncated multimode Fock basis; mode 0 is the most significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSpace {
    cutoffs: Vec<usize>,
    dim: usize,
}

impl FockSpace {
    pub fn new(cutoffs: Vec<usize>) -> Self {
        let dim = cutoffs.iter().product();
        Self { cutoffs, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoff(&self, mode: usize) -> usize {
        self.cutoffs[mode]
    }

    pub fn index(&self, occupations: &[usize]) -> usize {
        occupations
            .iter()
            .zip(&self.cutoffs)
            .fold(0, |acc, (&n, &c)| acc * c + n)
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes()];
        for k in (0..self.modes()).rev() {
            occ[k] = index % self.cutoffs[k];
            index /= self.cutoffs[k];
        }
        occ
    }

    /// Truncated annihilation operator of `mode`.
    pub fn lowering(&self, mode: usize) -> SparseOp {
        let mut entries = Vec::new();
        for col in 0..self.dim {
            let mut occ = self.occupations(col);
            let n = occ[mode];
            if n > 0 {
                occ[mode] = n - 1;
                entries.push((self.index(&occ), col, Complex64::new((n as f64).sqrt(), 0.0)));
            }
        }
        SparseOp::new(self.dim, entries)
    }
}

/// Sparse square matrix in coordinate form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOp {
    pub fn new(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        let mut merged: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "sparse entry out of range");
            *merged.entry((r, c)).or_default() += v;
        }
        let entries = merged
            .into_iter()
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Self { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (r, c, v * factor)).collect(),
        )
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::new(self.dim, self.entries.iter().chain(&other.entries).copied().collect())
    }

    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut by_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = Vec::new();
        for &(r, k, a) in &self.entries {
            for &(c, b) in &by_row[k] {
                out.push((r, c, a * b));
            }
        }
        Self::new(self.dim, out)
    }

    /// Induced 1-norm.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.dim];
        for &(_, c, v) in &self.entries {
            cols[c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// `out += factor · self · x` for a dense row-major `x`.
    pub fn left_mul_acc(&self, x: &[Complex64], out: &mut [Complex64], factor: Complex64) {
        let d = self.dim;
        for &(r, c, v) in &self.entries {
            let f = factor * v;
            let src = &x[c * d..(c + 1) * d];
            for (o, s) in out[r * d..(r + 1) * d].iter_mut().zip(src) {
                *o += f * s;
            }
        }
    }

    /// `out += factor · x · self`.
    pub fn right_mul_acc(&self, x: &[Complex64], out: &mut [Complex64], factor: Complex64) {
        let d = self.dim;
        for &(r, c, v) in &self.entries {
            let f = factor * v;
            for i in 0..d {
                out[i * d + c] += f * x[i * d + r];
            }
        }
    }

    /// `out += factor · self · x · self†`.
    pub fn sandwich_acc(&self, x: &[Complex64], out: &mut [Complex64], factor: f64) {
        let d = self.dim;
        for &(r1, c1, v1) in &self.entries {
            let f = v1 * factor;
            for &(r2, c2, v2) in &self.entries {
                out[r1 * d + r2] += f * x[c1 * d + c2] * v2.conj();
            }
        }
    }
}
