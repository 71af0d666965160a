//! Eigendecomposition of small dense non-Hermitian complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by a shifted QR
//! iteration (Wilkinson shifts, Givens rotations) to complex Schur form.
//! Eigenvectors come from back substitution on the triangular factor.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Largest matrix dimension accepted by [`diagonalize`].
pub const MAX_EIGEN_DIM: usize = 32;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// `M = U · diag(λ) · U⁻¹` with eigenvalues sorted by real part, then
/// imaginary part. Columns of `U` are unit-norm right eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    lambdas: Vec<Complex64>,
    u: ComplexMatrix,
    u_inv: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn lambdas(&self) -> &[Complex64] {
        &self.lambdas
    }

    /// Right eigenvectors as columns.
    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn u_inv(&self) -> &ComplexMatrix {
        &self.u_inv
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// `U · diag(λ) · U⁻¹`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| self.u[(i, j)] * self.lambdas[j]);
        &scaled * &self.u_inv
    }

    /// Condition number of the eigenvector basis in the induced 1-norm.
    pub fn condition_number(&self) -> f64 {
        self.u.norm_one() * self.u_inv.norm_one()
    }
}

/// Diagonalizes `m`, verifying reconstruction and inverse residuals at `tol`.
///
/// Matrices whose eigenvector basis has condition number above `1/tol` are
/// rejected with [`LinalgError::NonDiagonalizable`].
pub fn diagonalize(m: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_EIGEN_DIM {
        return Err(LinalgError::DimensionTooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(LinalgError::InvalidTolerance(tol));
    }

    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(SpectralDecomposition {
            lambdas: vec![Complex64::new(0.0, 0.0); n],
            u: ComplexMatrix::identity(n),
            u_inv: ComplexMatrix::identity(n),
        });
    }

    let (mut t, mut q) = hessenberg(m);
    schur(&mut t, &mut q)?;
    let vectors = triangular_eigenvectors(&t, scale);
    let v = &q * &vectors;

    let raw_lambdas = t.diagonal();
    let order = eigen_order(&raw_lambdas, scale);

    let lambdas: Vec<Complex64> = order.iter().map(|&k| raw_lambdas[k]).collect();
    let u = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let u = normalize_columns(u);

    let u_inv = u.inverse().map_err(|_| LinalgError::NonDiagonalizable {
        condition: f64::INFINITY,
    })?;
    let decomp = SpectralDecomposition { lambdas, u, u_inv };

    let condition = decomp.condition_number();
    if !condition.is_finite() || condition > 1.0 / tol {
        return Err(LinalgError::NonDiagonalizable { condition });
    }
    let recon = (&decomp.reconstruct() - m).max_abs();
    let ident = (&(&decomp.u * &decomp.u_inv) - &ComplexMatrix::identity(n)).max_abs();
    if recon > tol * scale || ident > tol {
        return Err(LinalgError::NonDiagonalizable { condition });
    }
    Ok(decomp)
}

/// Sort key: real parts are snapped to a grid relative to the matrix scale
/// so conjugate pairs with round-off-different real parts order by their
/// imaginary part.
fn eigen_order(lambdas: &[Complex64], scale: f64) -> Vec<usize> {
    let quantum = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let key = |z: &Complex64| (z.re / quantum).round();
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| {
        key(&lambdas[a])
            .total_cmp(&key(&lambdas[b]))
            .then(lambdas[a].im.total_cmp(&lambdas[b].im))
    });
    order
}

fn normalize_columns(mut u: ComplexMatrix) -> ComplexMatrix {
    let n = u.rows();
    for j in 0..n {
        let norm = (0..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                u[(i, j)] /= norm;
            }
        }
    }
    u
}

/// Householder reduction `m = Q H Q†` with `H` upper Hessenberg.
fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x;
        v[0] += phase * norm_x;
        let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm_v;
        }
        // H <- P H P with P = I - 2 v v†, acting on indices k+1..n
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= 2.0 * v[r] * dot;
            }
        }
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let dot: Complex64 = (0..v.len()).map(|r| mat[(i, k + 1 + r)] * v[r]).sum();
                for r in 0..v.len() {
                    mat[(i, k + 1 + r)] -= 2.0 * dot * v[r].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Unitary rotation `[[c, s], [-s̄, c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if x.norm() == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let norm = x.norm().hypot(y.norm());
    let phase = x / x.norm();
    (x.norm() / norm, phase * y.conj() / norm)
}

fn wilkinson_shift(h: &ComplexMatrix, iu: usize) -> Complex64 {
    let a = h[(iu - 1, iu - 1)];
    let b = h[(iu - 1, iu)];
    let c = h[(iu, iu - 1)];
    let d = h[(iu, iu)];
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// In-place shifted QR on the Hessenberg matrix `h`, accumulating the
/// Schur vectors into `q`. On return `h` is upper triangular.
fn schur(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<(), LinalgError> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut iu = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while iu > 0 {
        let mut il = iu;
        while il > 0 {
            let sub = h[(il, il - 1)].norm();
            let diag = h[(il - 1, il - 1)].norm() + h[(il, il)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[(il, il - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            il -= 1;
        }
        if il == iu {
            iu -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(LinalgError::NoConvergence);
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(iu, iu)] + Complex64::new(0.75 * h[(iu, iu - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, iu)
        };

        for k in il..=iu {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(iu - il);
        for k in il..iu {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            h[(k + 1, k)] = Complex64::new(0.0, 0.0);
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            let last = (k + 2).min(iu);
            for i in 0..=last {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
            for i in 0..n {
                let a = q[(i, k)];
                let b = q[(i, k + 1)];
                q[(i, k)] = a * c + b * s.conj();
                q[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in il..=iu {
            h[(k, k)] += shift;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(())
}

/// Eigenvectors of an upper triangular matrix, one per column.
fn triangular_eigenvectors(t: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    let n = t.rows();
    let small = f64::EPSILON * scale;
    let mut x = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in j + 1..=k {
                s += t[(j, l)] * x[(l, k)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            x[(j, k)] = -s / denom;
        }
    }
    x
}
