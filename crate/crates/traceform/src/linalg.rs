//! Dense symmetric linear algebra: cyclic Jacobi eigendecomposition,
//! Cholesky solves, and the diagonal-mass generalized eigenproblem.
//!
//! Everything here is deterministic: fixed sweep order, no pivot heuristics,
//! no randomized starts. Runs are bit-reproducible for a given build.

use crate::error::{Error, Result};

/// Row-major dense symmetric matrix view helpers.
#[inline]
fn at(a: &[f64], n: usize, i: usize, j: usize) -> f64 {
    a[i * n + j]
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues sorted in descending order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the orthonormal eigenvector paired with `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi eigendecomposition of a symmetric `n x n` matrix
/// (row-major). Off-diagonal entries are annihilated in a fixed row-by-row
/// order until the largest off-diagonal magnitude falls below machine
/// precision relative to the diagonal scale.
pub fn sym_eigen(matrix: &[f64], n: usize) -> Result<SymEigen> {
    assert_eq!(matrix.len(), n * n, "matrix shape mismatch");
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut a = matrix.to_vec();
    // v is column-major accumulation of rotations: v[j*n + i] = V_{ij}.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let scale = (0..n)
        .map(|i| at(&a, n, i, i).abs())
        .fold(0.0_f64, f64::max)
        .max(
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| at(&a, n, i, j).abs())
                .fold(0.0_f64, f64::max),
        );
    let tol = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off_max = 0.0_f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off_max = off_max.max(a[p * n + q].abs());
            }
        }
        if off_max <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    // Avoid overflow in theta^2; limit of the closed form.
                    0.5 / theta
                } else if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        let new_ip = aip - s * (aiq + tau * aip);
                        let new_iq = aiq + s * (aip - tau * aiq);
                        a[i * n + p] = new_ip;
                        a[p * n + i] = new_ip;
                        a[i * n + q] = new_iq;
                        a[q * n + i] = new_iq;
                    }
                }
                for i in 0..n {
                    let vip = v[p * n + i];
                    let viq = v[q * n + i];
                    v[p * n + i] = vip - s * (viq + tau * vip);
                    v[q * n + i] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if !converged {
        // Final re-check: the last sweep may have finished the job.
        let mut off_max = 0.0_f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off_max = off_max.max(a[p * n + q].abs());
            }
        }
        if off_max > tol {
            return Err(Error::ConvergenceFailure(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        at(&a, n, j, j)
            .partial_cmp(&at(&a, n, i, i))
            .expect("eigenvalues are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        values.push(a[k * n + k]);
        let mut col: Vec<f64> = (0..n).map(|i| v[k * n + i]).collect();
        // Deterministic sign: largest-magnitude component positive.
        let lead = col
            .iter()
            .cloned()
            .fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if lead < 0.0 {
            for x in &mut col {
                *x = -*x;
            }
        }
        vectors.push(col);
    }
    Ok(SymEigen { values, vectors })
}

/// Cholesky factor (lower triangular, row-major) of a symmetric positive
/// definite matrix.
pub fn cholesky(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(matrix.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = matrix[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return Err(Error::SingularSystem);
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn cholesky_substitute(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    x
}

/// Relative residual tolerance for direct solves.
pub const SOLVE_TOL: f64 = 1e-12;

/// Solve `A x = b` for symmetric positive definite `A` by Cholesky
/// factorization with one step of iterative refinement. Fails with
/// `SingularSystem` when the factorization breaks down or the relative
/// residual stays above [`SOLVE_TOL`].
pub fn solve_spd(matrix: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(matrix, n)?;
    solve_with_factor(matrix, &l, n, b)
}

/// Solve using a precomputed Cholesky factor (for repeated right-hand sides).
pub fn solve_with_factor(matrix: &[f64], l: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(b.len(), n);
    let mut x = cholesky_substitute(l, n, b);

    let norm_a = inf_norm(matrix, n);
    let norm_b = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for _ in 0..2 {
        let r = residual(matrix, n, &x, b);
        let norm_x = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let norm_r = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let denom = (norm_a * norm_x + norm_b).max(f64::MIN_POSITIVE);
        if norm_r / denom <= SOLVE_TOL {
            return Ok(x);
        }
        let dx = cholesky_substitute(l, n, &r);
        for i in 0..n {
            x[i] += dx[i];
        }
    }
    let r = residual(matrix, n, &x, b);
    let norm_x = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let norm_r = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if norm_r / (norm_a * norm_x + norm_b).max(f64::MIN_POSITIVE) <= SOLVE_TOL {
        Ok(x)
    } else {
        Err(Error::SingularSystem)
    }
}

fn residual(a: &[f64], n: usize, x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += a[i * n + j] * x[j];
        }
        r[i] = b[i] - s;
    }
    r
}

/// Max row sum norm.
pub fn inf_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Generalized symmetric eigenproblem `A u = E B u` with `B = diag(b) > 0`,
/// eigenvalues ascending. Reduces to the standard problem for
/// `C = B^{-1/2} A B^{-1/2}`; returned vectors are B-orthonormal.
pub fn generalized_sym_eigen(a: &[f64], b_diag: &[f64], n: usize) -> Result<SymEigen> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b_diag.len(), n);
    for (i, &b) in b_diag.iter().enumerate() {
        if !(b > 0.0) {
            return Err(Error::SingularMass(i));
        }
    }
    let inv_sqrt: Vec<f64> = b_diag.iter().map(|&b| 1.0 / b.sqrt()).collect();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            c[i * n + j] = a[i * n + j] * inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let eig = sym_eigen(&c, n)?;
    // Ascending for form-eigenvalues, with the back-transformed vectors.
    let mut values: Vec<f64> = eig.values.iter().rev().cloned().collect();
    let mut vectors: Vec<Vec<f64>> = eig
        .vectors
        .iter()
        .rev()
        .map(|y| y.iter().zip(&inv_sqrt).map(|(yi, s)| yi * s).collect())
        .collect();
    // Keep pairing stable for exactly equal eigenvalues.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    values = order.iter().map(|&i| values[i]).collect();
    vectors = order.iter().map(|&i| vectors[i].clone()).collect();
    Ok(SymEigen { values, vectors })
}
