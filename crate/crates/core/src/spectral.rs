//! Dense symmetric eigensolver (cyclic Jacobi rotations).
//!
//! Problem sizes here stay below a few hundred nodes, so a Jacobi sweep is
//! both fast enough and bit-reproducible across platforms; no external
//! LAPACK-style dependency is involved.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry precondition.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigen-decomposition of a symmetric matrix with eigenvalues in ascending
/// order. Eigenvectors (orthonormal columns, aligned with the eigenvalue
/// order) are kept only when requested.
#[derive(Debug, Clone)]
pub struct LaplacianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Array2<f64>>,
}

impl LaplacianSpectrum {
    /// Largest eigenvalue.
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// Validate graph-Laplacian structure: lambda_1 = 0 within
    /// `1e-9 * max(1, lambda_N)`, lambda_2 > 0 (connectivity) and no
    /// eigenvalue below `-1e-9 * max(1, lambda_N)`.
    pub fn check_laplacian(&self) -> Result<()> {
        let scale = self.lambda_max().max(1.0);
        let tol = 1e-9 * scale;
        if self.eigenvalues[0].abs() > tol {
            return Err(Error::InvalidNetwork(format!(
                "Laplacian lambda_1 = {:e} is not zero within {tol:e}",
                self.eigenvalues[0]
            )));
        }
        if self.eigenvalues.iter().any(|&l| l < -tol) {
            return Err(Error::InvalidNetwork(
                "Laplacian spectrum has a negative eigenvalue beyond tolerance".into(),
            ));
        }
        if self.eigenvalues.len() > 1 && self.eigenvalues[1] <= tol {
            return Err(Error::Disconnected);
        }
        Ok(())
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn eigen_symmetric(matrix: &Array2<f64>) -> Result<LaplacianSpectrum> {
    jacobi(matrix, false)
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix.
pub fn eigen_symmetric_with_vectors(matrix: &Array2<f64>) -> Result<LaplacianSpectrum> {
    jacobi(matrix, true)
}

fn jacobi(matrix: &Array2<f64>, want_vectors: bool) -> Result<LaplacianSpectrum> {
    let n = matrix.nrows();
    if matrix.ncols() != n || n == 0 {
        return Err(Error::InvalidArgument {
            name: "matrix",
            value: n as f64,
            constraint: "must be square and non-empty",
        });
    }
    let mut max_abs = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = matrix[[i, j]];
            if !v.is_finite() {
                return Err(Error::NonFinite { i, j });
            }
            max_abs = max_abs.max(v.abs());
        }
    }
    let sym_tol = SYMMETRY_TOL * max_abs.max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (matrix[[i, j]] - matrix[[j, i]]).abs();
            if diff > sym_tol {
                return Err(Error::NotSymmetric { i, j, diff });
            }
        }
    }

    // Work on the symmetrized copy.
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            a[[i, j]] = 0.5 * (matrix[[i, j]] + matrix[[j, i]]);
        }
    }
    let mut v = if want_vectors { Some(Array2::eye(n)) } else { None };

    let off_tol = 1e-14 * max_abs.max(1.0) * (n as f64);
    const MAX_SWEEPS: usize = 100;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[[p, q]].abs();
            }
        }
        if off <= off_tol {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle from the stable two-by-two formula.
                let theta = 0.5 * (a[[q, q]] - a[[p, p]]) / apq;
                let t = if theta.abs() > 1e154 {
                    // Avoid theta^2 overflow; limit is 1/(2 theta).
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[[p, p]];
                let aqq = a[[q, q]];
                a[[p, p]] = app - t * apq;
                a[[q, q]] = aqq + t * apq;
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[[r, p]];
                    let arq = a[[r, q]];
                    a[[r, p]] = arp - s * (arq + tau * arp);
                    a[[p, r]] = a[[r, p]];
                    a[[r, q]] = arq + s * (arp - tau * arq);
                    a[[q, r]] = a[[r, q]];
                }
                if let Some(vm) = v.as_mut() {
                    for r in 0..n {
                        let vrp = vm[[r, p]];
                        let vrq = vm[[r, q]];
                        vm[[r, p]] = vrp - s * (vrq + tau * vrp);
                        vm[[r, q]] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].partial_cmp(&a[[j, j]]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[[i, i]]).collect();
    let eigenvectors = v.map(|vm| {
        let mut sorted = Array2::zeros((n, n));
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted[[r, new_col]] = vm[[r, old_col]];
            }
        }
        sorted
    });

    Ok(LaplacianSpectrum { eigenvalues, eigenvectors })
}
