//! Small dense linear-algebra helpers (in-repo; problem sizes stay below a
//! few hundred nodes).

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Solve `A x = b` by LU decomposition with partial pivoting. `A` is consumed
/// as workspace.
pub(crate) fn lu_solve(mut a: Array2<f64>, mut b: Array1<f64>) -> Result<Array1<f64>> {
    let n = b.len();
    debug_assert_eq!(a.nrows(), n);
    debug_assert_eq!(a.ncols(), n);
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        // Pivot search.
        let mut pivot_row = col;
        let mut pivot_val = a[[perm[col], col]].abs();
        for row in (col + 1)..n {
            let v = a[[perm[row], col]].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val < 1e-300 {
            return Err(Error::SingularMatrix { step: col, pivot: pivot_val });
        }
        perm.swap(col, pivot_row);
        let prow = perm[col];
        let pivot = a[[prow, col]];
        for row in (col + 1)..n {
            let r = perm[row];
            let factor = a[[r, col]] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[[r, col]] = factor;
            for k in (col + 1)..n {
                a[[r, k]] -= factor * a[[prow, k]];
            }
            b[r] -= factor * b[prow];
        }
    }

    // Back substitution.
    let mut x = Array1::zeros(n);
    for col in (0..n).rev() {
        let r = perm[col];
        let mut sum = b[r];
        for k in (col + 1)..n {
            sum -= a[[r, k]] * x[k];
        }
        x[col] = sum / a[[r, col]];
    }
    Ok(x)
}
