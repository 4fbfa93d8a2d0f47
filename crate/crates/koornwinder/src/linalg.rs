//! Dense linear algebra on small matrices: exact Gaussian elimination over
//! rationals for interpolation solves, and f64 routines for the numeric
//! Gram-matrix oracle.
//!
//! Matrices are `Vec<Vec<_>>` in row-major order; every system here is tiny
//! (dimension bounded by the polynomial basis size), so no pivot-growth or
//! sparsity tricks are needed beyond partial pivoting.

use crate::scalar::Rat;
use num_traits::Zero;

/// Solves `A x = b` exactly. Returns `None` when `A` is singular.
pub fn solve_exact(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    assert_eq!(rhs.len(), n, "rhs length must match matrix dimension");
    let mut a: Vec<Vec<Rat>> = matrix.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &a[col][col];
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

/// Solves `A x = b` in f64 with partial pivoting. Returns `None` when a pivot
/// underflows to zero.
pub fn solve_f64(matrix: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    assert_eq!(rhs.len(), n, "rhs length must match matrix dimension");
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut b: Vec<f64> = rhs.to_vec();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r, &s| {
            a[r][col]
                .abs()
                .partial_cmp(&a[s][col].abs())
                .expect("non-NaN pivot")
        })?;
        if a[pivot_row][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Explicit inverse via column-by-column solves. `None` when singular.
pub fn invert_f64(matrix: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = matrix.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        columns.push(solve_f64(matrix, &e)?);
    }
    let mut inv = vec![vec![0.0; n]; n];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            inv[i][j] = v;
        }
    }
    Some(inv)
}

/// Maximum absolute column sum, the operator 1-norm.
pub fn norm1_f64(matrix: &[Vec<f64>]) -> f64 {
    let n = matrix.len();
    (0..n)
        .map(|j| matrix.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
