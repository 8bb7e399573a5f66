//! Dense symmetric positive-definite solve, sized for a handful of predictors.

use alloc::vec::Vec;

/// Relative pivot threshold below which a column is treated as linearly
/// dependent on the columns before it.
const PIVOT_EPS: f64 = 1e-10;

/// Solves `a x = b` for symmetric positive-definite `a` (row-major, `k x k`)
/// via Cholesky. On failure returns the index of the first column whose pivot
/// vanished.
pub(crate) fn cholesky_solve(a: &[f64], b: &[f64], k: usize) -> Result<Vec<f64>, usize> {
    debug_assert_eq!(a.len(), k * k);
    debug_assert_eq!(b.len(), k);
    let mut l = alloc::vec![0.0; k * k];
    for j in 0..k {
        let mut diag = a[j * k + j];
        for p in 0..j {
            diag -= l[j * k + p] * l[j * k + p];
        }
        let scale = a[j * k + j].abs().max(f64::MIN_POSITIVE);
        if diag.is_nan() || diag <= PIVOT_EPS * scale {
            return Err(j);
        }
        let ljj = libm::sqrt(diag);
        l[j * k + j] = ljj;
        for i in (j + 1)..k {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            l[i * k + j] = s / ljj;
        }
    }
    // forward: L y = b
    let mut y = alloc::vec![0.0; k];
    for i in 0..k {
        let mut s = b[i];
        for p in 0..i {
            s -= l[i * k + p] * y[p];
        }
        y[i] = s / l[i * k + i];
    }
    // backward: L^T x = y
    let mut x = alloc::vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for p in (i + 1)..k {
            s -= l[p * k + i] * x[p];
        }
        x[i] = s / l[i * k + i];
    }
    Ok(x)
}
