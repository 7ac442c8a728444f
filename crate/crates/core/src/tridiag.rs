//! Thomas algorithm for tridiagonal systems.

use alloc::vec::Vec;

use crate::error::{bail, Result};

/// Solves `lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower` and `upper` have one entry fewer than `diag`. No pivoting: the
/// scheme matrices are strictly diagonally dominant.
pub fn tridiagonal_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let mut x = rhs.to_vec();
    let mut scratch = Vec::new();
    tridiagonal_solve_in_place(lower, diag, upper, &mut x, &mut scratch)?;
    Ok(x)
}

/// In-place variant; `rhs` is overwritten with the solution and `scratch` is
/// reused between calls.
pub fn tridiagonal_solve_in_place(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut Vec<f64>,
) -> Result<()> {
    let n = diag.len();
    if rhs.len() != n || lower.len() + 1 != n.max(1) || upper.len() + 1 != n.max(1) {
        bail!(
            Argument,
            "inconsistent tridiagonal sizes: lower {}, diag {}, upper {}, rhs {}",
            lower.len(),
            n,
            upper.len(),
            rhs.len()
        );
    }
    if n == 0 {
        return Ok(());
    }
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut pivot = diag[0];
    if pivot == 0.0 {
        bail!(Numeric, "zero pivot in row 0");
    }
    rhs[0] /= pivot;
    for i in 1..n {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i];
        if pivot == 0.0 {
            bail!(Numeric, "zero pivot in row {i}");
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Ok(())
}
