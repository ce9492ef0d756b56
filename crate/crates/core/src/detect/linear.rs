//! Zero-forcing and MMSE linear equalizers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMode {
    Zf,
    Mmse,
}

/// Numerical rank with a tolerance relative to the largest singular value.
pub fn rank(h: &DMatrix<Complex64>) -> usize {
    let sv = h.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let tol = max * 1e-10 * h.nrows().max(h.ncols()) as f64;
    sv.iter().filter(|&&s| s > tol).count()
}

/// `Nt x M` equalizer: ZF uses the pseudo-inverse, MMSE
/// `(H^H H + N0 I)^-1 H^H` (unit-energy symbols).
pub fn equalizer_matrix(
    h: &DMatrix<Complex64>,
    mode: LinearMode,
    n0: f64,
) -> Result<DMatrix<Complex64>> {
    let cols = h.ncols();
    let hh = h.adjoint();
    match mode {
        LinearMode::Zf => {
            let r = rank(h);
            if r < cols {
                return Err(Error::RankDeficient { rank: r, cols });
            }
            let gram = &hh * h;
            let inv = gram
                .try_inverse()
                .ok_or(Error::RankDeficient { rank: r, cols })?;
            Ok(inv * hh)
        }
        LinearMode::Mmse => {
            let gram = &hh * h
                + DMatrix::<Complex64>::identity(cols, cols) * Complex64::new(n0.max(0.0), 0.0);
            let inv = gram.try_inverse().ok_or(Error::RankDeficient {
                rank: rank(h),
                cols,
            })?;
            Ok(inv * hh)
        }
    }
}

/// Per-stream estimates `W Y` (`Nt x K`).
pub fn linear_equalize(
    y: &DMatrix<Complex64>,
    h: &DMatrix<Complex64>,
    mode: LinearMode,
    n0: f64,
) -> Result<DMatrix<Complex64>> {
    if y.nrows() != h.nrows() {
        return Err(Error::Dimension(format!(
            "Y has {} rows, H has {}",
            y.nrows(),
            h.nrows()
        )));
    }
    Ok(equalizer_matrix(h, mode, n0)? * y)
}
