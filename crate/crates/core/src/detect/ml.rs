//! Exhaustive joint maximum-likelihood GSM detection with known channel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits;
use crate::error::{Error, Result};
use crate::indexmod::GsmConfig;

/// Largest hypothesis count (per symbol period) the ML detector enumerates.
pub const ML_HYPOTHESIS_BUDGET: u128 = 1 << 20;

/// Noiseless receive vectors `H x` for every bit pattern, in pattern order.
pub fn gsm_hypotheses(h: &DMatrix<Complex64>, cfg: &GsmConfig) -> Result<Vec<Vec<Complex64>>> {
    let b = cfg.bits_per_symbol();
    let count = 1u128 << b;
    if count > ML_HYPOTHESIS_BUDGET {
        return Err(Error::HypothesisBudget {
            count,
            budget: ML_HYPOTHESIS_BUDGET,
        });
    }
    if h.ncols() != cfg.nt() {
        return Err(Error::Dimension(format!(
            "H has {} columns, GSM uses {} antennas",
            h.ncols(),
            cfg.nt()
        )));
    }
    Ok((0..1usize << b)
        .map(|p| {
            let sym = cfg.symbol_from_pattern(p);
            let mut hx = vec![Complex64::new(0.0, 0.0); h.nrows()];
            for (&ant, &s) in cfg.combinations()[sym.combination].iter().zip(&sym.symbols) {
                for (m, acc) in hx.iter_mut().enumerate() {
                    *acc += h[(m, ant)] * s;
                }
            }
            hx
        })
        .collect())
}

/// Per column of `y`, the bit pattern minimising `||y - H x||^2`.
/// Ties go to the lowest pattern value.
pub fn ml_gsm_patterns(
    y: &DMatrix<Complex64>,
    h: &DMatrix<Complex64>,
    cfg: &GsmConfig,
) -> Result<Vec<usize>> {
    if y.nrows() != h.nrows() {
        return Err(Error::Dimension(format!(
            "Y has {} rows, H has {}",
            y.nrows(),
            h.nrows()
        )));
    }
    let hyps = gsm_hypotheses(h, cfg)?;
    Ok(y.column_iter()
        .map(|col| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (p, hx) in hyps.iter().enumerate() {
                let mut d = 0.0;
                for (a, b) in col.iter().zip(hx) {
                    d += (a - b).norm_sqr();
                    if d >= best_d {
                        break;
                    }
                }
                if d < best_d {
                    best_d = d;
                    best = p;
                }
            }
            best
        })
        .collect())
}

pub fn ml_gsm_detect(
    y: &DMatrix<Complex64>,
    h: &DMatrix<Complex64>,
    cfg: &GsmConfig,
) -> Result<Vec<u8>> {
    let b = cfg.bits_per_symbol();
    let mut out = Vec::with_capacity(y.ncols() * b);
    for p in ml_gsm_patterns(y, h, cfg)? {
        bits::push_index(p, b, &mut out);
    }
    Ok(out)
}
