//! Matched-filter-bank FSIM detection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indexmod::FilterBank;
use crate::modem::{correlate, Constellation, Waveform};

#[derive(Debug, Clone, PartialEq)]
pub struct FsimDecision {
    pub indices: Vec<usize>,
    pub labels: Vec<usize>,
    pub symbols: Vec<Complex64>,
    pub bits: Vec<u8>,
}

/// Runs every matched filter of the bank and, per symbol instant, picks the
/// `(filter i, symbol s)` pair maximising `2 Re(s* z_i) - |s|^2 rho_ii`,
/// where `z_i` is filter `i`'s output and `rho_ii` its energy from the bank
/// correlation matrix. Ties go to the lowest `(i, label)` bit pattern.
/// Only zero-lag terms enter the metric; cross-symbol leakage between
/// different filters is treated as noise.
pub fn fsim_detect(
    waveform: &Waveform,
    bank: &FilterBank,
    constellation: &Constellation,
) -> Result<FsimDecision> {
    if waveform.sps != bank.sps() {
        return Err(Error::SpsMismatch {
            waveform: waveform.sps,
            filter: bank.sps(),
        });
    }
    let outputs: Vec<Vec<Complex64>> = bank
        .filters()
        .iter()
        .map(|f| correlate(waveform, f.taps()))
        .collect();
    Ok(decide_from_outputs(&outputs, bank, constellation))
}

/// Joint decisions from precomputed matched-filter outputs (`outputs[i][k]`).
pub fn decide_from_outputs(
    outputs: &[Vec<Complex64>],
    bank: &FilterBank,
    constellation: &Constellation,
) -> FsimDecision {
    let k_total = outputs.first().map_or(0, Vec::len);
    let index_bits = bank.index_bits().unwrap_or(0);
    let apm_bits = constellation.bits_per_symbol();
    let energies: Vec<f64> = constellation
        .points()
        .iter()
        .map(|p| p.norm_sqr())
        .collect();
    let mut dec = FsimDecision {
        indices: Vec::with_capacity(k_total),
        labels: Vec::with_capacity(k_total),
        symbols: Vec::with_capacity(k_total),
        bits: Vec::with_capacity(k_total * (index_bits + apm_bits)),
    };
    let rho = bank.cross_correlation();
    for k in 0..k_total {
        let mut best = (0usize, 0usize);
        let mut best_metric = f64::NEG_INFINITY;
        for (i, out) in outputs.iter().enumerate() {
            let z = out[k];
            for (label, p) in constellation.points().iter().enumerate() {
                let metric = 2.0 * (p.conj() * z).re - energies[label] * rho[i][i];
                if metric > best_metric {
                    best_metric = metric;
                    best = (i, label);
                }
            }
        }
        dec.indices.push(best.0);
        dec.labels.push(best.1);
        dec.symbols.push(constellation.point(best.1));
        crate::bits::push_index(best.0, index_bits, &mut dec.bits);
        crate::bits::push_index(best.1, apm_bits, &mut dec.bits);
    }
    dec
}
