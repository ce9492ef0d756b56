//! Pulse shaping and matched filtering.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Unit-energy real FIR pulse with an odd tap count.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseFilter {
    taps: Vec<f64>,
    sps: usize,
    span: usize,
    symmetric: bool,
    peak: usize,
}

impl PulseFilter {
    /// Wraps `taps` (rescaled to unit energy). The tap count must be
    /// `span * sps + 1` for some whole number of symbols `span`.
    pub fn new(taps: Vec<f64>, sps: usize) -> Result<Self> {
        if sps < 2 {
            return Err(Error::InvalidFilter(format!(
                "samples per symbol {sps} < 2"
            )));
        }
        if taps.len().is_multiple_of(2) || !(taps.len() - 1).is_multiple_of(sps) {
            return Err(Error::InvalidFilter(format!(
                "tap count {} is not span * {sps} + 1",
                taps.len()
            )));
        }
        let energy: f64 = taps.iter().map(|t| t * t).sum();
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidFilter(
                "filter has zero or non-finite energy".into(),
            ));
        }
        let norm = energy.sqrt();
        let taps: Vec<f64> = taps.into_iter().map(|t| t / norm).collect();
        let n = taps.len();
        let symmetric = (0..n / 2).all(|i| (taps[i] - taps[n - 1 - i]).abs() <= 1e-12);
        let peak = taps
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, &t)| {
                if t.abs() > bv {
                    (i, t.abs())
                } else {
                    (bi, bv)
                }
            })
            .0;
        Ok(Self {
            span: (n - 1) / sps,
            taps,
            sps,
            symmetric,
            peak,
        })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn sps(&self) -> usize {
        self.sps
    }

    pub fn span(&self) -> usize {
        self.span
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn peak_index(&self) -> usize {
        self.peak
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }

    /// Zero-lag inner product with another filter of the same length.
    pub fn inner(&self, other: &PulseFilter) -> f64 {
        self.taps.iter().zip(&other.taps).map(|(a, b)| a * b).sum()
    }

    /// Time axis of the taps in symbol periods, centered on the middle tap.
    pub fn time_axis(&self) -> impl Iterator<Item = f64> + '_ {
        let c = (self.taps.len() - 1) as f64 / 2.0;
        let s = self.sps as f64;
        (0..self.taps.len()).map(move |i| (i as f64 - c) / s)
    }
}

/// Root-raised-cosine taps over `span` symbols at `sps` samples per symbol.
///
/// `h(t) = [sin(pi t (1-b)) + 4 b t cos(pi t (1+b))] / [pi t (1 - (4 b t)^2)]`
/// with `t` in symbol periods; `h(0) = 1 - b + 4b/pi` and
/// `h(+-1/(4b)) = b/sqrt(2) [(1 + 2/pi) sin(pi/(4b)) + (1 - 2/pi) cos(pi/(4b))]`.
pub fn build_rrc(beta: f64, span: usize, sps: usize) -> Result<PulseFilter> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidFilter(format!(
            "roll-off {beta} outside (0, 1]"
        )));
    }
    if span < 4 {
        return Err(Error::InvalidFilter(format!("span {span} < 4 symbols")));
    }
    if sps < 2 {
        return Err(Error::InvalidFilter(format!(
            "samples per symbol {sps} < 2"
        )));
    }
    let n = span * sps + 1;
    let c = (n - 1) as f64 / 2.0;
    let taps = (0..n)
        .map(|i| rrc_at((i as f64 - c) / sps as f64, beta))
        .collect();
    PulseFilter::new(taps, sps)
}

fn rrc_at(t: f64, beta: f64) -> f64 {
    const EPS: f64 = 1e-9;
    if t.abs() < EPS {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    if ((4.0 * beta * t).abs() - 1.0).abs() < EPS {
        let a = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    let den = PI * t * (1.0 - (4.0 * beta * t).powi(2));
    num / den
}

/// Complex baseband samples at `sps` samples per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<Complex64>,
    pub sps: usize,
}

impl Waveform {
    pub fn zeros(len: usize, sps: usize) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); len],
            sps,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Symbol count for a waveform built from filters of `taps` length.
    pub fn symbol_count(&self, taps: usize) -> usize {
        if self.samples.len() < taps {
            0
        } else {
            (self.samples.len() - taps) / self.sps + 1
        }
    }

    /// Adds `symbol * taps` starting at symbol slot `k`.
    pub(crate) fn accumulate(&mut self, k: usize, symbol: Complex64, taps: &[f64]) {
        let start = k * self.sps;
        for (w, &h) in self.samples[start..start + taps.len()].iter_mut().zip(taps) {
            *w += symbol * h;
        }
    }
}

/// Upsamples by `S` and convolves with the pulse. Output length is
/// `(K - 1) * S + taps`.
pub fn shape(symbols: &[Complex64], filter: &PulseFilter) -> Waveform {
    if symbols.is_empty() {
        return Waveform::zeros(0, filter.sps);
    }
    let mut w = Waveform::zeros(
        (symbols.len() - 1) * filter.sps + filter.taps.len(),
        filter.sps,
    );
    for (k, &s) in symbols.iter().enumerate() {
        w.accumulate(k, s, &filter.taps);
    }
    w
}

/// Matched filter output sampled at each symbol instant.
///
/// Equivalent to convolving with the time-reversed taps and sampling at
/// `taps - 1 + k S`, which compensates the combined delay of both filters.
pub fn matched_filter(waveform: &Waveform, filter: &PulseFilter) -> Result<Vec<Complex64>> {
    if waveform.sps != filter.sps {
        return Err(Error::SpsMismatch {
            waveform: waveform.sps,
            filter: filter.sps,
        });
    }
    Ok(correlate(waveform, &filter.taps))
}

pub(crate) fn correlate(waveform: &Waveform, taps: &[f64]) -> Vec<Complex64> {
    let k = waveform.symbol_count(taps.len());
    (0..k)
        .map(|i| {
            let seg = &waveform.samples[i * waveform.sps..i * waveform.sps + taps.len()];
            seg.iter().zip(taps).map(|(w, &h)| w * h).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;
    use crate::modem::Constellation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rrc_unit_energy() {
        for (b, span, sps) in [
            (0.3, 8, 8),
            (0.1, 4, 2),
            (1.0, 8, 8),
            (0.5, 12, 4),
            (0.25, 6, 4),
        ] {
            let f = build_rrc(b, span, sps).unwrap();
            assert!((f.energy() - 1.0).abs() < 1e-12);
            assert_eq!(f.taps().len(), span * sps + 1);
            assert!(f.is_symmetric());
            assert_eq!(f.peak_index(), span * sps / 2);
        }
    }

    #[test]
    fn rrc_singular_instants_are_finite() {
        // beta = 1 puts t = +-1/4 on the grid at sps = 8 (samples 2 and -2).
        let f = build_rrc(1.0, 8, 8).unwrap();
        assert!(f.taps().iter().all(|t| t.is_finite()));
        let c = f.peak_index();
        let t2 = f.taps()[c + 2];
        let around = (f.taps()[c + 1] + f.taps()[c + 3]) / 2.0;
        assert!((t2 - around).abs() < 0.05, "{t2} vs neighbours {around}");
    }

    #[test]
    fn rrc_rejects_bad_params() {
        assert!(build_rrc(0.0, 8, 8).is_err());
        assert!(build_rrc(1.2, 8, 8).is_err());
        assert!(build_rrc(0.3, 3, 8).is_err());
        assert!(build_rrc(0.3, 8, 1).is_err());
    }

    #[test]
    fn truncated_rrc_is_near_nyquist() {
        let f = build_rrc(0.3, 8, 8).unwrap();
        let taps = f.taps();
        let n = taps.len();
        // Full self-convolution, sampled at symbol spacing around the peak.
        let mut g = vec![0.0; 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                g[i + j] += taps[i] * taps[n - 1 - j];
            }
        }
        let peak = g[n - 1];
        let mut idx = (n - 1) % 8;
        while idx < g.len() {
            if idx != n - 1 {
                assert!(
                    g[idx].abs() < 1e-2 * peak,
                    "lag {} -> {}",
                    idx as i64 - (n as i64 - 1),
                    g[idx]
                );
            }
            idx += 8;
        }
    }

    fn roundtrip_error(span: usize) -> (f64, bool) {
        let f = build_rrc(0.3, span, 8).unwrap();
        let c = Constellation::qpsk();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = bits::random(&mut rng, 2 * 2000);
        let x = c.map_bits(&b).unwrap();
        let z = matched_filter(&shape(&x, &f), &f).unwrap();
        assert_eq!(z.len(), x.len());
        let worst = x
            .iter()
            .zip(&z)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        (worst, c.demap_hard(&z) == b)
    }

    #[test]
    fn shape_then_matched_filter_recovers_qpsk() {
        // Sum of |g(kT)|, k != 0, for the truncated RRC(0.3) self-convolution:
        // 0.0246 at span 8, 0.0024 at span 20.
        let (worst, exact) = roundtrip_error(8);
        assert!(worst < 0.0247, "span 8 max error {worst}");
        assert!(exact);
        let (worst, exact) = roundtrip_error(20);
        assert!(worst < 1e-2, "span 20 max error {worst}");
        assert!(exact);
    }

    #[test]
    fn zero_and_impulse() {
        let f = build_rrc(0.3, 8, 8).unwrap();
        let w = shape(&[Complex64::new(0.0, 0.0); 5], &f);
        assert!(w.samples.iter().all(|s| s.norm() == 0.0));
        let w = shape(&[Complex64::new(1.0, 0.0)], &f);
        assert_eq!(w.samples.len(), f.taps().len());
        for (s, t) in w.samples.iter().zip(f.taps()) {
            assert_eq!(s.re, *t);
            assert_eq!(s.im, 0.0);
        }
    }

    #[test]
    fn mismatched_sps_rejected() {
        let f = build_rrc(0.3, 8, 8).unwrap();
        let g = build_rrc(0.3, 8, 4).unwrap();
        let w = shape(&[Complex64::new(1.0, 0.0)], &f);
        assert!(matches!(
            matched_filter(&w, &g),
            Err(Error::SpsMismatch { .. })
        ));
    }
}
