//! Filter shape index modulation (FSIM) and its spatially multiplexed form.
//!
//! Each symbol period selects one of `N` pulse shapes from a [`FilterBank`];
//! the filter index carries `log2 N` bits on top of the APM symbol. Per
//! symbol period the bit layout is `[filter index][APM label]`, MSB first.
//!
//! SMX-FSIM splits the bit stream round-robin over `Nt` streams in chunks of
//! one FSIM symbol: period `k` carries stream 0's chunk, then stream 1's, ...

use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::bits::{self, exact_log2};
use crate::error::{Error, Result};
use crate::modem::{build_rrc, Constellation, PulseFilter, Waveform, DEFAULT_RRC_BETA};

pub const DEFAULT_CORR_MAX: f64 = 0.95;

/// Pulse shapes sharing length and oversampling, with their zero-lag
/// cross-correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    filters: Vec<PulseFilter>,
    xcorr: Vec<Vec<f64>>,
}

impl FilterBank {
    /// Validates shared geometry and that every off-diagonal `|rho_ij|` is
    /// strictly below `corr_max`.
    pub fn new(filters: Vec<PulseFilter>, corr_max: f64) -> Result<Self> {
        let first = filters
            .first()
            .ok_or_else(|| Error::InvalidIndexConfig("empty filter bank".into()))?;
        let (sps, len) = (first.sps(), first.taps().len());
        if filters
            .iter()
            .any(|f| f.sps() != sps || f.taps().len() != len)
        {
            return Err(Error::InvalidIndexConfig(
                "bank filters must share samples-per-symbol and span".into(),
            ));
        }
        let n = filters.len();
        let xcorr: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| filters[i].inner(&filters[j])).collect())
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if xcorr[i][j].abs() >= corr_max {
                    return Err(Error::BankCorrelation {
                        i,
                        j,
                        corr: xcorr[i][j],
                        limit: corr_max,
                    });
                }
            }
        }
        Ok(Self { filters, xcorr })
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn filters(&self) -> &[PulseFilter] {
        &self.filters
    }

    pub fn filter(&self, i: usize) -> &PulseFilter {
        &self.filters[i]
    }

    pub fn cross_correlation(&self) -> &[Vec<f64>] {
        &self.xcorr
    }

    pub fn sps(&self) -> usize {
        self.filters[0].sps()
    }

    pub fn taps_len(&self) -> usize {
        self.filters[0].taps().len()
    }

    /// `log2 N`, or an error when `N` is not a power of two.
    pub fn index_bits(&self) -> Result<usize> {
        exact_log2(self.len()).ok_or_else(|| {
            Error::InvalidIndexConfig(format!("bank size {} is not a power of two", self.len()))
        })
    }
}

/// Default bank of `N` in {2, 4} filters.
///
/// Filter 0 is RRC(0.3). The others are the same RRC multiplied by
/// `sqrt(2) sin(2 pi f t)` or `sqrt(2) cos(2 pi f t)` (time `t` in symbol
/// periods): N = 2 adds `sin` at `f = 1`; N = 4 adds `sin` at 1 plus `cos`
/// and `sin` at 2. Modulated copies remain Nyquist and are orthogonal to the
/// base pulse at zero lag, at the price of occupying up to
/// `f + (1 + beta)/2` cycles per symbol.
pub fn build_default_bank(n: usize, sps: usize, span: usize) -> Result<FilterBank> {
    let plan: &[(fn(f64) -> f64, f64)] = match n {
        2 => &[(f64::sin, 1.0)],
        4 => &[(f64::sin, 1.0), (f64::cos, 2.0), (f64::sin, 2.0)],
        _ => {
            return Err(Error::InvalidIndexConfig(format!(
                "default bank supports N in {{2, 4}}, got {n}"
            )))
        }
    };
    let base = build_rrc(DEFAULT_RRC_BETA, span, sps)?;
    let f_max = plan.iter().map(|p| p.1).fold(0.0, f64::max) + (1.0 + DEFAULT_RRC_BETA) / 2.0;
    if (sps as f64) / 2.0 <= f_max {
        return Err(Error::InvalidIndexConfig(format!(
            "{sps} samples per symbol cannot represent a bank reaching {f_max} cycles per symbol"
        )));
    }
    let mut filters = vec![base.clone()];
    for &(osc, f) in plan {
        let taps = base
            .time_axis()
            .zip(base.taps())
            .map(|(t, &h)| SQRT_2 * h * osc(2.0 * PI * f * t))
            .collect();
        filters.push(PulseFilter::new(taps, sps)?);
    }
    FilterBank::new(filters, DEFAULT_CORR_MAX)
}

/// `log2 M + log2 N`.
pub fn fsim_bits_per_symbol(n: usize, m: usize) -> Result<usize> {
    let nb = exact_log2(n).ok_or_else(|| {
        Error::InvalidIndexConfig(format!("filter count {n} is not a power of two"))
    })?;
    let mb = exact_log2(m).ok_or_else(|| {
        Error::InvalidIndexConfig(format!("modulation order {m} is not a power of two"))
    })?;
    Ok(nb + mb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsimConfig {
    bank: FilterBank,
    constellation: Constellation,
}

impl FsimConfig {
    pub fn new(bank: FilterBank, constellation: Constellation) -> Result<Self> {
        bank.index_bits()?;
        Ok(Self {
            bank,
            constellation,
        })
    }

    pub fn bank(&self) -> &FilterBank {
        &self.bank
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn index_bits(&self) -> usize {
        self.bank.index_bits().expect("validated at construction")
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.index_bits() + self.constellation.bits_per_symbol()
    }

    /// Bits of one `(filter, label)` decision.
    pub fn push_bits(&self, index: usize, label: usize, out: &mut Vec<u8>) {
        bits::push_index(index, self.index_bits(), out);
        bits::push_index(label, self.constellation.bits_per_symbol(), out);
    }
}

/// Splits bits into filter indices and APM symbols.
pub fn fsim_map(cfg: &FsimConfig, bits: &[u8]) -> Result<(Vec<usize>, Vec<Complex64>)> {
    let b = cfg.bits_per_symbol();
    if !bits.len().is_multiple_of(b) {
        return Err(Error::RaggedBits {
            len: bits.len(),
            per_symbol: b,
        });
    }
    let ib = cfg.index_bits();
    let (indices, symbols) = bits
        .chunks(b)
        .map(|c| {
            (
                bits::to_index(&c[..ib]),
                cfg.constellation.point(bits::to_index(&c[ib..])),
            )
        })
        .unzip();
    Ok((indices, symbols))
}

/// `sum_k symbol_k * filter_{index_k}(t - k T)`.
pub fn fsim_modulate(
    indices: &[usize],
    symbols: &[Complex64],
    bank: &FilterBank,
) -> Result<Waveform> {
    if indices.len() != symbols.len() {
        return Err(Error::Dimension(format!(
            "{} filter indices for {} symbols",
            indices.len(),
            symbols.len()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= bank.len()) {
        return Err(Error::InvalidIndexConfig(format!(
            "filter index {bad} outside bank of {}",
            bank.len()
        )));
    }
    if symbols.is_empty() {
        return Ok(Waveform::zeros(0, bank.sps()));
    }
    let mut w = Waveform::zeros(
        (symbols.len() - 1) * bank.sps() + bank.taps_len(),
        bank.sps(),
    );
    for (k, (&i, &s)) in indices.iter().zip(symbols).enumerate() {
        w.accumulate(k, s, bank.filter(i).taps());
    }
    Ok(w)
}

/// Splits a bit stream round-robin into `nt` streams of `chunk`-bit pieces.
pub fn split_streams(nt: usize, chunk: usize, bits: &[u8]) -> Result<Vec<Vec<u8>>> {
    let period = nt * chunk;
    if nt == 0 || chunk == 0 || !bits.len().is_multiple_of(period) {
        return Err(Error::RaggedBits {
            len: bits.len(),
            per_symbol: period,
        });
    }
    let mut streams = vec![Vec::with_capacity(bits.len() / nt); nt];
    for block in bits.chunks(period) {
        for (s, piece) in block.chunks(chunk).enumerate() {
            streams[s].extend_from_slice(piece);
        }
    }
    Ok(streams)
}

/// Inverse of [`split_streams`].
pub fn merge_streams(streams: &[Vec<u8>], chunk: usize) -> Vec<u8> {
    let periods = streams.first().map_or(0, |s| s.len() / chunk);
    let mut out = Vec::with_capacity(periods * chunk * streams.len());
    for k in 0..periods {
        for s in streams {
            out.extend_from_slice(&s[k * chunk..(k + 1) * chunk]);
        }
    }
    out
}

/// One FSIM waveform per transmit antenna.
pub fn smx_fsim_frame(nt: usize, cfg: &FsimConfig, bits: &[u8]) -> Result<Vec<Waveform>> {
    split_streams(nt, cfg.bits_per_symbol(), bits)?
        .iter()
        .map(|stream| {
            let (idx, sym) = fsim_map(cfg, stream)?;
            fsim_modulate(&idx, &sym, &cfg.bank)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::{default_rrc, shape, DEFAULT_RRC_SPAN, DEFAULT_SPS};

    fn default_cfg() -> FsimConfig {
        FsimConfig::new(
            build_default_bank(2, DEFAULT_SPS, DEFAULT_RRC_SPAN).unwrap(),
            Constellation::qpsk(),
        )
        .unwrap()
    }

    #[test]
    fn bits_per_symbol() {
        assert_eq!(fsim_bits_per_symbol(2, 4).unwrap(), 3);
        assert_eq!(fsim_bits_per_symbol(1, 16).unwrap(), 4);
        assert_eq!(fsim_bits_per_symbol(4, 4).unwrap(), 4);
        assert!(fsim_bits_per_symbol(3, 4).is_err());
    }

    #[test]
    fn default_banks_are_valid() {
        for n in [2, 4] {
            let bank = build_default_bank(n, 8, 8).unwrap();
            assert_eq!(bank.len(), n);
            for (i, f) in bank.filters().iter().enumerate() {
                assert!((f.energy() - 1.0).abs() < 1e-12);
                assert!((bank.cross_correlation()[i][i] - 1.0).abs() < 1e-12);
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(bank.cross_correlation()[i][j].abs() < DEFAULT_CORR_MAX);
                    }
                }
            }
        }
        // Filter 1 of the N = 2 bank is odd, so it is orthogonal to the RRC.
        let bank = build_default_bank(2, 8, 8).unwrap();
        assert!(bank.cross_correlation()[0][1].abs() < 1e-12);
        assert!(!bank.filter(1).is_symmetric());
    }

    #[test]
    fn default_bank_rejections() {
        assert!(build_default_bank(1, 8, 8).is_err());
        assert!(build_default_bank(3, 8, 8).is_err());
        assert!(build_default_bank(2, 2, 8).is_err());
        assert!(build_default_bank(4, 4, 8).is_err());
    }

    #[test]
    fn correlated_bank_rejected() {
        let a = build_rrc(0.3, 8, 8).unwrap();
        let b = build_rrc(0.9, 8, 8).unwrap();
        let err = FilterBank::new(vec![a.clone(), b.clone()], DEFAULT_CORR_MAX).unwrap_err();
        assert!(matches!(err, Error::BankCorrelation { .. }));
        assert!(FilterBank::new(vec![a, b], 0.99).is_ok());
    }

    #[test]
    fn single_symbol_is_scaled_filter() {
        let cfg = default_cfg();
        let s = Complex64::new(0.3, -0.7);
        for i in 0..2 {
            let w = fsim_modulate(&[i], &[s], cfg.bank()).unwrap();
            for (y, &h) in w.samples.iter().zip(cfg.bank().filter(i).taps()) {
                assert!((y - s * h).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_filter_bank_matches_shape() {
        let bank = FilterBank::new(vec![default_rrc()], DEFAULT_CORR_MAX).unwrap();
        let syms: Vec<Complex64> = (0..20)
            .map(|k| Complex64::new(k as f64, -(k as f64) / 2.0))
            .collect();
        let w = fsim_modulate(&[0; 20], &syms, &bank).unwrap();
        assert_eq!(w, shape(&syms, &default_rrc()));
    }

    #[test]
    fn map_layout() {
        let cfg = default_cfg();
        let (idx, sym) = fsim_map(&cfg, &[1, 0, 0, 0, 1, 1]).unwrap();
        assert_eq!(idx, vec![1, 0]);
        assert_eq!(
            sym,
            vec![cfg.constellation().point(0), cfg.constellation().point(3)]
        );
        assert!(fsim_map(&cfg, &[0, 1]).is_err());
    }

    #[test]
    fn stream_split_roundtrip() {
        let bits: Vec<u8> = (0..24).map(|i| (i % 3 == 0) as u8).collect();
        let s = split_streams(4, 3, &bits).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(
            s[1],
            bits[3..6]
                .to_vec()
                .into_iter()
                .chain(bits[15..18].iter().copied())
                .collect::<Vec<_>>()
        );
        assert_eq!(merge_streams(&s, 3), bits);
        assert!(split_streams(4, 3, &bits[..10]).is_err());
    }

    #[test]
    fn smx_bits_per_period() {
        let cfg = default_cfg();
        // 4 streams x 3 bits = 12 bits per period; 8 streams -> 24.
        let w = smx_fsim_frame(4, &cfg, &[0; 12]).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w[0].symbol_count(cfg.bank().taps_len()), 1);
        let w = smx_fsim_frame(8, &cfg, &[1; 48]).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(w[7].symbol_count(cfg.bank().taps_len()), 2);
        assert!(smx_fsim_frame(4, &cfg, &[0; 13]).is_err());
    }

    #[test]
    fn smx_single_stream_is_fsim() {
        let cfg = default_cfg();
        let bits: Vec<u8> = (0..30).map(|i| ((i * 7) % 5 < 2) as u8).collect();
        let (idx, sym) = fsim_map(&cfg, &bits).unwrap();
        let direct = fsim_modulate(&idx, &sym, cfg.bank()).unwrap();
        assert_eq!(smx_fsim_frame(1, &cfg, &bits).unwrap(), vec![direct]);
    }
}
