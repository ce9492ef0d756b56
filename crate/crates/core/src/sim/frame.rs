//! One frame through transmitter, channel and hard-decision receiver.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{apply_mimo, complex_gaussian};
use crate::detect::{
    ed_mimo_joint, energies, energy_detect_columns, equalizer_matrix, fsim_detect, ml_gsm_detect,
    LinearMode, ThresholdPolicy,
};
use crate::error::{Error, Result};
use crate::indexmod::{
    fsim_map, fsim_modulate, gsm_frame, merge_streams, smx_fsim_frame, FsimConfig, GsmConfig,
};
use crate::modem::{Constellation, Waveform};

/// Energy-detection receiver for OOK.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdReceiver {
    /// Per-antenna thresholds; `None` picks the default policy for the
    /// noise level.
    PerAntenna(Option<ThresholdPolicy>),
    Joint,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// Single-stream APM, maximum-ratio combined over the receive antennas.
    Apm(Constellation),
    Gsm(GsmConfig),
    /// Single-stream FSIM.
    Fsim(FsimConfig),
    SmxFsim {
        nt: usize,
        cfg: FsimConfig,
        receiver: LinearMode,
    },
    /// `{0, sqrt 2}` on every transmit antenna.
    OokEd {
        nt: usize,
        receiver: EdReceiver,
    },
}

impl Scheme {
    pub fn nt(&self) -> usize {
        match self {
            Scheme::Apm(_) | Scheme::Fsim(_) => 1,
            Scheme::Gsm(cfg) => cfg.nt(),
            Scheme::SmxFsim { nt, .. } | Scheme::OokEd { nt, .. } => *nt,
        }
    }

    /// Bits carried by one symbol period across all antennas.
    pub fn bits_per_period(&self) -> usize {
        match self {
            Scheme::Apm(c) => c.bits_per_symbol(),
            Scheme::Gsm(cfg) => cfg.bits_per_symbol(),
            Scheme::Fsim(cfg) => cfg.bits_per_symbol(),
            Scheme::SmxFsim { nt, cfg, .. } => nt * cfg.bits_per_symbol(),
            Scheme::OokEd { nt, .. } => *nt,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Apm(_) => "apm",
            Scheme::Gsm(_) => "gsm",
            Scheme::Fsim(_) => "fsim",
            Scheme::SmxFsim { .. } => "smx-fsim",
            Scheme::OokEd { .. } => "ook-ed",
        }
    }
}

/// Transmit signal for one frame.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    /// `antennas x symbol periods`.
    Symbols(DMatrix<Complex64>),
    /// One sampled waveform per antenna, all the same length.
    Waveforms(Vec<Waveform>),
}

pub fn modulate(scheme: &Scheme, bits: &[u8]) -> Result<Signal> {
    match scheme {
        Scheme::Apm(c) => {
            let x = c.map_bits(bits)?;
            Ok(Signal::Symbols(DMatrix::from_row_slice(1, x.len(), &x)))
        }
        Scheme::Gsm(cfg) => Ok(Signal::Symbols(gsm_frame(cfg, bits)?)),
        Scheme::Fsim(cfg) => {
            let (idx, sym) = fsim_map(cfg, bits)?;
            Ok(Signal::Waveforms(vec![fsim_modulate(
                &idx,
                &sym,
                cfg.bank(),
            )?]))
        }
        Scheme::SmxFsim { nt, cfg, .. } => Ok(Signal::Waveforms(smx_fsim_frame(*nt, cfg, bits)?)),
        Scheme::OokEd { nt, .. } => {
            if *nt == 0 || !bits.len().is_multiple_of(*nt) {
                return Err(Error::RaggedBits {
                    len: bits.len(),
                    per_symbol: *nt,
                });
            }
            let on = Complex64::new(2f64.sqrt(), 0.0);
            let k = bits.len() / nt;
            Ok(Signal::Symbols(DMatrix::from_fn(*nt, k, |a, j| {
                on * bits[j * nt + a] as f64
            })))
        }
    }
}

/// Channel `h`, then phase noise and AWGN of power `n0` per receive sample.
///
/// Symbol-domain signals see one phase draw per antenna and symbol. For
/// waveforms the phase is held over each block of `sps` samples. Draws are
/// row-major (antenna, then time): all phase draws before all noise draws.
pub fn propagate<R: Rng + ?Sized>(
    h: &DMatrix<Complex64>,
    signal: &Signal,
    n0: f64,
    pn_sigma2: f64,
    rng: &mut R,
) -> Result<Signal> {
    match signal {
        Signal::Symbols(x) => Ok(Signal::Symbols(apply_mimo(h, x, n0, pn_sigma2, rng)?)),
        Signal::Waveforms(ws) => {
            if ws.len() != h.ncols() {
                return Err(Error::Dimension(format!(
                    "H has {} columns for {} waveforms",
                    h.ncols(),
                    ws.len()
                )));
            }
            if !(pn_sigma2 >= 0.0) {
                return Err(Error::InvalidChannel(format!(
                    "phase-noise variance {pn_sigma2} is negative"
                )));
            }
            let len = ws[0].len();
            let sps = ws[0].sps;
            let mut out: Vec<Waveform> = (0..h.nrows())
                .map(|m| {
                    let mut y = Waveform::zeros(len, sps);
                    for (n, w) in ws.iter().enumerate() {
                        let g = h[(m, n)];
                        for (a, b) in y.samples.iter_mut().zip(&w.samples) {
                            *a += g * b;
                        }
                    }
                    y
                })
                .collect();
            if pn_sigma2 > 0.0 {
                let sigma = pn_sigma2.sqrt();
                for y in out.iter_mut() {
                    for block in y.samples.chunks_mut(sps) {
                        let phi: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
                        let rot = Complex64::cis(phi);
                        block.iter_mut().for_each(|s| *s *= rot);
                    }
                }
            }
            if n0 > 0.0 {
                let sigma = (n0 / 2.0).sqrt();
                for y in out.iter_mut() {
                    y.samples
                        .iter_mut()
                        .for_each(|s| *s += complex_gaussian(rng, sigma));
                }
            }
            Ok(Signal::Waveforms(out))
        }
    }
}

/// Receiver side knowledge: channel, noise power and optional precomputed
/// per-antenna energy thresholds.
#[derive(Debug, Clone, Copy)]
pub struct RxContext<'a> {
    pub h: &'a DMatrix<Complex64>,
    pub n0: f64,
    pub thresholds: Option<&'a [f64]>,
}

/// Thresholds the per-antenna OOK receiver would use for `h` and `n0`.
pub fn ed_thresholds(h: &DMatrix<Complex64>, n0: f64, policy: Option<ThresholdPolicy>) -> Vec<f64> {
    let policy = policy.unwrap_or_else(|| ThresholdPolicy::for_noise(Some(n0)));
    let on = Complex64::new(2f64.sqrt(), 0.0);
    (0..h.nrows().min(h.ncols()))
        .map(|m| policy.resolve(Complex64::new(0.0, 0.0), h[(m, m)] * on))
        .collect()
}

/// Hard bits in transmitter order for a received frame.
pub fn hard_frame_detect(scheme: &Scheme, rx: &Signal, ctx: RxContext<'_>) -> Result<Vec<u8>> {
    let h = ctx.h;
    if h.ncols() != scheme.nt() {
        return Err(Error::Dimension(format!(
            "{} scheme has {} transmit antennas, H has {} columns",
            scheme.name(),
            scheme.nt(),
            h.ncols()
        )));
    }
    match (scheme, rx) {
        (Scheme::Apm(c), Signal::Symbols(y)) => {
            let z = combine_rows(
                y.row_iter().map(|r| r.iter().copied().collect()).collect(),
                h,
            )?;
            Ok(c.demap_hard(&z))
        }
        (Scheme::Gsm(cfg), Signal::Symbols(y)) => ml_gsm_detect(y, h, cfg),
        (Scheme::OokEd { receiver, .. }, Signal::Symbols(y)) => match receiver {
            EdReceiver::Joint => ed_mimo_joint(&energies(y), h, ctx.n0),
            EdReceiver::PerAntenna(policy) => {
                if h.nrows() != h.ncols() {
                    return Err(Error::Dimension(format!(
                        "per-antenna detection needs a square channel, H is {}x{}",
                        h.nrows(),
                        h.ncols()
                    )));
                }
                match ctx.thresholds {
                    Some(t) => energy_detect_columns(y, t),
                    None => energy_detect_columns(y, &ed_thresholds(h, ctx.n0, *policy)),
                }
            }
        },
        (Scheme::Fsim(cfg), Signal::Waveforms(ys)) => {
            let sps = ys.first().map_or(cfg.bank().sps(), |w| w.sps);
            let samples = combine_rows(ys.iter().map(|w| w.samples.clone()).collect(), h)?;
            Ok(fsim_detect(&Waveform { samples, sps }, cfg.bank(), cfg.constellation())?.bits)
        }
        (Scheme::SmxFsim { cfg, receiver, .. }, Signal::Waveforms(ys)) => {
            if ys.len() != h.nrows() {
                return Err(Error::Dimension(format!(
                    "{} receive waveforms, H has {} rows",
                    ys.len(),
                    h.nrows()
                )));
            }
            let w = equalizer_matrix(h, *receiver, ctx.n0)?;
            let len = ys[0].len();
            let sps = ys[0].sps;
            let mut streams = Vec::with_capacity(w.nrows());
            for s in 0..w.nrows() {
                let mut est = Waveform::zeros(len, sps);
                for (m, y) in ys.iter().enumerate() {
                    let g = w[(s, m)];
                    for (a, b) in est.samples.iter_mut().zip(&y.samples) {
                        *a += g * b;
                    }
                }
                streams.push(fsim_detect(&est, cfg.bank(), cfg.constellation())?.bits);
            }
            Ok(merge_streams(&streams, cfg.bits_per_symbol()))
        }
        _ => Err(Error::Dimension(format!(
            "received signal does not match the {} scheme",
            scheme.name()
        ))),
    }
}

/// Maximum-ratio combining of single-stream rows: `h^H y / |h|^2`.
fn combine_rows(rows: Vec<Vec<Complex64>>, h: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if rows.len() != h.nrows() || h.ncols() != 1 {
        return Err(Error::Dimension(format!(
            "single-stream combining needs an M x 1 channel matching {} receive rows, H is {}x{}",
            rows.len(),
            h.nrows(),
            h.ncols()
        )));
    }
    let norm: f64 = h.iter().map(|g| g.norm_sqr()).sum();
    if norm == 0.0 {
        return Err(Error::RankDeficient { rank: 0, cols: 1 });
    }
    let len = rows.first().map_or(0, Vec::len);
    let mut z = vec![Complex64::new(0.0, 0.0); len];
    for (m, row) in rows.iter().enumerate() {
        let g = h[(m, 0)].conj() / norm;
        for (a, b) in z.iter_mut().zip(row) {
            *a += g * b;
        }
    }
    Ok(z)
}
