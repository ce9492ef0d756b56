//! Monte-Carlo BER sweeps.
//!
//! Every frame draws from its own ChaCha8 stream: the generator is seeded
//! with the master seed and its stream id is set to `(point << 32) | frame`,
//! where `point` is the sweep index and `frame` the frame counter at that
//! point. Frames run in parallel batches but are accumulated in frame order
//! and the stop rule is checked after each frame, so serial and parallel
//! runs give identical counts.

mod frame;

pub use frame::{
    ed_thresholds, hard_frame_detect, modulate, propagate, EdReceiver, RxContext, Scheme, Signal,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits;
use crate::channel::{los_mimo_matrix, normalized, rayleigh_matrix, LosMimoGeometry};
use crate::error::{Error, Result};
use crate::fec::BchCode;
use crate::linkplan::fmt6;

pub const DEFAULT_MAX_BITS: u64 = 1_000_000;
pub const DEFAULT_MAX_ERRORS: u64 = 100;
pub const DEFAULT_FRAME_PERIODS: usize = 256;
const BATCH: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    /// `H = I`.
    Identity,
    /// I.i.d. `CN(0, 1)` entries, redrawn every frame.
    Rayleigh { n_rx: usize },
    /// Fixed line-of-sight array channel.
    Los(LosMimoGeometry),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    /// Es/N0 per receive antenna for a unit-gain channel: `N0 = 10^(-snr/10)`,
    /// LoS channels normalised to unit mean gain. `+inf` disables noise.
    SnrDb,
    /// Per-antenna transmit power against a receiver noise floor: the
    /// absolute channel is scaled by `10^((p - noise_dbm) / 20)`, `N0 = 1`.
    TxPowerDbm { noise_dbm: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub channel: ChannelKind,
    pub pn_sigma2: f64,
    pub axis: SweepAxis,
    pub points: Vec<f64>,
    /// Applied independently to every 63-bit block of the frame.
    pub code: Option<BchCode>,
    /// Symbol periods per frame before rounding up to whole codewords.
    pub frame_periods: usize,
    pub max_bits: u64,
    pub max_errors: u64,
    pub seed: u64,
    pub parallel: bool,
}

impl RunConfig {
    pub fn new(scheme: Scheme, points: Vec<f64>, seed: u64) -> Self {
        Self {
            scheme,
            channel: ChannelKind::Identity,
            pn_sigma2: 0.0,
            axis: SweepAxis::SnrDb,
            points,
            code: None,
            frame_periods: DEFAULT_FRAME_PERIODS,
            max_bits: DEFAULT_MAX_BITS,
            max_errors: DEFAULT_MAX_ERRORS,
            seed,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidPlan("sweep has no points".into()));
        }
        if self.points.iter().any(|p| p.is_nan()) {
            return Err(Error::InvalidPlan("sweep point is NaN".into()));
        }
        if self.frame_periods == 0 || self.max_bits == 0 {
            return Err(Error::InvalidPlan(
                "frame size and bit budget must be positive".into(),
            ));
        }
        if !(self.pn_sigma2 >= 0.0) {
            return Err(Error::InvalidChannel(format!(
                "phase-noise variance {} is negative",
                self.pn_sigma2
            )));
        }
        if let ChannelKind::Los(g) = &self.channel {
            g.validate()?;
            if g.n_tx != self.scheme.nt() {
                return Err(Error::Dimension(format!(
                    "geometry has {} transmit elements, scheme uses {}",
                    g.n_tx,
                    self.scheme.nt()
                )));
            }
        }
        if let ChannelKind::Rayleigh { n_rx: 0 } = self.channel {
            return Err(Error::InvalidChannel(
                "Rayleigh channel needs at least one receive antenna".into(),
            ));
        }
        Ok(())
    }

    /// `(symbol periods, coded bits, information bits)` per frame.
    pub fn frame_layout(&self) -> (usize, usize, usize) {
        let b = self.scheme.bits_per_period();
        match &self.code {
            None => (
                self.frame_periods,
                self.frame_periods * b,
                self.frame_periods * b,
            ),
            Some(code) => {
                let unit = lcm(code.n(), b) / b;
                let periods = self.frame_periods.div_ceil(unit) * unit;
                let coded = periods * b;
                (periods, coded, coded / code.n() * code.k())
            }
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    /// Sweep value: SNR in dB or transmit power in dBm.
    pub point: f64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frames: u64,
    pub frame_errors: u64,
}

impl PointResult {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }
}

/// Channel and noise for one sweep point. `h` is `None` when it is redrawn
/// per frame.
struct PointSetup {
    h: Option<DMatrix<Complex64>>,
    scale: f64,
    n0: f64,
    thresholds: Option<Vec<f64>>,
}

fn setup_point(cfg: &RunConfig, value: f64) -> Result<PointSetup> {
    let nt = cfg.scheme.nt();
    let base = match &cfg.channel {
        ChannelKind::Identity => Some(DMatrix::identity(nt, nt)),
        ChannelKind::Rayleigh { .. } => None,
        ChannelKind::Los(g) => {
            let h = los_mimo_matrix(g)?;
            Some(match cfg.axis {
                SweepAxis::SnrDb => normalized(&h),
                SweepAxis::TxPowerDbm { .. } => h,
            })
        }
    };
    let (scale, n0) = match cfg.axis {
        SweepAxis::SnrDb => (
            1.0,
            if value == f64::INFINITY {
                0.0
            } else {
                10f64.powf(-value / 10.0)
            },
        ),
        SweepAxis::TxPowerDbm { noise_dbm } => (10f64.powf((value - noise_dbm) / 20.0), 1.0),
    };
    let h = base.map(|h| h * Complex64::new(scale, 0.0));
    let thresholds = match (&cfg.scheme, &h) {
        (
            Scheme::OokEd {
                receiver: EdReceiver::PerAntenna(policy),
                ..
            },
            Some(h),
        ) => Some(ed_thresholds(h, n0, *policy)),
        _ => None,
    };
    Ok(PointSetup {
        h,
        scale,
        n0,
        thresholds,
    })
}

/// Frame-level RNG for `(point, frame)`.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | frame);
    rng
}

/// `(information bits, bit errors)` for one frame.
fn run_frame(cfg: &RunConfig, setup: &PointSetup, rng: &mut ChaCha8Rng) -> Result<(u64, u64)> {
    let (_, _, info_len) = cfg.frame_layout();
    let info = bits::random(rng, info_len);
    let coded = match &cfg.code {
        Some(code) => code.encode_stream(&info)?,
        None => info.clone(),
    };
    let drawn;
    let h = match &setup.h {
        Some(h) => h,
        None => {
            let ChannelKind::Rayleigh { n_rx } = cfg.channel else {
                unreachable!("only Rayleigh channels are drawn per frame")
            };
            drawn = rayleigh_matrix(n_rx, cfg.scheme.nt(), rng) * Complex64::new(setup.scale, 0.0);
            &drawn
        }
    };
    let tx = modulate(&cfg.scheme, &coded)?;
    let rx = propagate(h, &tx, setup.n0, cfg.pn_sigma2, rng)?;
    let ctx = RxContext {
        h,
        n0: setup.n0,
        thresholds: setup.thresholds.as_deref(),
    };
    let hard = hard_frame_detect(&cfg.scheme, &rx, ctx)?;
    let decoded = match &cfg.code {
        Some(code) => code.decode_stream(&hard)?.0,
        None => hard,
    };
    Ok((info_len as u64, bits::hamming(&info, &decoded) as u64))
}

/// Runs the sweep; one result per point in sweep order.
pub fn run(cfg: &RunConfig) -> Result<Vec<PointResult>> {
    cfg.validate()?;
    cfg.points
        .iter()
        .enumerate()
        .map(|(p, &value)| run_point(cfg, p, value))
        .collect()
}

fn run_point(cfg: &RunConfig, p: usize, value: f64) -> Result<PointResult> {
    let setup = setup_point(cfg, value)?;
    let mut res = PointResult {
        point: value,
        bits: 0,
        bit_errors: 0,
        frames: 0,
        frame_errors: 0,
    };
    let mut next = 0u64;
    loop {
        let ids: Vec<u64> = (next..next + BATCH as u64).collect();
        next += BATCH as u64;
        let one = |&f: &u64| run_frame(cfg, &setup, &mut frame_rng(cfg.seed, p, f));
        let batch: Vec<Result<(u64, u64)>> = if cfg.parallel {
            ids.par_iter().map(one).collect()
        } else {
            ids.iter().map(one).collect()
        };
        for r in batch {
            let (b, e) = r?;
            res.bits += b;
            res.bit_errors += e;
            res.frames += 1;
            res.frame_errors += (e > 0) as u64;
            if res.bits >= cfg.max_bits || res.bit_errors >= cfg.max_errors {
                return Ok(res);
            }
        }
    }
}

pub fn ber_csv(results: &[PointResult], axis: SweepAxis) -> String {
    let head = match axis {
        SweepAxis::SnrDb => "snr_dB",
        SweepAxis::TxPowerDbm { .. } => "ptx_dBm",
    };
    let mut out = format!("{head},bits,bit_errors,ber,frames,frame_errors\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt6(r.point),
            r.bits,
            r.bit_errors,
            fmt6(r.ber()),
            r.frames,
            r.frame_errors
        ));
    }
    out
}

/// Parses `start:step:stop` (inclusive) or a single value.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let bad = || {
        Error::InvalidPlan(format!(
            "sweep `{spec}` is not `start:step:stop` or a number"
        ))
    };
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, s, b] => {
            let (a, s, b) = (num(a)?, num(s)?, num(b)?);
            if !(s > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
                return Err(bad());
            }
            let n = ((b - a) / s + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * s).collect())
        }
        _ => Err(bad()),
    }
}
