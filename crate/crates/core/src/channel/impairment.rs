//! Oscillator phase noise and additive white Gaussian noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Gaussian phase-noise model driven by a flat noise floor.
///
/// The phase of every sample is perturbed by an independent
/// `N(0, sigma^2)` draw with `sigma^2 = 10^(floor/10) * B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseModel {
    pub floor_dbc_hz: f64,
    pub bandwidth_hz: f64,
}

impl PhaseNoiseModel {
    pub fn new(floor_dbc_hz: f64, bandwidth_hz: f64) -> Result<Self> {
        if !(bandwidth_hz > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "bandwidth {bandwidth_hz} Hz must be positive"
            )));
        }
        Ok(Self {
            floor_dbc_hz,
            bandwidth_hz,
        })
    }

    /// Model with phase noise switched off.
    pub fn disabled(bandwidth_hz: f64) -> Self {
        Self {
            floor_dbc_hz: f64::NEG_INFINITY,
            bandwidth_hz,
        }
    }

    pub fn sigma2_rad2(&self) -> f64 {
        pn_variance(self.floor_dbc_hz, self.bandwidth_hz)
    }
}

/// Phase variance (rad^2) of a flat floor integrated over `bandwidth_hz`.
/// A floor of `-inf` disables phase noise.
pub fn pn_variance(floor_dbc_hz: f64, bandwidth_hz: f64) -> f64 {
    10f64.powf(floor_dbc_hz / 10.0) * bandwidth_hz
}

/// Rotates every sample by an independent `N(0, sigma2)` phase.
/// No random numbers are drawn when `sigma2 == 0`.
pub fn add_phase_noise<R: Rng + ?Sized>(
    signal: &mut [Complex64],
    sigma2: f64,
    rng: &mut R,
) -> Result<()> {
    if !(sigma2 >= 0.0) {
        return Err(Error::InvalidChannel(format!(
            "phase-noise variance {sigma2} is negative"
        )));
    }
    if sigma2 == 0.0 {
        return Ok(());
    }
    let sigma = sigma2.sqrt();
    for s in signal.iter_mut() {
        let phi: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
        *s *= Complex64::cis(phi);
    }
    Ok(())
}

/// Noise level for [`add_awgn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLevel {
    /// Total complex noise power `E|n|^2` per sample.
    Power(f64),
    /// Target SNR in dB against the measured mean power of the input.
    SnrDb(f64),
}

/// Adds circular complex Gaussian noise; returns the noise power used.
/// Each sample draws its real part, then its imaginary part.
pub fn add_awgn<R: Rng + ?Sized>(signal: &mut [Complex64], level: NoiseLevel, rng: &mut R) -> f64 {
    let n0 = match level {
        NoiseLevel::Power(p) => p.max(0.0),
        NoiseLevel::SnrDb(snr) => {
            if signal.is_empty() {
                return 0.0;
            }
            let p = signal.iter().map(|s| s.norm_sqr()).sum::<f64>() / signal.len() as f64;
            p / 10f64.powf(snr / 10.0)
        }
    };
    if n0 > 0.0 {
        let sigma = (n0 / 2.0).sqrt();
        for s in signal.iter_mut() {
            *s += complex_gaussian(rng, sigma);
        }
    }
    n0
}

/// `sigma * (N(0,1) + j N(0,1))`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(sigma * re, sigma * im)
}
