//! Line-of-sight MIMO channel between two uniform linear arrays.
//!
//! Geometry: the transmit array is centred at the origin, the receive array
//! at `(0, 0, d)`. Both arrays lie along the x axis when `tilt_deg == 0`
//! (broadside) and face each other along z. Element-to-element distances
//! are exact (spherical wavefront).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use super::impairment::complex_gaussian;
use super::propagation::{fspl_db, wavelength_m, AntennaPattern};
use crate::error::{Error, Result};
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosMimoGeometry {
    pub carrier_hz: f64,
    pub n_tx: usize,
    pub m_rx: usize,
    pub tx_spacing_m: f64,
    pub rx_spacing_m: f64,
    pub distance_m: f64,
    /// Rotation of both array axes away from broadside, in the x-z plane.
    pub tilt_deg: f64,
    pub tx_pattern: AntennaPattern,
    pub rx_pattern: AntennaPattern,
}

/// Element spacing that makes an `n`-element LoS link orthogonal:
/// `sqrt(lambda d / n)`.
pub fn rayleigh_spacing(carrier_hz: f64, distance_m: f64, n: usize) -> f64 {
    (wavelength_m(carrier_hz) * distance_m / n as f64).sqrt()
}

impl LosMimoGeometry {
    /// Broadside arrays with half-wavelength spacing.
    pub fn half_wavelength(
        carrier_hz: f64,
        n_tx: usize,
        m_rx: usize,
        distance_m: f64,
        pattern: AntennaPattern,
    ) -> Self {
        let s = wavelength_m(carrier_hz) / 2.0;
        Self {
            carrier_hz,
            n_tx,
            m_rx,
            tx_spacing_m: s,
            rx_spacing_m: s,
            distance_m,
            tilt_deg: 0.0,
            tx_pattern: pattern,
            rx_pattern: pattern,
        }
    }

    /// Broadside arrays at the Rayleigh spacing for `min(N, M)` streams.
    pub fn rayleigh(
        carrier_hz: f64,
        n_tx: usize,
        m_rx: usize,
        distance_m: f64,
        pattern: AntennaPattern,
    ) -> Self {
        let s = rayleigh_spacing(carrier_hz, distance_m, n_tx.min(m_rx).max(1));
        Self {
            tx_spacing_m: s,
            rx_spacing_m: s,
            ..Self::half_wavelength(carrier_hz, n_tx, m_rx, distance_m, pattern)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "link distance {} m must be positive",
                self.distance_m
            )));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "carrier {} Hz must be positive",
                self.carrier_hz
            )));
        }
        if self.n_tx == 0 || self.m_rx == 0 {
            return Err(Error::InvalidChannel(
                "arrays need at least one element".into(),
            ));
        }
        let needs_tx = self.n_tx > 1 && !(self.tx_spacing_m > 0.0);
        let needs_rx = self.m_rx > 1 && !(self.rx_spacing_m > 0.0);
        if needs_tx || needs_rx {
            return Err(Error::InvalidChannel(
                "element spacing must be positive".into(),
            ));
        }
        Ok(())
    }

    fn element(&self, idx: usize, count: usize, spacing: f64, z0: f64) -> [f64; 3] {
        let u = (idx as f64 - (count as f64 - 1.0) / 2.0) * spacing;
        let tilt = self.tilt_deg.to_radians();
        [u * tilt.cos(), 0.0, z0 + u * tilt.sin()]
    }
}

/// `M x N` channel matrix. Entry `(m, n)` has amplitude
/// `10^((G_tx(theta) + G_rx(theta) - FSPL(d_mn)) / 20)` and phase
/// `-2 pi d_mn / lambda`, where `theta` is the angle of the element pair
/// off boresight.
pub fn los_mimo_matrix(geom: &LosMimoGeometry) -> Result<DMatrix<Complex64>> {
    geom.validate()?;
    let lambda = wavelength_m(geom.carrier_hz);
    let mut h = DMatrix::zeros(geom.m_rx, geom.n_tx);
    for m in 0..geom.m_rx {
        let rx = geom.element(m, geom.m_rx, geom.rx_spacing_m, geom.distance_m);
        for n in 0..geom.n_tx {
            let tx = geom.element(n, geom.n_tx, geom.tx_spacing_m, 0.0);
            let v = [rx[0] - tx[0], rx[1] - tx[1], rx[2] - tx[2]];
            let d = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if d == 0.0 {
                return Err(Error::InvalidChannel(
                    "coincident transmit and receive elements".into(),
                ));
            }
            // Boresights point along +z (tx) and -z (rx): same off-axis angle.
            let theta = (v[2] / d).clamp(-1.0, 1.0).acos().to_degrees();
            let gain_db = geom.tx_pattern.gain_dbi(theta) + geom.rx_pattern.gain_dbi(theta)
                - fspl_db(geom.carrier_hz, d);
            let amp = 10f64.powf(gain_db / 20.0);
            h[(m, n)] = Complex64::from_polar(amp, -2.0 * PI * d / lambda);
        }
    }
    Ok(h)
}

/// Scales `h` so the mean of `|h_mn|^2` is one.
pub fn normalized(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let p = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / h.len().max(1) as f64;
    if p == 0.0 {
        return h.clone();
    }
    h.map(|x| x / p.sqrt())
}

/// Ratio of largest to smallest singular value.
pub fn condition_number(h: &DMatrix<Complex64>) -> f64 {
    let sv = h.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// I.i.d. `CN(0, 1)` channel.
pub fn rayleigh_matrix<R: Rng + ?Sized>(
    m_rx: usize,
    n_tx: usize,
    rng: &mut R,
) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(m_rx, n_tx, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(s * re, s * im)
    })
}

/// `Y = H X`, then independent phase noise on every receive chain and
/// sample, then AWGN of power `n0` per entry.
///
/// Random draws are row-major: all phase-noise draws (skipped when
/// `pn_sigma2 == 0`), then all noise draws (skipped when `n0 == 0`).
pub fn apply_mimo<R: Rng + ?Sized>(
    h: &DMatrix<Complex64>,
    x: &DMatrix<Complex64>,
    n0: f64,
    pn_sigma2: f64,
    rng: &mut R,
) -> Result<DMatrix<Complex64>> {
    if h.ncols() != x.nrows() {
        return Err(Error::Dimension(format!(
            "H is {}x{} but X has {} rows",
            h.nrows(),
            h.ncols(),
            x.nrows()
        )));
    }
    let mut y = h * x;
    apply_receiver_impairments(&mut y, n0, pn_sigma2, rng)?;
    Ok(y)
}

/// Receive-side phase noise then AWGN on an `M x K` block, draws row-major.
pub fn apply_receiver_impairments<R: Rng + ?Sized>(
    y: &mut DMatrix<Complex64>,
    n0: f64,
    pn_sigma2: f64,
    rng: &mut R,
) -> Result<()> {
    if !(pn_sigma2 >= 0.0) {
        return Err(Error::InvalidChannel(format!(
            "phase-noise variance {pn_sigma2} is negative"
        )));
    }
    if pn_sigma2 > 0.0 {
        let sigma = pn_sigma2.sqrt();
        for m in 0..y.nrows() {
            for k in 0..y.ncols() {
                let phi: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
                y[(m, k)] *= Complex64::cis(phi);
            }
        }
    }
    if n0 > 0.0 {
        let sigma = (n0 / 2.0).sqrt();
        for m in 0..y.nrows() {
            for k in 0..y.ncols() {
                y[(m, k)] += complex_gaussian(rng, sigma);
            }
        }
    }
    Ok(())
}
