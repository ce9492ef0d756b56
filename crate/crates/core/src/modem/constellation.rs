//! Labeled signal sets with unit average energy.
//!
//! Points are stored in label order: `points()[label]` is the point carrying
//! the bit pattern `label` (MSB first). Conventions:
//!
//! - **QAM** (square `M`): the first half of the label bits select the
//!   in-phase level, the second half the quadrature level, each with its own
//!   Gray code. Axis level index `i` sits at amplitude `L - 1 - 2i`, so the
//!   all-zero label lands in the first quadrant. For QPSK the pair `(b0, b1)`
//!   maps to `((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)`.
//! - **PSK**: label `g` sits at phase `2 pi p / M` with `g = gray(p)`. BPSK maps
//!   bit 0 to `+1` and bit 1 to `-1`.
//! - **Polar**: `A` rings times `P` phases. The leading `log2 A` bits are the
//!   Gray-coded ring index, the trailing `log2 P` bits the Gray-coded phase
//!   index. Ring radii are equally spaced (`r_i = i * delta`, `i = 1..=A`).
//! - **OOK**: bit 0 is `0`, bit 1 is `sqrt(2)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bits::{self, exact_log2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulationKind {
    Qam,
    Psk,
    Polar,
    Ook,
}

/// Ring/phase structure of a polar constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGeometry {
    pub rings: usize,
    pub phases: usize,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ModulationKind,
    points: Vec<Complex64>,
    bits_per_symbol: usize,
    polar: Option<PolarGeometry>,
}

impl Constellation {
    /// Builds a normalized, labeled constellation. `polar_rings` is required
    /// for [`ModulationKind::Polar`] and ignored otherwise.
    pub fn new(kind: ModulationKind, order: usize, polar_rings: Option<usize>) -> Result<Self> {
        let bps = exact_log2(order).filter(|&b| b >= 1).ok_or_else(|| {
            Error::InvalidModulation(format!("order {order} is not a power of two >= 2"))
        })?;
        let mut polar = None;
        let points = match kind {
            ModulationKind::Qam => {
                if bps % 2 != 0 {
                    return Err(Error::InvalidModulation(format!(
                        "QAM order {order} is not square"
                    )));
                }
                let levels = 1usize << (bps / 2);
                let half = bps / 2;
                let amp = |i: usize| (levels as f64 - 1.0) - 2.0 * i as f64;
                let scale = (2.0 * ((levels * levels) as f64 - 1.0) / 3.0).sqrt();
                (0..order)
                    .map(|label| {
                        let gi = label >> half;
                        let gq = label & (levels - 1);
                        let i = bits::gray_inverse(gi);
                        let q = bits::gray_inverse(gq);
                        Complex64::new(amp(i), amp(q)) / scale
                    })
                    .collect()
            }
            ModulationKind::Psk => (0..order)
                .map(|label| {
                    let p = bits::gray_inverse(label);
                    Complex64::from_polar(1.0, 2.0 * PI * p as f64 / order as f64)
                })
                .collect(),
            ModulationKind::Ook => {
                if order != 2 {
                    return Err(Error::InvalidModulation(format!(
                        "OOK has order 2, got {order}"
                    )));
                }
                vec![Complex64::new(0.0, 0.0), Complex64::new(2f64.sqrt(), 0.0)]
            }
            ModulationKind::Polar => {
                let rings = polar_rings.ok_or_else(|| {
                    Error::InvalidModulation("polar constellation needs a ring count".into())
                })?;
                if rings == 0 || !order.is_multiple_of(rings) {
                    return Err(Error::InvalidModulation(format!(
                        "ring count {rings} does not divide order {order}"
                    )));
                }
                let phases = order / rings;
                let ring_bits = exact_log2(rings).ok_or_else(|| {
                    Error::InvalidModulation(format!("ring count {rings} is not a power of two"))
                })?;
                let phase_bits = bps - ring_bits;
                let radii = polar_radii(rings);
                let pts = (0..order)
                    .map(|label| {
                        let ring = bits::gray_inverse(label >> phase_bits);
                        let phase = bits::gray_inverse(label & (phases - 1));
                        Complex64::from_polar(radii[ring], 2.0 * PI * phase as f64 / phases as f64)
                    })
                    .collect();
                polar = Some(PolarGeometry {
                    rings,
                    phases,
                    radii,
                });
                pts
            }
        };
        Ok(Self {
            kind,
            points,
            bits_per_symbol: bps,
            polar,
        })
    }

    pub fn qpsk() -> Self {
        Self::new(ModulationKind::Qam, 4, None).expect("QPSK is valid")
    }

    pub fn bpsk() -> Self {
        Self::new(ModulationKind::Psk, 2, None).expect("BPSK is valid")
    }

    pub fn ook() -> Self {
        Self::new(ModulationKind::Ook, 2, None).expect("OOK is valid")
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn polar_geometry(&self) -> Option<&PolarGeometry> {
        self.polar.as_ref()
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Maps a bit stream to symbols, `log2 M` bits per symbol.
    pub fn map_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        let k = self.bits_per_symbol;
        if !bits.len().is_multiple_of(k) {
            return Err(Error::RaggedBits {
                len: bits.len(),
                per_symbol: k,
            });
        }
        Ok(bits
            .chunks(k)
            .map(|c| self.points[bits::to_index(c)])
            .collect())
    }

    /// Label of the decision for one received sample.
    ///
    /// Minimum Euclidean distance with ties going to the lowest label; polar
    /// constellations decide ring and phase independently.
    pub fn decide(&self, y: Complex64) -> usize {
        if let Some(geom) = &self.polar {
            return decide_polar(geom, y);
        }
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (label, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = label;
            }
        }
        best
    }

    /// Hard decisions for a symbol sequence, concatenated label bits.
    pub fn demap_hard(&self, symbols: &[Complex64]) -> Vec<u8> {
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol);
        for &y in symbols {
            bits::push_index(self.decide(y), self.bits_per_symbol, &mut out);
        }
        out
    }
}

/// Equally spaced radii `i * delta` with `mean(r^2) = 1`.
pub fn polar_radii(rings: usize) -> Vec<f64> {
    let sum_sq: f64 = (1..=rings).map(|i| (i * i) as f64).sum();
    let delta = (rings as f64 / sum_sq).sqrt();
    (1..=rings).map(|i| i as f64 * delta).collect()
}

fn decide_polar(geom: &PolarGeometry, y: Complex64) -> usize {
    let mag = y.norm();
    let mut ring = 0;
    let mut best = f64::INFINITY;
    for (i, r) in geom.radii.iter().enumerate() {
        let d = (mag - r).abs();
        if d < best {
            best = d;
            ring = i;
        }
    }
    let step = 2.0 * PI / geom.phases as f64;
    let phase = ((y.arg() / step).round() as i64).rem_euclid(geom.phases as i64) as usize;
    let phase_bits = exact_log2(geom.phases).unwrap_or(0);
    (bits::gray(ring) << phase_bits) | bits::gray(phase)
}
