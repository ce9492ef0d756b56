//! Path loss, atmospheric absorption and antenna patterns.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn wavelength_m(f_hz: f64) -> f64 {
    SPEED_OF_LIGHT / f_hz
}

/// Free-space path loss `20 log10(4 pi d f / c)` in dB.
pub fn fspl_db(f_hz: f64, d_m: f64) -> f64 {
    20.0 * (4.0 * PI * d_m * f_hz / SPEED_OF_LIGHT).log10()
}

/// Specific attenuation (dB/km) against frequency, interpolated linearly in
/// log-frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct AtmosphereTable {
    rows: Vec<(f64, f64)>,
    extrapolate: bool,
}

impl Default for AtmosphereTable {
    /// Sea-level air with 7.5 g/m^3 water vapour, coarse D-band neighbourhood.
    fn default() -> Self {
        Self {
            rows: vec![
                (60.0, 15.0),
                (90.0, 0.45),
                (110.0, 0.9),
                (118.75, 2.6),
                (130.0, 1.4),
                (150.0, 2.0),
                (170.0, 3.6),
                (183.3, 28.0),
                (200.0, 5.0),
                (250.0, 4.8),
                (300.0, 7.5),
            ],
            extrapolate: false,
        }
    }
}

impl AtmosphereTable {
    /// Rows of `(frequency_GHz, dB_per_km)`; sorted on construction.
    pub fn new(mut rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidChannel("atmospheric table is empty".into()));
        }
        if rows.iter().any(|&(f, a)| !(f > 0.0) || !(a >= 0.0)) {
            return Err(Error::InvalidChannel(
                "atmospheric table needs positive frequencies and non-negative attenuation".into(),
            ));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidChannel(
                "duplicate frequency in atmospheric table".into(),
            ));
        }
        Ok(Self {
            rows,
            extrapolate: false,
        })
    }

    /// Parses a two-column text table (`frequency_GHz dB_per_km`), separated
    /// by whitespace or a comma. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: n + 1,
                    column: 1,
                    msg: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let num = |i: usize| {
                fields[i].parse::<f64>().map_err(|_| Error::Parse {
                    line: n + 1,
                    column: raw.find(fields[i]).map_or(1, |c| c + 1),
                    msg: format!("`{}` is not a number", fields[i]),
                })
            };
            rows.push((num(0)?, num(1)?));
        }
        Self::new(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn with_extrapolation(mut self, on: bool) -> Self {
        self.extrapolate = on;
        self
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    /// Specific attenuation at `f_hz` in dB/km.
    pub fn specific_attenuation(&self, f_hz: f64) -> Result<f64> {
        let g = f_hz / 1e9;
        let (lo, hi) = (self.rows[0].0, self.rows[self.rows.len() - 1].0);
        if let Some(&(_, a)) = self.rows.iter().find(|r| r.0 == g) {
            return Ok(a);
        }
        if self.rows.len() == 1 {
            if g == lo || self.extrapolate {
                return Ok(self.rows[0].1);
            }
        } else if g >= lo && g <= hi || self.extrapolate {
            let seg = self
                .rows
                .windows(2)
                .position(|w| g <= w[1].0)
                .unwrap_or(self.rows.len() - 2);
            let (f0, a0) = self.rows[seg];
            let (f1, a1) = self.rows[seg + 1];
            let u = (g.ln() - f0.ln()) / (f1.ln() - f0.ln());
            return Ok((a0 + u * (a1 - a0)).max(0.0));
        }
        Err(Error::OutsideTable {
            freq_ghz: g,
            lo_ghz: lo,
            hi_ghz: hi,
        })
    }
}

/// Gaseous absorption over `d_m` metres.
pub fn atmospheric_loss_db(f_hz: f64, d_m: f64, table: &AtmosphereTable) -> Result<f64> {
    if d_m == 0.0 {
        return Ok(0.0);
    }
    Ok(table.specific_attenuation(f_hz)? * d_m / 1000.0)
}

/// Directive antenna with a quadratic (Gaussian) main lobe and a flat
/// sidelobe floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub boresight_gain_dbi: f64,
    pub beamwidth_3db_deg: f64,
    pub sidelobe_floor_dbi: f64,
}

impl AntennaPattern {
    pub fn new(
        boresight_gain_dbi: f64,
        beamwidth_3db_deg: f64,
        sidelobe_floor_dbi: f64,
    ) -> Result<Self> {
        if !(boresight_gain_dbi > sidelobe_floor_dbi) {
            return Err(Error::InvalidChannel(format!(
                "boresight gain {boresight_gain_dbi} dBi must exceed sidelobe floor {sidelobe_floor_dbi} dBi"
            )));
        }
        if !(beamwidth_3db_deg > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "beamwidth {beamwidth_3db_deg} deg must be positive"
            )));
        }
        Ok(Self {
            boresight_gain_dbi,
            beamwidth_3db_deg,
            sidelobe_floor_dbi,
        })
    }

    /// 32 dBi, 3 degree transmit-array antenna with a -20 dBi floor.
    pub fn d_band_transmitarray() -> Self {
        Self {
            boresight_gain_dbi: 32.0,
            beamwidth_3db_deg: 3.0,
            sidelobe_floor_dbi: -20.0,
        }
    }

    /// Effectively omnidirectional element with the given gain.
    pub fn flat(gain_dbi: f64) -> Self {
        Self {
            boresight_gain_dbi: gain_dbi,
            beamwidth_3db_deg: f64::INFINITY,
            sidelobe_floor_dbi: gain_dbi - 1.0,
        }
    }

    /// `max(floor, G0 - 12 (theta / theta_3dB)^2)`.
    pub fn gain_dbi(&self, offset_deg: f64) -> f64 {
        let x = offset_deg.abs() / self.beamwidth_3db_deg;
        (self.boresight_gain_dbi - 12.0 * x * x).max(self.sidelobe_floor_dbi)
    }
}

pub fn antenna_gain_dbi(pattern: &AntennaPattern, offset_deg: f64) -> f64 {
    pattern.gain_dbi(offset_deg)
}
