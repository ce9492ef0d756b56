use std::path::Path;

use crate::error::{Error, Result};

/// SE reachable without phase noise.
pub const CEILING_NO_PN: f64 = 7.2;
/// SE of square QAM under strong phase noise, at any SNR.
pub const CEILING_STRONG_PN_QAM: f64 = 2.5;
/// SE of PN-robust polar constellations under strong phase noise.
pub const CEILING_STRONG_PN_POLAR: f64 = 5.5;

const GRID_LO_DB: f64 = -30.0;
const GRID_HI_DB: f64 = 60.0;
const GRID_STEP_DB: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeMode {
    NoPn,
    StrongPnQam,
    StrongPnPolar,
    Table,
}

impl SeMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "no_pn" | "nopn" => Some(SeMode::NoPn),
            "strong_pn_qam" => Some(SeMode::StrongPnQam),
            "strong_pn_polar" => Some(SeMode::StrongPnPolar),
            "table" => Some(SeMode::Table),
            _ => None,
        }
    }
}

/// Piecewise-linear SE against SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SeCurve {
    mode: SeMode,
    points: Vec<(f64, f64)>,
    ceiling: f64,
}

impl SeCurve {
    /// `min(log2(1 + snr), ceiling)` sampled every 0.1 dB from -30 to 60 dB.
    pub fn preset(mode: SeMode) -> Result<Self> {
        let ceiling = match mode {
            SeMode::NoPn => CEILING_NO_PN,
            SeMode::StrongPnQam => CEILING_STRONG_PN_QAM,
            SeMode::StrongPnPolar => CEILING_STRONG_PN_POLAR,
            SeMode::Table => {
                return Err(Error::InvalidPlan(
                    "table curves need explicit points".into(),
                ))
            }
        };
        let n = ((GRID_HI_DB - GRID_LO_DB) / GRID_STEP_DB).round() as usize;
        let points = (0..=n)
            .map(|i| {
                let s = GRID_LO_DB + i as f64 * GRID_STEP_DB;
                (s, (1.0 + 10f64.powf(s / 10.0)).log2().min(ceiling))
            })
            .collect();
        Ok(Self {
            mode,
            points,
            ceiling,
        })
    }

    pub fn no_pn() -> Self {
        Self::preset(SeMode::NoPn).expect("preset")
    }

    pub fn strong_pn_qam() -> Self {
        Self::preset(SeMode::StrongPnQam).expect("preset")
    }

    pub fn strong_pn_polar() -> Self {
        Self::preset(SeMode::StrongPnPolar).expect("preset")
    }

    /// Tabulated curve; the ceiling defaults to the largest SE.
    pub fn from_points(points: Vec<(f64, f64)>, ceiling: Option<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPlan("SE table is empty".into()));
        }
        if points
            .iter()
            .any(|&(s, e)| !s.is_finite() || !(e >= 0.0) || !e.is_finite())
        {
            return Err(Error::InvalidPlan(
                "SE table needs finite SNR and non-negative SE".into(),
            ));
        }
        if let Some(w) = points.windows(2).find(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidPlan(format!(
                "SNR points not strictly increasing at {} dB",
                w[1].0
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].1 < w[0].1) {
            return Err(Error::InvalidPlan(format!("SE decreases at {} dB", w[1].0)));
        }
        let top = points[points.len() - 1].1;
        let ceiling = ceiling.unwrap_or(top);
        if top > ceiling {
            return Err(Error::InvalidPlan(format!(
                "SE {top} exceeds ceiling {ceiling}"
            )));
        }
        Ok(Self {
            mode: SeMode::Table,
            points,
            ceiling,
        })
    }

    /// Two-column CSV `snr_dB,se` with an optional header row.
    pub fn parse_csv(text: &str, ceiling: Option<f64>) -> Result<Self> {
        let mut points = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = (cols.len() == 2)
                .then(|| Some((cols[0].parse::<f64>().ok()?, cols[1].parse::<f64>().ok()?)))
                .flatten();
            match parsed {
                Some(p) => points.push(p),
                None if points.is_empty() && n == 0 => continue,
                None => {
                    return Err(Error::Parse {
                        line: n + 1,
                        column: 1,
                        msg: format!("expected `snr_dB,se`, found `{line}`"),
                    })
                }
            }
        }
        Self::from_points(points, ceiling)
    }

    pub fn load_csv(path: impl AsRef<Path>, ceiling: Option<f64>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse_csv(&text, ceiling)
    }

    pub fn mode(&self) -> SeMode {
        self.mode
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn ceiling(&self) -> f64 {
        self.ceiling
    }
}

/// Linear interpolation on the curve's points, clamped to `[0, ceiling]`.
/// Zero below the first point; the last SE above the last point.
pub fn se_from_snr(curve: &SeCurve, snr_db: f64) -> f64 {
    let p = &curve.points;
    if snr_db.is_nan() || snr_db < p[0].0 {
        return 0.0;
    }
    let i = p.partition_point(|&(s, _)| s <= snr_db);
    let se = if i == p.len() {
        p[p.len() - 1].1
    } else {
        let (s0, e0) = p[i - 1];
        let (s1, e1) = p[i];
        e0 + (snr_db - s0) / (s1 - s0) * (e1 - e0)
    };
    se.clamp(0.0, curve.ceiling)
}

pub fn throughput_bps(se: f64, bandwidth_hz: f64, useful_fraction: f64) -> f64 {
    se * bandwidth_hz * useful_fraction
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceilings() {
        for s in [20.0, 25.0, 40.0, 100.0] {
            assert_eq!(se_from_snr(&SeCurve::strong_pn_qam(), s), 2.5);
        }
        assert_eq!(se_from_snr(&SeCurve::strong_pn_polar(), 30.0), 5.5);
        assert_eq!(se_from_snr(&SeCurve::no_pn(), 80.0), 7.2);
    }

    #[test]
    fn shannon_below_ceiling() {
        let c = SeCurve::no_pn();
        for s in [-5.0, 0.0, 3.3, 10.0] {
            let exact = (1.0 + 10f64.powf(s / 10.0)).log2();
            assert!((se_from_snr(&c, s) - exact).abs() < 2e-4, "{s}");
        }
        assert_eq!(se_from_snr(&c, -40.0), 0.0);
    }

    #[test]
    fn throughput_rows() {
        assert!((throughput_bps(7.2, 1e9, 0.8) - 5.76e9).abs() < 1.0);
        assert!((throughput_bps(5.5, 1e9, 0.8) - 4.4e9).abs() < 1.0);
        assert_eq!(throughput_bps(0.0, 1e9, 0.8), 0.0);
    }

    #[test]
    fn table_curve() {
        let c = SeCurve::parse_csv("snr_dB,se\n0,0.5\n10,2\n20,4\n", None).unwrap();
        assert_eq!(c.mode(), SeMode::Table);
        assert_eq!(se_from_snr(&c, 15.0), 3.0);
        assert_eq!(se_from_snr(&c, 30.0), 4.0);
        assert_eq!(se_from_snr(&c, -1.0), 0.0);
        assert!(SeCurve::from_points(vec![(0.0, 1.0), (0.0, 2.0)], None).is_err());
        assert!(SeCurve::from_points(vec![(0.0, 2.0), (1.0, 1.0)], None).is_err());
        assert!(SeCurve::from_points(vec![(0.0, 2.0)], Some(1.0)).is_err());
        let err = SeCurve::parse_csv("0,1\n5,x\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
