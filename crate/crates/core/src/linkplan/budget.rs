use crate::channel::{atmospheric_loss_db, fspl_db, AtmosphereTable};
use crate::error::{Error, Result};

/// Thermal noise density at 290 K.
pub const NOISE_PSD_DBM_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Per antenna and per channel.
    pub ptx_dbm: f64,
    pub gtx_dbi: f64,
    pub grx_dbi: f64,
    pub impl_losses_db: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub useful_fraction: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::InvalidPlan(format!(
                "bandwidth {} Hz must be positive",
                self.bandwidth_hz
            )));
        }
        if !(self.useful_fraction > 0.0 && self.useful_fraction <= 1.0) {
            return Err(Error::InvalidPlan(format!(
                "useful fraction {} outside (0, 1]",
                self.useful_fraction
            )));
        }
        Ok(())
    }

    /// Lamppost mesh backhaul: 30 dBm, 25 dBi each end, 3 dB losses and a
    /// 10 dB noise figure, 1 GHz channel with 800 MHz useful.
    pub fn backhaul_lamppost() -> Self {
        Self {
            ptx_dbm: 30.0,
            gtx_dbi: 25.0,
            grx_dbi: 25.0,
            impl_losses_db: 3.0,
            noise_figure_db: 10.0,
            bandwidth_hz: 1e9,
            useful_fraction: 0.8,
        }
    }

    /// Beamforming backhaul: 20 dBm, 32 dBi each end, 3 + 10 dB.
    pub fn backhaul_beamforming() -> Self {
        Self {
            ptx_dbm: 20.0,
            gtx_dbi: 32.0,
            grx_dbi: 32.0,
            ..Self::backhaul_lamppost()
        }
    }

    /// Short-range hotspot: 10 dBi each end, 12 dB noise figure.
    pub fn short_range(ptx_dbm: f64) -> Self {
        Self {
            ptx_dbm,
            gtx_dbi: 10.0,
            grx_dbi: 10.0,
            impl_losses_db: 0.0,
            noise_figure_db: 12.0,
            bandwidth_hz: 1e9,
            useful_fraction: 1.0,
        }
    }

    /// Device-to-device with transmit-array antennas: 32 dBi each end,
    /// 10 dB noise figure.
    pub fn d2d(ptx_dbm: f64) -> Self {
        Self {
            ptx_dbm,
            gtx_dbi: 32.0,
            grx_dbi: 32.0,
            impl_losses_db: 0.0,
            noise_figure_db: 10.0,
            bandwidth_hz: 1e9,
            useful_fraction: 1.0,
        }
    }

    /// Noise power over the full channel bandwidth in dBm, before the noise
    /// figure.
    pub fn thermal_noise_dbm(&self) -> f64 {
        NOISE_PSD_DBM_HZ + 10.0 * self.bandwidth_hz.log10()
    }
}

/// `ptx + gtx + grx - PL - losses - NF - (-174 + 10 log10 B)`.
pub fn snr_db(budget: &LinkBudget, pathloss_db: f64) -> f64 {
    budget.ptx_dbm + budget.gtx_dbi + budget.grx_dbi
        - pathloss_db
        - budget.impl_losses_db
        - budget.noise_figure_db
        - budget.thermal_noise_dbm()
}

/// Free-space plus gaseous loss.
pub fn path_loss_db(carrier_hz: f64, distance_m: f64, table: &AtmosphereTable) -> Result<f64> {
    Ok(fspl_db(carrier_hz, distance_m) + atmospheric_loss_db(carrier_hz, distance_m, table)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_in_each_input() {
        let b = LinkBudget::backhaul_lamppost();
        let s = snr_db(&b, 100.0);
        assert!((snr_db(&b, 110.0) - (s - 10.0)).abs() < 1e-12);
        let hot = LinkBudget {
            ptx_dbm: b.ptx_dbm + 3.0,
            ..b
        };
        assert!((snr_db(&hot, 100.0) - (s + 3.0)).abs() < 1e-12);
        let noisy = LinkBudget {
            noise_figure_db: b.noise_figure_db + 2.0,
            ..b
        };
        assert!((snr_db(&noisy, 100.0) - (s - 2.0)).abs() < 1e-12);
        let wide = LinkBudget {
            bandwidth_hz: 10e9,
            ..b
        };
        assert!((snr_db(&wide, 100.0) - (s - 10.0)).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(LinkBudget::backhaul_lamppost().validate().is_ok());
        assert!(LinkBudget {
            useful_fraction: 0.0,
            ..LinkBudget::d2d(0.0)
        }
        .validate()
        .is_err());
        assert!(LinkBudget {
            bandwidth_hz: -1.0,
            ..LinkBudget::d2d(0.0)
        }
        .validate()
        .is_err());
    }
}
