//! Impairments and propagation: AWGN, Gaussian phase noise, free-space and
//! atmospheric loss, antenna patterns and line-of-sight MIMO channels.

mod impairment;
mod mimo;
mod propagation;

pub use impairment::{
    add_awgn, add_phase_noise, complex_gaussian, pn_variance, NoiseLevel, PhaseNoiseModel,
};
pub use mimo::{
    apply_mimo, apply_receiver_impairments, condition_number, los_mimo_matrix, normalized,
    rayleigh_matrix, rayleigh_spacing, LosMimoGeometry,
};
pub use propagation::{
    antenna_gain_dbi, atmospheric_loss_db, fspl_db, wavelength_m, AntennaPattern, AtmosphereTable,
    SPEED_OF_LIGHT,
};

/// D-band carrier used throughout the scenarios.
pub const CARRIER_HZ: f64 = 150e9;
/// Channel bandwidth.
pub const CHANNEL_BANDWIDTH_HZ: f64 = 1e9;
