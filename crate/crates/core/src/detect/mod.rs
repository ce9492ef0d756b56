//! Receivers: joint ML GSM detection, linear ZF/MMSE equalization, FSIM
//! filter-bank detection and non-coherent energy detection.

mod energy;
mod fsim;
mod linear;
mod ml;

pub use energy::{
    calibrate_threshold, ed_mimo_joint, energies, energy_detect, energy_detect_columns,
    energy_detect_per_antenna, ThresholdPolicy, DEFAULT_CALIBRATION_SAMPLES, ED_JOINT_MAX_ANTENNAS,
};
pub use fsim::{decide_from_outputs, fsim_detect, FsimDecision};
pub use linear::{equalizer_matrix, linear_equalize, rank, LinearMode};
pub use ml::{gsm_hypotheses, ml_gsm_detect, ml_gsm_patterns, ML_HYPOTHESIS_BUDGET};
