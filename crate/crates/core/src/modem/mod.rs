//! Constellations, bit mapping and pulse shaping.

mod constellation;
mod pulse;

pub use constellation::{polar_radii, Constellation, ModulationKind, PolarGeometry};
pub(crate) use pulse::correlate;
pub use pulse::{build_rrc, matched_filter, shape, PulseFilter, Waveform};

/// Default roll-off, span (symbols) and oversampling for RRC pulses.
pub const DEFAULT_RRC_BETA: f64 = 0.3;
pub const DEFAULT_RRC_SPAN: usize = 8;
pub const DEFAULT_SPS: usize = 8;

pub fn default_rrc() -> PulseFilter {
    build_rrc(DEFAULT_RRC_BETA, DEFAULT_RRC_SPAN, DEFAULT_SPS)
        .expect("default RRC parameters are valid")
}
