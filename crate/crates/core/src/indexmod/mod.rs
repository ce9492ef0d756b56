//! Index-modulation mappers: antenna-set indexing (GSM), filter-shape
//! indexing (FSIM) and spatially multiplexed FSIM.

mod fsim;
mod gsm;

pub use fsim::{
    build_default_bank, fsim_bits_per_symbol, fsim_map, fsim_modulate, merge_streams,
    smx_fsim_frame, split_streams, FilterBank, FsimConfig, DEFAULT_CORR_MAX,
};
pub use gsm::{
    binomial, gsm_bits_per_symbol, gsm_frame, gsm_index_bits, gsm_legal_combinations, gsm_map,
    CombinationStrategy, GsmConfig, GsmSymbol,
};

/// `Nt (log2 M + log2 N)` for spatially multiplexed FSIM.
pub fn smx_fsim_bits_per_symbol(nt: usize, n: usize, m: usize) -> crate::Result<usize> {
    Ok(nt * fsim_bits_per_symbol(n, m)?)
}
