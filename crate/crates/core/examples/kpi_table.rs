//! Throughput and SNR for every built-in deployment scenario.

use subthz::channel::AtmosphereTable;
use subthz::linkplan::{fmt6, kpi_table};

fn main() -> subthz::Result<()> {
    let rows = kpi_table(&["all"], &AtmosphereTable::default())?;
    for r in &rows {
        println!(
            "{:<26} {:>7} m  SNR {:>7} dB  {:>9} b/s",
            r.scenario.id,
            fmt6(r.scenario.range_m),
            fmt6(r.snr_db),
            fmt6(r.throughput_bps)
        );
    }
    Ok(())
}
