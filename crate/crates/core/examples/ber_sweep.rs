//! A coded SNR sweep written as CSV, the same format the `ber` subcommand
//! produces.

use subthz::fec::BchCode;
use subthz::modem::{Constellation, ModulationKind};
use subthz::sim::{ber_csv, parse_sweep, run, RunConfig, Scheme};

fn main() -> subthz::Result<()> {
    let scheme = Scheme::Apm(Constellation::new(ModulationKind::Qam, 16, None)?);
    let mut cfg = RunConfig::new(scheme, parse_sweep("6:1:12")?, 1);
    cfg.code = Some(BchCode::with_k(51)?);
    cfg.max_bits = 500_000;
    cfg.max_errors = 500;
    print!("{}", ber_csv(&run(&cfg)?, cfg.axis));
    Ok(())
}
