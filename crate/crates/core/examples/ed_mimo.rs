//! Energy-detection OOK over a 2x2 line-of-sight link: per-antenna
//! thresholds against the joint residual detector.

use subthz::channel::{AntennaPattern, LosMimoGeometry};
use subthz::sim::{run, ChannelKind, EdReceiver, RunConfig, Scheme, SweepAxis};

fn main() -> subthz::Result<()> {
    let mut g = LosMimoGeometry::rayleigh(150e9, 2, 2, 5.0, AntennaPattern::d_band_transmitarray());
    g.tx_spacing_m = 0.3;
    g.rx_spacing_m = 0.3;
    for (name, receiver) in [
        ("per-antenna", EdReceiver::PerAntenna(None)),
        ("joint", EdReceiver::Joint),
    ] {
        let mut cfg = RunConfig::new(
            Scheme::OokEd { nt: 2, receiver },
            vec![-46.0, -43.0, -40.0],
            5,
        );
        cfg.channel = ChannelKind::Los(g);
        cfg.axis = SweepAxis::TxPowerDbm { noise_dbm: -74.0 };
        cfg.max_bits = 200_000;
        for r in run(&cfg)? {
            println!("{name:>11} at {:5.1} dBm: BER {:.3e}", r.point, r.ber());
        }
    }
    Ok(())
}
