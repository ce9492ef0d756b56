//! BER floor of 64-QAM against a 16-ring polar constellation under strong
//! phase noise, with the spectral-efficiency ceilings used for planning.

use subthz::channel::pn_variance;
use subthz::linkplan::{se_from_snr, SeCurve};
use subthz::modem::{Constellation, ModulationKind};
use subthz::sim::{run, RunConfig, Scheme};

fn main() -> subthz::Result<()> {
    let sigma2 = pn_variance(-100.0, 1e9);
    println!("phase-noise floor -100 dBc/Hz over 1 GHz: sigma^2 = {sigma2:.4} rad^2");
    for (name, c) in [
        ("64-QAM", Constellation::new(ModulationKind::Qam, 64, None)?),
        (
            "64-polar",
            Constellation::new(ModulationKind::Polar, 64, Some(16))?,
        ),
    ] {
        let mut cfg = RunConfig::new(Scheme::Apm(c), vec![20.0, 30.0, 40.0, 50.0], 3);
        cfg.pn_sigma2 = sigma2;
        cfg.max_bits = 100_000;
        let res = run(&cfg)?;
        let row: Vec<String> = res
            .iter()
            .map(|r| format!("{:.0} dB -> {:.3e}", r.point, r.ber()))
            .collect();
        println!("{name:>9}: {}", row.join(", "));
    }
    for (name, curve) in [
        ("no PN", SeCurve::no_pn()),
        ("strong PN, QAM", SeCurve::strong_pn_qam()),
        ("strong PN, polar", SeCurve::strong_pn_polar()),
    ] {
        println!(
            "{name:>17}: SE at 40 dB = {:.2} b/s/Hz (ceiling {})",
            se_from_snr(&curve, 40.0),
            curve.ceiling()
        );
    }
    Ok(())
}
