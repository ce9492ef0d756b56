//! Filter-shape index modulation: the default filter bank, its
//! cross-correlation, and a noisy link.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subthz::bits;
use subthz::channel::{add_awgn, NoiseLevel};
use subthz::detect::fsim_detect;
use subthz::indexmod::{build_default_bank, fsim_map, fsim_modulate, FsimConfig};
use subthz::modem::Constellation;

fn main() -> subthz::Result<()> {
    let bank = build_default_bank(4, 8, 8)?;
    println!("filter cross-correlation:");
    for row in bank.cross_correlation() {
        let r: Vec<String> = row.iter().map(|v| format!("{v:+.3}")).collect();
        println!("  {}", r.join(" "));
    }
    let cfg = FsimConfig::new(bank, Constellation::qpsk())?;
    println!(
        "{} bits/symbol ({} index bits)",
        cfg.bits_per_symbol(),
        cfg.index_bits()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for snr_db in [4.0, 8.0, 12.0] {
        let b = bits::random(&mut rng, cfg.bits_per_symbol() * 5000);
        let (idx, sym) = fsim_map(&cfg, &b)?;
        let mut w = fsim_modulate(&idx, &sym, cfg.bank())?;
        add_awgn(
            &mut w.samples,
            NoiseLevel::Power(10f64.powf(-snr_db / 10.0)),
            &mut rng,
        );
        let d = fsim_detect(&w, cfg.bank(), cfg.constellation())?;
        let ier =
            d.indices.iter().zip(&idx).filter(|(a, b)| a != b).count() as f64 / idx.len() as f64;
        println!(
            "per-sample SNR {snr_db:4.1} dB: BER {:.3e}, index error rate {ier:.3e}",
            bits::hamming(&b, &d.bits) as f64 / b.len() as f64
        );
    }
    Ok(())
}
