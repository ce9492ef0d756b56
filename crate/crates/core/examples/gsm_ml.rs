//! Generalized spatial modulation with exhaustive ML detection over a
//! Rayleigh channel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subthz::bits;
use subthz::channel::{apply_mimo, rayleigh_matrix};
use subthz::detect::ml_gsm_detect;
use subthz::indexmod::{gsm_frame, GsmConfig};
use subthz::modem::Constellation;

fn main() -> subthz::Result<()> {
    let cfg = GsmConfig::lexicographic(10, 3, Constellation::qpsk())?;
    println!(
        "GSM Nt = {}, Na = {}: {} index bits + {} symbol bits = {} bits/symbol",
        cfg.nt(),
        cfg.na(),
        cfg.index_bits(),
        cfg.na() * cfg.constellation().bits_per_symbol(),
        cfg.bits_per_symbol()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for snr_db in [0.0, 6.0, 12.0] {
        let n0 = 10f64.powf(-snr_db / 10.0);
        let (mut errors, mut total) = (0, 0);
        for _ in 0..20 {
            let b = bits::random(&mut rng, cfg.bits_per_symbol() * 16);
            let h = rayleigh_matrix(10, 10, &mut rng);
            let y = apply_mimo(&h, &gsm_frame(&cfg, &b)?, n0, 0.0, &mut rng)?;
            let hat = ml_gsm_detect(&y, &h, &cfg)?;
            errors += bits::hamming(&b, &hat);
            total += b.len();
        }
        println!(
            "SNR {snr_db:4.1} dB: BER {:.3e} over {total} bits",
            errors as f64 / total as f64
        );
    }
    Ok(())
}
