//! Builds every supported constellation and prints its size, energy and a
//! bit round trip through the Gray mapper.

use subthz::modem::{polar_radii, Constellation, ModulationKind};

fn main() -> subthz::Result<()> {
    let set = [
        ("bpsk", Constellation::bpsk()),
        ("qpsk", Constellation::qpsk()),
        ("ook", Constellation::ook()),
        ("8psk", Constellation::new(ModulationKind::Psk, 8, None)?),
        ("16qam", Constellation::new(ModulationKind::Qam, 16, None)?),
        ("64qam", Constellation::new(ModulationKind::Qam, 64, None)?),
        (
            "64polar/16",
            Constellation::new(ModulationKind::Polar, 64, Some(16))?,
        ),
    ];
    for (name, c) in &set {
        let bits: Vec<u8> = (0..c.bits_per_symbol() * 8)
            .map(|i| ((i * 7 + 3) % 5 % 2) as u8)
            .collect();
        let back = c.demap_hard(&c.map_bits(&bits)?);
        println!(
            "{name:>11}: M = {:3}, {} bits/symbol, Es = {:.4}, round trip {}",
            c.order(),
            c.bits_per_symbol(),
            c.average_energy(),
            if back == bits { "ok" } else { "BROKEN" }
        );
    }
    let radii: Vec<String> = polar_radii(4).iter().map(|r| format!("{r:.4}")).collect();
    println!("polar radii for 4 rings: {}", radii.join(", "));
    Ok(())
}
