//! Line-of-sight MIMO channel conditioning against element spacing.

use subthz::channel::{
    condition_number, los_mimo_matrix, rayleigh_spacing, AntennaPattern, LosMimoGeometry,
};

fn main() -> subthz::Result<()> {
    let f = 150e9;
    let d = 5.0;
    let opt = rayleigh_spacing(f, d, 4);
    println!(
        "4x4 at {d} m, 150 GHz: Rayleigh spacing {:.1} mm",
        opt * 1e3
    );
    for factor in [0.1, 0.25, 0.5, 1.0] {
        let mut g = LosMimoGeometry::rayleigh(f, 4, 4, d, AntennaPattern::flat(0.0));
        g.tx_spacing_m = opt * factor;
        g.rx_spacing_m = opt * factor;
        let h = los_mimo_matrix(&g)?;
        println!(
            "spacing {:5.1} mm: condition number {:.3e}",
            g.tx_spacing_m * 1e3,
            condition_number(&h)
        );
    }
    Ok(())
}
