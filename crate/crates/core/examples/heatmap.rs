//! Coverage around a lamppost node on a small street grid, plus
//! throughput statistics per distance bucket.

use subthz::linkplan::{
    heatmap, link_stats, CellClass, EnvironmentGrid, HeatmapConfig, LinkBudget, LinkSample, SeCurve,
};

fn main() -> subthz::Result<()> {
    let grid = EnvironmentGrid::parse("8 4 60\nLLLLLLLL\nLLOOOLNN\nLLOOOLNN\nLLLLLLLL\n")?;
    let cfg = HeatmapConfig::new(LinkBudget::backhaul_lamppost(), SeCurve::no_pn());
    let cells = heatmap(&grid, (0, 0), &cfg)?;
    for y in 0..grid.height() {
        let row: Vec<String> = cells
            .iter()
            .filter(|c| c.y == y)
            .map(|c| format!("{:5.1}", c.throughput_bps / 1e9))
            .collect();
        println!("{}", row.join(" "));
    }
    println!("(Gb/s per cell, node at top-left)");

    let links: Vec<LinkSample> = cells
        .iter()
        .map(|c| LinkSample {
            distance_m: c.distance_m,
            class: c.class,
        })
        .collect();
    for s in link_stats(&links, &cfg, &[0.0, 150.0, 300.0, 450.0], 1e9)? {
        if s.count > 0 && s.class != CellClass::Nlos {
            println!(
                "{:>4} [{:3}, {:3}) m: {} links, median {:.2} Gb/s, {:.0}% above 1 Gb/s",
                s.class.to_string(),
                s.lo_m,
                s.hi_m,
                s.count,
                s.median_bps / 1e9,
                100.0 * s.fraction_above
            );
        }
    }
    Ok(())
}
