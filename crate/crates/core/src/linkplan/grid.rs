use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::channel::{AtmosphereTable, CARRIER_HZ};
use crate::error::{Error, Result};

use super::budget::{path_loss_db, snr_db, LinkBudget};
use super::fmt6;
use super::se::{se_from_snr, throughput_bps, SeCurve};

/// Foliage excess loss for obstructed line of sight.
pub const DEFAULT_OLOS_EXCESS_DB: f64 = 10.0;
/// Distances are floored here so the node's own cell has a finite path loss.
pub const MIN_DISTANCE_M: f64 = 1.0;
pub const DEFAULT_BUCKET_EDGES_M: [f64; 3] = [0.0, 100.0, 200.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellClass {
    Los,
    Olos,
    Nlos,
}

impl CellClass {
    pub const ALL: [CellClass; 3] = [CellClass::Los, CellClass::Olos, CellClass::Nlos];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'L' => Some(CellClass::Los),
            'O' => Some(CellClass::Olos),
            'N' => Some(CellClass::Nlos),
            _ => None,
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellClass::Los => "LOS",
            CellClass::Olos => "OLOS",
            CellClass::Nlos => "NLOS",
        })
    }
}

/// Rectangular map of propagation classes seen from the serving node.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentGrid {
    width: usize,
    height: usize,
    cell_size_m: f64,
    cells: Vec<CellClass>,
}

impl EnvironmentGrid {
    pub fn new(
        width: usize,
        height: usize,
        cell_size_m: f64,
        cells: Vec<CellClass>,
    ) -> Result<Self> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(Error::InvalidPlan(format!(
                "grid {width}x{height} needs {} cells, got {}",
                width * height,
                cells.len()
            )));
        }
        if !(cell_size_m > 0.0) {
            return Err(Error::InvalidPlan(format!(
                "cell size {cell_size_m} m must be positive"
            )));
        }
        Ok(Self {
            width,
            height,
            cell_size_m,
            cells,
        })
    }

    pub fn uniform(
        width: usize,
        height: usize,
        cell_size_m: f64,
        class: CellClass,
    ) -> Result<Self> {
        Self::new(width, height, cell_size_m, vec![class; width * height])
    }

    /// Header `width height cell_size_m`, then `height` rows of `width`
    /// characters from `L`, `O`, `N`. Blank lines and `#` lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            msg: "missing header `width height cell_size_m`".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: hline,
                column: 1,
                msg: format!(
                    "header needs 3 fields `width height cell_size_m`, found {}",
                    fields.len()
                ),
            });
        }
        let field_err = |i: usize, what: &str| Error::Parse {
            line: hline,
            column: header.find(fields[i]).map_or(1, |c| c + 1),
            msg: format!("`{}` is not a valid {what}", fields[i]),
        };
        let width: usize = fields[0]
            .parse()
            .ok()
            .filter(|&w| w > 0)
            .ok_or_else(|| field_err(0, "width"))?;
        let height: usize = fields[1]
            .parse()
            .ok()
            .filter(|&h| h > 0)
            .ok_or_else(|| field_err(1, "height"))?;
        let cell: f64 = fields[2]
            .parse()
            .ok()
            .filter(|&c: &f64| c > 0.0 && c.is_finite())
            .ok_or_else(|| field_err(2, "cell size"))?;
        let mut cells = Vec::with_capacity(width * height);
        let mut rows = 0;
        let mut last_line = hline;
        for (n, line) in lines {
            last_line = n;
            if rows == height {
                return Err(Error::Parse {
                    line: n,
                    column: 1,
                    msg: format!("more than {height} rows"),
                });
            }
            let row = line.trim_start();
            let offset = line.len() - row.len();
            for (i, c) in row.chars().enumerate() {
                if i >= width {
                    return Err(Error::Parse {
                        line: n,
                        column: offset + i + 1,
                        msg: format!("row longer than width {width}"),
                    });
                }
                cells.push(CellClass::from_char(c).ok_or(Error::Parse {
                    line: n,
                    column: offset + i + 1,
                    msg: format!("invalid cell `{c}` (expected L, O or N)"),
                })?);
            }
            let len = row.chars().count();
            if len < width {
                return Err(Error::Parse {
                    line: n,
                    column: offset + len + 1,
                    msg: format!("row has {len} cells, expected {width}"),
                });
            }
            rows += 1;
        }
        if rows < height {
            return Err(Error::Parse {
                line: last_line + 1,
                column: 1,
                msg: format!("expected {height} rows, found {rows}"),
            });
        }
        Self::new(width, height, cell, cells)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size_m(&self) -> f64 {
        self.cell_size_m
    }

    /// Class at column `x`, row `y` (row 0 is the first text row).
    pub fn class(&self, x: usize, y: usize) -> CellClass {
        self.cells[y * self.width + x]
    }
}

/// Everything needed to turn a (distance, class) pair into throughput.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapConfig {
    pub budget: LinkBudget,
    pub curve: SeCurve,
    pub olos_excess_db: f64,
    pub carrier_hz: f64,
    pub atmosphere: AtmosphereTable,
}

impl HeatmapConfig {
    pub fn new(budget: LinkBudget, curve: SeCurve) -> Self {
        Self {
            budget,
            curve,
            olos_excess_db: DEFAULT_OLOS_EXCESS_DB,
            carrier_hz: CARRIER_HZ,
            atmosphere: AtmosphereTable::default(),
        }
    }

    /// `(snr_dB, throughput_bps)`; NLOS links are dropped (`NaN`, 0).
    pub fn evaluate(&self, distance_m: f64, class: CellClass) -> Result<(f64, f64)> {
        let excess = match class {
            CellClass::Los => 0.0,
            CellClass::Olos => self.olos_excess_db,
            CellClass::Nlos => return Ok((f64::NAN, 0.0)),
        };
        let d = distance_m.max(MIN_DISTANCE_M);
        let snr = snr_db(
            &self.budget,
            path_loss_db(self.carrier_hz, d, &self.atmosphere)? + excess,
        );
        let se = se_from_snr(&self.curve, snr);
        Ok((
            snr,
            throughput_bps(se, self.budget.bandwidth_hz, self.budget.useful_fraction),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub x: usize,
    pub y: usize,
    pub class: CellClass,
    pub distance_m: f64,
    pub snr_db: f64,
    pub throughput_bps: f64,
}

/// Per-cell throughput around the node at cell `(x, y)`, in row-major order.
pub fn heatmap(
    grid: &EnvironmentGrid,
    node: (usize, usize),
    cfg: &HeatmapConfig,
) -> Result<Vec<HeatmapCell>> {
    if node.0 >= grid.width || node.1 >= grid.height {
        return Err(Error::InvalidPlan(format!(
            "node ({}, {}) outside {}x{} grid",
            node.0, node.1, grid.width, grid.height
        )));
    }
    cfg.budget.validate()?;
    (0..grid.width * grid.height)
        .into_par_iter()
        .map(|i| {
            let (x, y) = (i % grid.width, i / grid.width);
            let dx = x as f64 - node.0 as f64;
            let dy = y as f64 - node.1 as f64;
            let distance_m = dx.hypot(dy) * grid.cell_size_m;
            let class = grid.class(x, y);
            let (snr_db, throughput_bps) = cfg.evaluate(distance_m, class)?;
            Ok(HeatmapCell {
                x,
                y,
                class,
                distance_m,
                snr_db,
                throughput_bps,
            })
        })
        .collect()
}

pub fn heatmap_csv(cells: &[HeatmapCell]) -> String {
    let mut out = String::from("x,y,class,snr_dB,throughput_bps\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.x,
            c.y,
            c.class,
            fmt6(c.snr_db),
            fmt6(c.throughput_bps)
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub distance_m: f64,
    pub class: CellClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketStats {
    pub lo_m: f64,
    pub hi_m: f64,
    pub class: CellClass,
    pub count: usize,
    pub median_bps: f64,
    pub mean_bps: f64,
    pub fraction_above: f64,
}

/// Statistics per half-open distance bucket `[edges[i], edges[i+1])` and per
/// class. Links outside every bucket are ignored; empty groups report `NaN`.
pub fn link_stats(
    links: &[LinkSample],
    cfg: &HeatmapConfig,
    edges: &[f64],
    threshold_bps: f64,
) -> Result<Vec<BucketStats>> {
    if links.is_empty() {
        return Err(Error::InvalidPlan("no links to summarize".into()));
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidPlan(
            "bucket edges must be at least two increasing values".into(),
        ));
    }
    let evaluated: Vec<(LinkSample, f64)> = links
        .iter()
        .map(|l| Ok((*l, cfg.evaluate(l.distance_m, l.class)?.1)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for w in edges.windows(2) {
        for class in CellClass::ALL {
            let mut t: Vec<f64> = evaluated
                .iter()
                .filter(|(l, _)| l.class == class && l.distance_m >= w[0] && l.distance_m < w[1])
                .map(|&(_, t)| t)
                .collect();
            t.sort_by(f64::total_cmp);
            let count = t.len();
            let (median_bps, mean_bps, fraction_above) = if count == 0 {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let median = if count % 2 == 1 {
                    t[count / 2]
                } else {
                    (t[count / 2 - 1] + t[count / 2]) / 2.0
                };
                let mean = t.iter().sum::<f64>() / count as f64;
                let above = t.iter().filter(|&&v| v >= threshold_bps).count() as f64 / count as f64;
                (median, mean, above)
            };
            out.push(BucketStats {
                lo_m: w[0],
                hi_m: w[1],
                class,
                count,
                median_bps,
                mean_bps,
                fraction_above,
            });
        }
    }
    Ok(out)
}

pub fn link_stats_csv(stats: &[BucketStats]) -> String {
    let mut out =
        String::from("bucket_lo_m,bucket_hi_m,class,count,median_bps,mean_bps,fraction_above\n");
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt6(s.lo_m),
            fmt6(s.hi_m),
            s.class,
            s.count,
            fmt6(s.median_bps),
            fmt6(s.mean_bps),
            fmt6(s.fraction_above)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> HeatmapConfig {
        HeatmapConfig::new(LinkBudget::backhaul_lamppost(), SeCurve::no_pn())
    }

    #[test]
    fn parse_grid() {
        let g = EnvironmentGrid::parse("3 2 5.0\nLLO\nNLL\n").unwrap();
        assert_eq!((g.width(), g.height(), g.cell_size_m()), (3, 2, 5.0));
        assert_eq!(g.class(2, 0), CellClass::Olos);
        assert_eq!(g.class(0, 1), CellClass::Nlos);
        let e = EnvironmentGrid::parse("3 2 5.0\nLLO\nNXL\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 3,
                    column: 2,
                    ..
                }
            ),
            "{e:?}"
        );
        assert!(matches!(
            EnvironmentGrid::parse("3 2 5.0\nLL\nLLL\n"),
            Err(Error::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            EnvironmentGrid::parse("3 2 5.0\nLLL\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            EnvironmentGrid::parse("3 x 5.0\n"),
            Err(Error::Parse {
                line: 1,
                column: 3,
                ..
            })
        ));
        assert!(EnvironmentGrid::parse("").is_err());
    }

    #[test]
    fn los_throughput_falls_with_distance() {
        let g = EnvironmentGrid::uniform(41, 41, 10.0, CellClass::Los).unwrap();
        let cells = heatmap(&g, (20, 20), &cfg()).unwrap();
        assert_eq!(cells.len(), 41 * 41);
        let mut by_d: Vec<(f64, f64)> = cells
            .iter()
            .map(|c| (c.distance_m, c.throughput_bps))
            .collect();
        by_d.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(by_d.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(heatmap(&g, (41, 0), &cfg()).is_err());
    }

    #[test]
    fn nlos_dropped_olos_penalised() {
        let c = cfg();
        assert_eq!(c.evaluate(50.0, CellClass::Nlos).unwrap().1, 0.0);
        assert!(c.evaluate(50.0, CellClass::Nlos).unwrap().0.is_nan());
        let los = c.evaluate(150.0, CellClass::Los).unwrap().0;
        let olos = c.evaluate(150.0, CellClass::Olos).unwrap().0;
        assert!((los - olos - DEFAULT_OLOS_EXCESS_DB).abs() < 1e-12);
        let g = EnvironmentGrid::parse("2 1 1\nLN\n").unwrap();
        let csv = heatmap_csv(&heatmap(&g, (0, 0), &c).unwrap());
        assert_eq!(csv.lines().nth(2).unwrap(), "1,0,NLOS,nan,0");
    }

    #[test]
    fn stats_buckets() {
        let c = cfg();
        let one = link_stats(
            &[LinkSample {
                distance_m: 50.0,
                class: CellClass::Los,
            }],
            &c,
            &DEFAULT_BUCKET_EDGES_M,
            1e9,
        )
        .unwrap();
        let los0 = &one[0];
        assert_eq!((los0.class, los0.count), (CellClass::Los, 1));
        assert_eq!(los0.mean_bps, c.evaluate(50.0, CellClass::Los).unwrap().1);
        let edge = [
            LinkSample {
                distance_m: 99.9,
                class: CellClass::Los,
            },
            LinkSample {
                distance_m: 100.0,
                class: CellClass::Los,
            },
        ];
        let s = link_stats(&edge, &c, &DEFAULT_BUCKET_EDGES_M, 1e9).unwrap();
        assert_eq!(s[0].count, 1);
        assert_eq!(s[3].count, 1);
        assert!(link_stats(&[], &c, &DEFAULT_BUCKET_EDGES_M, 1e9).is_err());
    }

    #[test]
    fn stats_permutation_invariant() {
        let c = cfg();
        let mut links: Vec<LinkSample> = (0..60)
            .map(|i| LinkSample {
                distance_m: (i * 37 % 200) as f64 + 0.5,
                class: CellClass::ALL[i % 3],
            })
            .collect();
        let a = link_stats_csv(&link_stats(&links, &c, &DEFAULT_BUCKET_EDGES_M, 4e9).unwrap());
        links.reverse();
        links.swap(3, 17);
        let b = link_stats_csv(&link_stats(&links, &c, &DEFAULT_BUCKET_EDGES_M, 4e9).unwrap());
        assert_eq!(a, b);
    }
}
