//! Link budgets, SNR to spectral-efficiency mapping, KPI rows, coverage
//! heatmaps and per-range connectivity statistics.

mod budget;
mod grid;
mod kpi;
mod se;

pub use budget::{path_loss_db, snr_db, LinkBudget, NOISE_PSD_DBM_HZ};
pub use grid::{
    heatmap, heatmap_csv, link_stats, link_stats_csv, BucketStats, CellClass, EnvironmentGrid,
    HeatmapCell, HeatmapConfig, LinkSample, DEFAULT_BUCKET_EDGES_M, DEFAULT_OLOS_EXCESS_DB,
    MIN_DISTANCE_M,
};
pub use kpi::{
    kpi_csv, kpi_row, kpi_table, scenario, scenario_ids, scheme_rate_bps, KpiRow, KpiScenario,
    RateModel, SchemeDescriptor,
};
pub use se::{
    se_from_snr, throughput_bps, SeCurve, SeMode, CEILING_NO_PN, CEILING_STRONG_PN_POLAR,
    CEILING_STRONG_PN_QAM,
};

/// Six significant digits in the style of C's `%g`; `nan` for NaN.
pub fn fmt6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..6).contains(&exp) {
        let mant = trim_zeros(mant);
        return format!("{mant}e{exp}");
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt6;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt6(0.0), "0");
        assert_eq!(fmt6(5.76e9), "5.76e9");
        assert_eq!(fmt6(34.8234), "34.8234");
        assert_eq!(fmt6(34.823456), "34.8235");
        assert_eq!(fmt6(-1.5), "-1.5");
        assert_eq!(fmt6(123456.7), "123457");
        assert_eq!(fmt6(999999.7), "1e6");
        assert_eq!(fmt6(1.234e-5), "1.234e-5");
        assert_eq!(fmt6(0.000123), "0.000123");
        assert_eq!(fmt6(f64::NAN), "nan");
        assert_eq!(fmt6(2.0 / 3.0), "0.666667");
    }
}
