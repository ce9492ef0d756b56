use crate::bits::exact_log2;
use crate::channel::{AtmosphereTable, CARRIER_HZ};
use crate::error::{Error, Result};
use crate::indexmod::{fsim_bits_per_symbol, gsm_bits_per_symbol, smx_fsim_bits_per_symbol};

use super::budget::{path_loss_db, snr_db, LinkBudget};
use super::fmt6;
use super::se::{se_from_snr, throughput_bps, SeCurve, SeMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeDescriptor {
    /// Single-stream APM (square QAM, PSK or polar) of order `m`.
    Apm {
        m: usize,
    },
    Gsm {
        nt: usize,
        na: usize,
        m: usize,
    },
    Fsim {
        n: usize,
        m: usize,
    },
    SmxFsim {
        nt: usize,
        n: usize,
        m: usize,
    },
    /// One OOK bit per transmit antenna.
    OokEd {
        nt: usize,
    },
}

impl SchemeDescriptor {
    pub fn bits_per_symbol(&self) -> Result<usize> {
        match *self {
            SchemeDescriptor::Apm { m } => exact_log2(m).ok_or_else(|| {
                Error::InvalidModulation(format!("order {m} is not a power of two"))
            }),
            SchemeDescriptor::Gsm { nt, na, m } => gsm_bits_per_symbol(nt, na, m),
            SchemeDescriptor::Fsim { n, m } => fsim_bits_per_symbol(n, m),
            SchemeDescriptor::SmxFsim { nt, n, m } => smx_fsim_bits_per_symbol(nt, n, m),
            SchemeDescriptor::OokEd { nt } if nt > 0 => Ok(nt),
            SchemeDescriptor::OokEd { .. } => Err(Error::InvalidIndexConfig(
                "OOK-ED needs at least one antenna".into(),
            )),
        }
    }
}

/// `bits_per_symbol * symbol_rate * code_rate`.
pub fn scheme_rate_bps(scheme: &SchemeDescriptor, symbol_rate: f64, code_rate: f64) -> Result<f64> {
    Ok(scheme.bits_per_symbol()? as f64 * symbol_rate * code_rate)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RateModel {
    /// Peak rate of a fixed scheme.
    Scheme {
        scheme: SchemeDescriptor,
        symbol_rate: f64,
        code_rate: f64,
    },
    /// SE from the link SNR at the nominal range.
    Adaptive { mode: SeMode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpiScenario {
    pub id: &'static str,
    pub description: &'static str,
    pub pn_condition: &'static str,
    pub budget: LinkBudget,
    pub range_m: f64,
    pub rate: RateModel,
    pub notes: &'static str,
}

const CHANNEL_NOTE: &str = "per 1 GHz channel (Table 3 header reads 2GHz-channel)";

fn registry() -> Vec<KpiScenario> {
    vec![
        KpiScenario {
            id: "backhaul",
            description: "LDPC coded SISO coherent P-QAM",
            pn_condition: "no PN",
            budget: LinkBudget::backhaul_beamforming(),
            range_m: 300.0,
            rate: RateModel::Adaptive { mode: SeMode::NoPn },
            notes: "Table 3 prints 5.7",
        },
        KpiScenario {
            id: "backhaul-strong-pn",
            description: "LDPC coded SISO coherent P-QAM",
            pn_condition: "strong PN",
            budget: LinkBudget::backhaul_beamforming(),
            range_m: 300.0,
            rate: RateModel::Adaptive {
                mode: SeMode::StrongPnPolar,
            },
            notes: "",
        },
        KpiScenario {
            id: "shortrange-gsm",
            description:
                "uncoded 10x10 MIMO GSM-QPSK with 3 active antennas and joint ML detection",
            pn_condition: "medium PN",
            budget: LinkBudget::short_range(14.0),
            range_m: 5.0,
            rate: RateModel::Scheme {
                scheme: SchemeDescriptor::Gsm {
                    nt: 10,
                    na: 3,
                    m: 4,
                },
                symbol_rate: 1e9,
                code_rate: 1.0,
            },
            notes: "",
        },
        KpiScenario {
            id: "shortrange-smxfsim-4x10",
            description: "uncoded 4x10 MIMO 2-FSIM-QPSK with linear receiver",
            pn_condition: "medium PN",
            budget: LinkBudget::short_range(10.5),
            range_m: 5.0,
            rate: RateModel::Scheme {
                scheme: SchemeDescriptor::SmxFsim { nt: 4, n: 2, m: 4 },
                symbol_rate: 1e9,
                code_rate: 1.0,
            },
            notes: "",
        },
        KpiScenario {
            id: "d2d-smxfsim-8x8",
            description: "coded 8x8 MIMO 2-FSIM-QPSK with linear receiver",
            pn_condition: "medium PN",
            budget: LinkBudget::d2d(-36.0),
            range_m: 5.0,
            rate: RateModel::Scheme {
                scheme: SchemeDescriptor::SmxFsim { nt: 8, n: 2, m: 4 },
                symbol_rate: 1e9,
                code_rate: 8.0 / 9.0,
            },
            notes: "code rate 8/9 inferred from 21.33/24",
        },
        KpiScenario {
            id: "d2d-fsim-siso",
            description: "coded SISO 2-FSIM-QPSK with linear receiver",
            pn_condition: "medium PN",
            budget: LinkBudget::d2d(-48.3),
            range_m: 5.0,
            rate: RateModel::Scheme {
                scheme: SchemeDescriptor::Fsim { n: 2, m: 4 },
                symbol_rate: 1e9,
                code_rate: 8.0 / 9.0,
            },
            notes: "code rate 8/9 inferred from 2.67/3",
        },
        KpiScenario {
            id: "d2d-ook-ed",
            description: "BCH coded 8x8 MIMO non-coherent OOK with energy detector",
            pn_condition: "strong PN",
            budget: LinkBudget::d2d(-43.0),
            range_m: 5.0,
            rate: RateModel::Scheme {
                scheme: SchemeDescriptor::OokEd { nt: 8 },
                symbol_rate: 1e9,
                code_rate: 0.40625,
            },
            notes: "effective rate 0.40625 inferred from 3.25/8; not an exact BCH(63 k) rate",
        },
    ]
}

pub fn scenario_ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id).collect()
}

pub fn scenario(id: &str) -> Result<KpiScenario> {
    registry().into_iter().find(|s| s.id == id).ok_or_else(|| {
        Error::UnknownScenario(format!("{id} (known: {})", scenario_ids().join(", ")))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpiRow {
    pub scenario: KpiScenario,
    pub snr_db: f64,
    pub throughput_bps: f64,
    pub notes: String,
}

pub fn kpi_row(s: &KpiScenario, table: &AtmosphereTable) -> Result<KpiRow> {
    s.budget.validate()?;
    let snr = snr_db(&s.budget, path_loss_db(CARRIER_HZ, s.range_m, table)?);
    let throughput = match &s.rate {
        RateModel::Scheme {
            scheme,
            symbol_rate,
            code_rate,
        } => scheme_rate_bps(scheme, *symbol_rate, *code_rate)?,
        RateModel::Adaptive { mode } => {
            let curve = SeCurve::preset(*mode)?;
            throughput_bps(
                se_from_snr(&curve, snr),
                s.budget.bandwidth_hz,
                s.budget.useful_fraction,
            )
        }
    };
    let notes = if s.notes.is_empty() {
        CHANNEL_NOTE.to_string()
    } else {
        format!("{}; {CHANNEL_NOTE}", s.notes)
    };
    Ok(KpiRow {
        scenario: s.clone(),
        snr_db: snr,
        throughput_bps: throughput,
        notes,
    })
}

/// Rows for the given scenario ids; `"all"` expands to the whole registry.
pub fn kpi_table(ids: &[&str], table: &AtmosphereTable) -> Result<Vec<KpiRow>> {
    let ids: Vec<&str> = if ids.contains(&"all") {
        scenario_ids()
    } else {
        ids.to_vec()
    };
    ids.iter()
        .map(|id| kpi_row(&scenario(id)?, table))
        .collect()
}

pub fn kpi_csv(rows: &[KpiRow]) -> String {
    let mut out = String::from(
        "scenario,description,pn,ptx_dBm,gtx_dBi,grx_dBi,losses_nf_dB,range_m,snr_dB,throughput_bps,notes\n",
    );
    for r in rows {
        let s = &r.scenario;
        let b = &s.budget;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            s.id,
            s.description,
            s.pn_condition,
            fmt6(b.ptx_dbm),
            fmt6(b.gtx_dbi),
            fmt6(b.grx_dbi),
            fmt6(b.impl_losses_db + b.noise_figure_db),
            fmt6(s.range_m),
            fmt6(r.snr_db),
            fmt6(r.throughput_bps),
            r.notes
        ));
    }
    out
}
