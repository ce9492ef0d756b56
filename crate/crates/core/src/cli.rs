//! `subthz` command-line front end.
//!
//! Every option can also be given in a flat `key=value` file passed with
//! `--config`; keys are the long flag names (`max-bits=20000`). Flags on
//! the command line win over the file.
//! Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::channel::{pn_variance, AntennaPattern, AtmosphereTable, LosMimoGeometry, CARRIER_HZ};
use crate::detect::{LinearMode, ThresholdPolicy};
use crate::error::Error;
use crate::fec::{code_table, BchCode};
use crate::indexmod::{build_default_bank, FsimConfig, GsmConfig};
use crate::linkplan::{
    fmt6, heatmap, heatmap_csv, kpi_csv, kpi_table, scheme_rate_bps, EnvironmentGrid,
    HeatmapConfig, LinkBudget, SchemeDescriptor, SeCurve, SeMode, NOISE_PSD_DBM_HZ,
};
use crate::modem::{Constellation, ModulationKind, DEFAULT_RRC_SPAN, DEFAULT_SPS};
use crate::sim::{
    ber_csv, parse_sweep, run, ChannelKind, EdReceiver, RunConfig, Scheme, SweepAxis,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "subthz",
    version,
    about = "D-band link-level simulator and link-budget toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Master seed for all random draws
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long, allow_hyphen_values = true)]
    out: Option<PathBuf>,
    /// Flat key=value file with defaults for any option
    #[arg(long, allow_hyphen_values = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Monte-Carlo BER sweep, CSV out
    Ber(BerArgs),
    /// Key performance indicators per scenario, CSV out
    Kpi(KpiArgs),
    /// Per-cell throughput around a node, CSV out
    Heatmap(HeatmapArgs),
    /// BCH(63, k) code table
    Codes(CodesArgs),
    /// Bits per symbol and rate of a scheme
    Se(SeArgs),
}

#[derive(Args, Debug)]
struct BerArgs {
    #[command(flatten)]
    common: Common,
    /// apm (alias qam), gsm, fsim, smx-fsim, ook-ed
    #[arg(long, allow_hyphen_values = true)]
    scheme: Option<String>,
    /// bpsk, qpsk, <M>psk, <M>qam, <M>polar
    #[arg(long = "mod", allow_hyphen_values = true)]
    modulation: Option<String>,
    /// Rings of a polar constellation
    #[arg(long, allow_hyphen_values = true)]
    rings: Option<String>,
    /// Transmit antennas
    #[arg(long, allow_hyphen_values = true)]
    nt: Option<String>,
    /// Active antennas (GSM)
    #[arg(long, allow_hyphen_values = true)]
    na: Option<String>,
    /// Filter-bank size (FSIM): 2 or 4
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Receive antennas for the rayleigh and los channels
    #[arg(long, allow_hyphen_values = true)]
    nr: Option<String>,
    /// identity, rayleigh or los
    #[arg(long, allow_hyphen_values = true)]
    channel: Option<String>,
    /// LoS link distance in metres
    #[arg(long, allow_hyphen_values = true)]
    distance: Option<String>,
    /// LoS element spacing in metres (Rayleigh spacing when absent)
    #[arg(long, allow_hyphen_values = true)]
    spacing: Option<String>,
    /// Es/N0 sweep in dB: start:step:stop, a value, or inf for no noise
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Transmit power sweep in dBm (replaces --snr)
    #[arg(long, allow_hyphen_values = true)]
    ptx: Option<String>,
    /// Receiver noise figure in dB for --ptx sweeps
    #[arg(long, allow_hyphen_values = true)]
    nf: Option<String>,
    /// Phase-noise floor in dBc/Hz
    #[arg(long = "pn-floor", allow_hyphen_values = true)]
    pn_floor: Option<String>,
    /// Phase-noise variance in rad^2 (overrides --pn-floor)
    #[arg(long = "pn-sigma2")]
    pn_sigma2: Option<String>,
    /// Channel bandwidth in Hz
    #[arg(long, allow_hyphen_values = true)]
    bandwidth: Option<String>,
    /// BCH message length k (63 = uncoded)
    #[arg(long = "code-k", allow_hyphen_values = true)]
    code_k: Option<String>,
    /// zf or mmse (SMX-FSIM)
    #[arg(long, allow_hyphen_values = true)]
    receiver: Option<String>,
    /// per-antenna or joint (OOK-ED)
    #[arg(long, allow_hyphen_values = true)]
    ed: Option<String>,
    /// Fixed energy threshold for per-antenna OOK detection
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<String>,
    /// Symbol periods per frame
    #[arg(long, allow_hyphen_values = true)]
    frame: Option<String>,
    /// Stop a point after this many information bits
    #[arg(long = "max-bits", allow_hyphen_values = true)]
    max_bits: Option<String>,
    /// Stop a point after this many bit errors
    #[arg(long = "max-errors", allow_hyphen_values = true)]
    max_errors: Option<String>,
    /// Run frames on one thread
    #[arg(long, allow_hyphen_values = true)]
    serial: Option<String>,
}

#[derive(Args, Debug)]
struct KpiArgs {
    #[command(flatten)]
    common: Common,
    /// Scenario ids, or all
    #[arg(long, allow_hyphen_values = true)]
    scenarios: Option<String>,
    /// Atmospheric table file (frequency_GHz dB_per_km)
    #[arg(long, allow_hyphen_values = true)]
    atmosphere: Option<String>,
}

#[derive(Args, Debug)]
struct HeatmapArgs {
    #[command(flatten)]
    common: Common,
    /// Environment grid file
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Node cell as x,y (grid centre when absent)
    #[arg(long, allow_hyphen_values = true)]
    node: Option<String>,
    /// lamppost or beamforming
    #[arg(long, allow_hyphen_values = true)]
    budget: Option<String>,
    /// Transmit power in dBm
    #[arg(long, allow_hyphen_values = true)]
    ptx: Option<String>,
    /// Transmit antenna gain in dBi
    #[arg(long, allow_hyphen_values = true)]
    gtx: Option<String>,
    /// Receive antenna gain in dBi
    #[arg(long, allow_hyphen_values = true)]
    grx: Option<String>,
    /// Implementation losses in dB
    #[arg(long, allow_hyphen_values = true)]
    losses: Option<String>,
    /// Receiver noise figure in dB
    #[arg(long, allow_hyphen_values = true)]
    nf: Option<String>,
    /// no-pn, strong-pn-qam, strong-pn-polar or table
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// snr_dB,se CSV for --curve table
    #[arg(long = "curve-file", allow_hyphen_values = true)]
    curve_file: Option<String>,
    /// Obstructed line-of-sight excess loss in dB
    #[arg(long = "olos-db", allow_hyphen_values = true)]
    olos_db: Option<String>,
    /// Atmospheric table file (frequency_GHz dB_per_km)
    #[arg(long, allow_hyphen_values = true)]
    atmosphere: Option<String>,
}

#[derive(Args, Debug)]
struct CodesArgs {
    #[command(flatten)]
    common: Common,
    /// text or csv
    #[arg(long, allow_hyphen_values = true)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct SeArgs {
    #[command(flatten)]
    common: Common,
    /// apm, gsm, fsim, smx-fsim, ook-ed
    scheme: Option<String>,
    /// bpsk, qpsk, <M>psk, <M>qam, <M>polar
    #[arg(long = "mod", allow_hyphen_values = true)]
    modulation: Option<String>,
    /// Transmit antennas
    #[arg(long, allow_hyphen_values = true)]
    nt: Option<String>,
    /// Active antennas (GSM)
    #[arg(long, allow_hyphen_values = true)]
    na: Option<String>,
    /// Filter-bank size (FSIM)
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Symbol rate in baud
    #[arg(long, allow_hyphen_values = true)]
    baud: Option<String>,
    /// Code rate
    #[arg(long, allow_hyphen_values = true)]
    rate: Option<String>,
    /// text or csv
    #[arg(long, allow_hyphen_values = true)]
    format: Option<String>,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Io(_)) {
            EXIT_IO
        } else {
            EXIT_USAGE
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Fail>;

/// Merged option values: config file first, command-line flags on top.
struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    fn build(matches: &ArgMatches, known: &[String]) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = matches.get_one::<PathBuf>("config") {
            let text = std::fs::read_to_string(path).map_err(|e| Fail {
                code: EXIT_IO,
                msg: format!("cannot read config {}: {e}", path.display()),
            })?;
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Fail::usage(format!("config line {}: expected key=value", n + 1))
                })?;
                let key = k.trim().replace('-', "_");
                let key = if key == "mod" {
                    "modulation".to_string()
                } else {
                    key
                };
                if !known.contains(&key) || key == "config" || key == "help" {
                    return Err(Fail::usage(format!(
                        "config line {}: unknown key `{}`",
                        n + 1,
                        k.trim()
                    )));
                }
                values.insert(key, v.trim().to_string());
            }
        }
        for id in known {
            if id == "config" || matches.value_source(id) != Some(ValueSource::CommandLine) {
                continue;
            }
            if let Some(v) = matches.get_raw(id).and_then(|mut r| r.next()) {
                values.insert(id.clone(), v.to_string_lossy().into_owned());
            }
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                Fail::usage(format!("invalid value `{v}` for `{}`", display_key(key)))
            }),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require(&self, key: &str) -> CliResult<&str> {
        self.raw(key)
            .ok_or_else(|| Fail::usage(format!("missing required `{}`", display_key(key))))
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "1" | "yes" | "on" | "") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(v) => Err(Fail::usage(format!(
                "invalid value `{v}` for `{}`",
                display_key(key)
            ))),
        }
    }

    /// Wraps a library error so the message names the key it came from.
    fn keyed<T>(&self, key: &str, r: crate::Result<T>) -> CliResult<T> {
        r.map_err(|e| {
            let mut f = Fail::from(e);
            f.msg = format!("`{}`: {}", display_key(key), f.msg);
            f
        })
    }
}

fn display_key(key: &str) -> String {
    if key == "modulation" {
        "mod".into()
    } else {
        key.replace('_', "-")
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let known: Vec<String> = Cli::command()
        .find_subcommand(name)
        .map(|c| c.get_arguments().map(|a| a.get_id().to_string()).collect())
        .unwrap_or_default();
    match dispatch(&cli.cmd, sub, &known) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: &Cmd, matches: &ArgMatches, known: &[String]) -> CliResult<()> {
    let s = Settings::build(matches, known)?;
    let (text, common) = match cmd {
        Cmd::Ber(a) => (cmd_ber(&s)?, &a.common),
        Cmd::Kpi(a) => (cmd_kpi(&s)?, &a.common),
        Cmd::Heatmap(a) => (cmd_heatmap(&s)?, &a.common),
        Cmd::Codes(a) => (cmd_codes(&s)?, &a.common),
        Cmd::Se(a) => (cmd_se(&s)?, &a.common),
    };
    let out = s
        .raw("out")
        .map(PathBuf::from)
        .or_else(|| common.out.clone());
    emit(&text, out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    let io = |e: std::io::Error, what: &str| Fail {
        code: EXIT_IO,
        msg: format!("cannot write {what}: {e}"),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io(e, &p.display().to_string())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| io(e, "stdout"))
        }
    }
}

fn parse_modulation(s: &Settings) -> CliResult<Constellation> {
    let raw = s.raw("modulation").unwrap_or("qpsk").to_ascii_lowercase();
    let bad = || Fail::usage(format!("invalid value `{raw}` for `mod`"));
    let order = |suffix: &str| {
        raw.strip_suffix(suffix)
            .and_then(|m| m.parse::<usize>().ok())
    };
    let c = match raw.as_str() {
        "bpsk" => Ok(Constellation::bpsk()),
        "qpsk" => Ok(Constellation::qpsk()),
        "ook" => Ok(Constellation::ook()),
        _ => {
            if let Some(m) = order("psk") {
                Constellation::new(ModulationKind::Psk, m, None)
            } else if let Some(m) = order("qam") {
                Constellation::new(ModulationKind::Qam, m, None)
            } else if let Some(m) = order("polar") {
                let rings = s.get::<usize>("rings")?;
                if rings.is_none() {
                    return Err(Fail::usage("`mod` polar needs `rings`"));
                }
                Constellation::new(ModulationKind::Polar, m, rings)
            } else {
                return Err(bad());
            }
        }
    };
    s.keyed("mod", c)
}

fn positive_usize(s: &Settings, key: &str, default: usize) -> CliResult<usize> {
    let v = s.or(key, default)?;
    if v == 0 {
        return Err(Fail::usage(format!(
            "`{}` must be positive",
            display_key(key)
        )));
    }
    Ok(v)
}

fn build_scheme(s: &Settings, name: &str) -> CliResult<Scheme> {
    let fsim = |s: &Settings| -> CliResult<FsimConfig> {
        let n = positive_usize(s, "n", 2)?;
        let bank = s.keyed("n", build_default_bank(n, DEFAULT_SPS, DEFAULT_RRC_SPAN))?;
        s.keyed("mod", FsimConfig::new(bank, parse_modulation(s)?))
    };
    match name {
        "apm" | "qam" => Ok(Scheme::Apm(parse_modulation(s)?)),
        "gsm" => {
            let nt = positive_usize(s, "nt", 4)?;
            let na = positive_usize(s, "na", 2)?;
            Ok(Scheme::Gsm(s.keyed(
                "na",
                GsmConfig::lexicographic(nt, na, parse_modulation(s)?),
            )?))
        }
        "fsim" => Ok(Scheme::Fsim(fsim(s)?)),
        "smx-fsim" => {
            let receiver = match s.raw("receiver").unwrap_or("zf") {
                "zf" => LinearMode::Zf,
                "mmse" => LinearMode::Mmse,
                v => return Err(Fail::usage(format!("invalid value `{v}` for `receiver`"))),
            };
            Ok(Scheme::SmxFsim {
                nt: positive_usize(s, "nt", 2)?,
                cfg: fsim(s)?,
                receiver,
            })
        }
        "ook-ed" => {
            let receiver = match s.raw("ed").unwrap_or("per-antenna") {
                "joint" => EdReceiver::Joint,
                "per-antenna" => {
                    EdReceiver::PerAntenna(s.get::<f64>("threshold")?.map(ThresholdPolicy::Fixed))
                }
                v => return Err(Fail::usage(format!("invalid value `{v}` for `ed`"))),
            };
            Ok(Scheme::OokEd {
                nt: positive_usize(s, "nt", 1)?,
                receiver,
            })
        }
        v => Err(Fail::usage(format!("invalid value `{v}` for `scheme`"))),
    }
}

fn cmd_ber(s: &Settings) -> CliResult<String> {
    let scheme = build_scheme(s, s.raw("scheme").unwrap_or("apm"))?;
    let bandwidth: f64 = s.or("bandwidth", 1e9)?;
    let nt = scheme.nt();
    let channel = match s.raw("channel").unwrap_or("identity") {
        "identity" => ChannelKind::Identity,
        "rayleigh" => ChannelKind::Rayleigh {
            n_rx: positive_usize(s, "nr", nt)?,
        },
        "los" => {
            let nr = positive_usize(s, "nr", nt)?;
            let d: f64 = s.or("distance", 5.0)?;
            let mut g = LosMimoGeometry::rayleigh(
                CARRIER_HZ,
                nt,
                nr,
                d,
                AntennaPattern::d_band_transmitarray(),
            );
            if let Some(sp) = s.get::<f64>("spacing")? {
                g.tx_spacing_m = sp;
                g.rx_spacing_m = sp;
            }
            s.keyed("distance", g.validate())?;
            ChannelKind::Los(g)
        }
        v => return Err(Fail::usage(format!("invalid value `{v}` for `channel`"))),
    };
    let (axis, points) = match (s.raw("snr"), s.raw("ptx")) {
        (Some(_), Some(_)) => return Err(Fail::usage("give either `snr` or `ptx`, not both")),
        (_, Some(p)) => {
            let nf: f64 = s.or("nf", 10.0)?;
            let noise_dbm = NOISE_PSD_DBM_HZ + 10.0 * bandwidth.log10() + nf;
            (
                SweepAxis::TxPowerDbm { noise_dbm },
                s.keyed("ptx", parse_sweep(p))?,
            )
        }
        (snr, None) => {
            let spec = snr.unwrap_or("0:2:10");
            let pts = if spec.eq_ignore_ascii_case("inf") {
                vec![f64::INFINITY]
            } else {
                s.keyed("snr", parse_sweep(spec))?
            };
            (SweepAxis::SnrDb, pts)
        }
    };
    let pn_sigma2 = match (s.get::<f64>("pn_sigma2")?, s.get::<f64>("pn_floor")?) {
        (Some(v), _) => v,
        (None, Some(floor)) => pn_variance(floor, bandwidth),
        (None, None) => 0.0,
    };
    let code = match s.get::<usize>("code_k")? {
        None => None,
        Some(k) => Some(s.keyed("code-k", BchCode::with_k(k))?),
    };
    let mut cfg = RunConfig::new(scheme, points, s.or("seed", DEFAULT_SEED)?);
    cfg.channel = channel;
    cfg.pn_sigma2 = pn_sigma2;
    cfg.axis = axis;
    cfg.code = code;
    cfg.frame_periods = positive_usize(s, "frame", cfg.frame_periods)?;
    cfg.max_bits = s.or("max_bits", cfg.max_bits)?;
    cfg.max_errors = s.or("max_errors", cfg.max_errors)?;
    cfg.parallel = !s.flag("serial")?;
    let results = run(&cfg)?;
    Ok(ber_csv(&results, axis))
}

fn load_atmosphere(s: &Settings) -> CliResult<AtmosphereTable> {
    match s.raw("atmosphere") {
        None => Ok(AtmosphereTable::default()),
        Some(p) => s.keyed("atmosphere", AtmosphereTable::load(p)),
    }
}

fn cmd_kpi(s: &Settings) -> CliResult<String> {
    let ids = s.raw("scenarios").unwrap_or("all");
    let ids: Vec<&str> = ids
        .split(',')
        .map(str::trim)
        .filter(|i| !i.is_empty())
        .collect();
    let rows = s.keyed("scenarios", kpi_table(&ids, &load_atmosphere(s)?))?;
    Ok(kpi_csv(&rows))
}

fn cmd_heatmap(s: &Settings) -> CliResult<String> {
    let grid = s.keyed("grid", EnvironmentGrid::load(s.require("grid")?))?;
    let node = match s.raw("node") {
        None => (grid.width() / 2, grid.height() / 2),
        Some(v) => {
            let parsed = v
                .split_once(',')
                .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)));
            parsed.ok_or_else(|| {
                Fail::usage(format!("invalid value `{v}` for `node` (expected x,y)"))
            })?
        }
    };
    let mut budget = match s.raw("budget").unwrap_or("lamppost") {
        "lamppost" => LinkBudget::backhaul_lamppost(),
        "beamforming" => LinkBudget::backhaul_beamforming(),
        v => return Err(Fail::usage(format!("invalid value `{v}` for `budget`"))),
    };
    budget.ptx_dbm = s.or("ptx", budget.ptx_dbm)?;
    budget.gtx_dbi = s.or("gtx", budget.gtx_dbi)?;
    budget.grx_dbi = s.or("grx", budget.grx_dbi)?;
    budget.impl_losses_db = s.or("losses", budget.impl_losses_db)?;
    budget.noise_figure_db = s.or("nf", budget.noise_figure_db)?;
    let mode_raw = s.raw("curve").unwrap_or("no-pn");
    let mode = SeMode::parse(mode_raw)
        .ok_or_else(|| Fail::usage(format!("invalid value `{mode_raw}` for `curve`")))?;
    let curve = match mode {
        SeMode::Table => s.keyed(
            "curve-file",
            SeCurve::load_csv(s.require("curve_file")?, None),
        )?,
        m => s.keyed("curve", SeCurve::preset(m))?,
    };
    let mut cfg = HeatmapConfig::new(budget, curve);
    cfg.olos_excess_db = s.or("olos_db", cfg.olos_excess_db)?;
    cfg.atmosphere = load_atmosphere(s)?;
    Ok(heatmap_csv(&s.keyed("node", heatmap(&grid, node, &cfg))?))
}

fn wants_csv(s: &Settings) -> CliResult<bool> {
    match s.raw("format").unwrap_or("text") {
        "text" => Ok(false),
        "csv" => Ok(true),
        v => Err(Fail::usage(format!("invalid value `{v}` for `format`"))),
    }
}

fn cmd_codes(s: &Settings) -> CliResult<String> {
    let csv = wants_csv(s)?;
    let mut out = if csv {
        String::from("n,k,t,rate\n")
    } else {
        String::from("    n    k    t    rate\n")
    };
    for e in code_table() {
        if csv {
            out.push_str(&format!("{},{},{},{}\n", e.n, e.k, e.t, fmt6(e.rate)));
        } else {
            out.push_str(&format!("{:>5}{:>5}{:>5}{:>8.4}\n", e.n, e.k, e.t, e.rate));
        }
    }
    Ok(out)
}

fn cmd_se(s: &Settings) -> CliResult<String> {
    let name = s.require("scheme")?;
    let m = parse_modulation(s)?.bits_per_symbol();
    let order = 1usize << m;
    let desc = match name {
        "apm" | "qam" => SchemeDescriptor::Apm { m: order },
        "gsm" => SchemeDescriptor::Gsm {
            nt: positive_usize(s, "nt", 4)?,
            na: positive_usize(s, "na", 2)?,
            m: order,
        },
        "fsim" => SchemeDescriptor::Fsim {
            n: positive_usize(s, "n", 2)?,
            m: order,
        },
        "smx-fsim" => SchemeDescriptor::SmxFsim {
            nt: positive_usize(s, "nt", 2)?,
            n: positive_usize(s, "n", 2)?,
            m: order,
        },
        "ook-ed" => SchemeDescriptor::OokEd {
            nt: positive_usize(s, "nt", 1)?,
        },
        v => return Err(Fail::usage(format!("invalid value `{v}` for `scheme`"))),
    };
    let bits = s.keyed("scheme", desc.bits_per_symbol())?;
    let baud: f64 = s.or("baud", 1e9)?;
    let rate: f64 = s.or("rate", 1.0)?;
    if !(baud > 0.0) || !(rate > 0.0 && rate <= 1.0) {
        return Err(Fail::usage("`baud` must be positive and `rate` in (0, 1]"));
    }
    let bps = s.keyed("scheme", scheme_rate_bps(&desc, baud, rate))?;
    Ok(if wants_csv(s)? {
        format!(
            "scheme,bits_per_symbol,baud,code_rate,rate_bps\n{name},{bits},{},{},{}\n",
            fmt6(baud),
            fmt6(rate),
            fmt6(bps)
        )
    } else {
        format!(
            "{name}: {bits} bits/symbol, {} Gbps at {} Gbaud and code rate {}\n",
            fmt6(bps / 1e9),
            fmt6(baud / 1e9),
            fmt6(rate)
        )
    })
}
