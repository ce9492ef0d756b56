//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use subthz::channel::{
    add_phase_noise, pn_variance, AntennaPattern, AtmosphereTable, LosMimoGeometry, CARRIER_HZ,
};
use subthz::detect::{ml_gsm_detect, LinearMode};
use subthz::fec::{BchCode, DecodeStatus};
use subthz::indexmod::{build_default_bank, FsimConfig, GsmConfig};
use subthz::linkplan::{
    kpi_table, scheme_rate_bps, se_from_snr, snr_db, LinkBudget, SchemeDescriptor, SeCurve,
};
use subthz::modem::{Constellation, ModulationKind};
use subthz::sim::{ed_thresholds, run, ChannelKind, EdReceiver, RunConfig, Scheme, SweepAxis};
use subthz::{bits, cli, Complex64};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// Oracles shared by several criteria, written independently of the crate.

fn fspl_oracle(f: f64, d: f64) -> f64 {
    let c = 299_792_458.0;
    20.0 * (4.0 * PI * d * f / c).log10()
}

/// `P(chi'^2_2(lambda) <= x)` as a Poisson mixture of central chi-square
/// CDFs with even degrees of freedom.
fn noncentral_chi2_2dof_cdf(x: f64, lambda: f64) -> f64 {
    let half_l = lambda / 2.0;
    let half_x = x / 2.0;
    let mut total = 0.0;
    let mut poisson = (-half_l).exp();
    // Central CDF with 2k dof: 1 - e^{-x/2} sum_{i<k} (x/2)^i / i!
    let mut partial = 0.0;
    let mut term = (-half_x).exp();
    for j in 0..2000 {
        partial += term;
        term *= half_x / (j as f64 + 1.0);
        total += poisson * (1.0 - partial).max(0.0);
        poisson *= half_l / (j as f64 + 1.0);
        if poisson < 1e-300 && j as f64 > half_l {
            break;
        }
    }
    total
}

fn c1_se_arithmetic() -> Check {
    let cases = [
        (
            SchemeDescriptor::Gsm {
                nt: 10,
                na: 3,
                m: 4,
            },
            12,
            vec!["gsm", "--nt", "10", "--na", "3"],
        ),
        (
            SchemeDescriptor::SmxFsim { nt: 4, n: 2, m: 4 },
            12,
            vec!["smx-fsim", "--nt", "4", "--n", "2"],
        ),
        (
            SchemeDescriptor::SmxFsim { nt: 8, n: 2, m: 4 },
            24,
            vec!["smx-fsim", "--nt", "8", "--n", "2"],
        ),
        (
            SchemeDescriptor::Fsim { n: 2, m: 4 },
            3,
            vec!["fsim", "--n", "2"],
        ),
    ];
    let dir = tempfile::tempdir().map_err(err)?;
    let mut seen = Vec::new();
    for (i, (desc, expected, args)) in cases.iter().enumerate() {
        let lib = desc.bits_per_symbol().map_err(err)?;
        let out = dir.path().join(format!("se{i}.csv"));
        let mut argv = vec!["subthz", "se"];
        argv.extend(args.iter().copied());
        argv.extend([
            "--mod",
            "qpsk",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]);
        ensure(
            cli::main_with_args(argv) == 0,
            format!("se {args:?} failed"),
        )?;
        let text = std::fs::read_to_string(&out).map_err(err)?;
        let row: Vec<&str> = text.lines().nth(1).unwrap_or("").split(',').collect();
        let via_cli: usize = row
            .get(1)
            .and_then(|v| v.parse().ok())
            .ok_or("bad se csv")?;
        ensure(
            lib == *expected && via_cli == *expected,
            format!("{args:?}: lib {lib}, cli {via_cli}, want {expected}"),
        )?;
        seen.push(via_cli.to_string());
    }
    Ok(format!("bits/symbol {}", seen.join(", ")))
}

fn c2_throughput() -> Check {
    let rows = kpi_table(&["all"], &AtmosphereTable::default()).map_err(err)?;
    let want = [
        ("d2d-smxfsim-8x8", 21.33),
        ("d2d-fsim-siso", 2.67),
        ("d2d-ook-ed", 3.25),
        ("backhaul", 5.76),
        ("backhaul-strong-pn", 4.4),
        ("shortrange-gsm", 12.0),
        ("shortrange-smxfsim-4x10", 12.0),
    ];
    let mut got = Vec::new();
    for (id, gbps) in want {
        let row = rows
            .iter()
            .find(|r| r.scenario.id == id)
            .ok_or(format!("missing {id}"))?;
        let v = row.throughput_bps / 1e9;
        ensure(
            (v - gbps).abs() <= 0.01,
            format!("{id}: {v:.4} Gbps, want {gbps}"),
        )?;
        got.push(format!("{id}={v:.2}"));
    }
    let backhaul = rows.iter().find(|r| r.scenario.id == "backhaul").unwrap();
    ensure(
        backhaul.notes.contains("5.7"),
        "backhaul row lacks the 5.7 rounding note",
    )?;
    // Independent rate formula: bits * baud * rate.
    let ook = scheme_rate_bps(&SchemeDescriptor::OokEd { nt: 8 }, 1e9, 0.40625).map_err(err)?;
    ensure(ook == 8.0 * 1e9 * 0.40625, "OOK rate formula")?;
    Ok(got.join(" "))
}

fn c3_ceilings() -> Check {
    let qam = SeCurve::strong_pn_qam();
    for s in [20.0, 25.0, 30.0, 40.0, 60.0] {
        ensure(
            se_from_snr(&qam, s) == 2.5,
            format!("strong-PN QAM at {s} dB = {}", se_from_snr(&qam, s)),
        )?;
    }
    let polar = se_from_snr(&SeCurve::strong_pn_polar(), 30.0);
    let nopn = se_from_snr(&SeCurve::no_pn(), 60.0);
    ensure(polar == 5.5, format!("polar at 30 dB = {polar}"))?;
    ensure(nopn == 7.2, format!("no-PN ceiling = {nopn}"))?;
    Ok("2.5 / 5.5 / 7.2".into())
}

fn c4_link_budget() -> Check {
    // Hand calculation: P + Gt + Gr - FSPL - atmospheric - losses - NF - (-174 + 10 log10 B).
    let noise = -174.0 + 90.0;
    let d2d_oracle = -43.0 + 32.0 + 32.0 - fspl_oracle(150e9, 5.0) - 2.0 * 0.005 - 10.0 - noise;
    let backhaul_oracle =
        30.0 + 25.0 + 25.0 - fspl_oracle(150e9, 100.0) - 2.0 * 0.1 - 3.0 - 10.0 - noise;
    let table = AtmosphereTable::default();
    let d2d = snr_db(
        &LinkBudget::d2d(-43.0),
        subthz::linkplan::path_loss_db(150e9, 5.0, &table).map_err(err)?,
    );
    let bh = snr_db(
        &LinkBudget::backhaul_lamppost(),
        subthz::linkplan::path_loss_db(150e9, 100.0, &table).map_err(err)?,
    );
    ensure(
        (d2d - 5.1).abs() <= 0.1 && (d2d - d2d_oracle).abs() < 1e-9,
        format!("D2D {d2d:.3} dB (oracle {d2d_oracle:.3})"),
    )?;
    ensure(
        (bh - 34.8).abs() <= 0.1 && (bh - backhaul_oracle).abs() < 1e-9,
        format!("backhaul {bh:.3} dB (oracle {backhaul_oracle:.3})"),
    )?;
    Ok(format!("D2D {d2d:.2} dB, backhaul {bh:.2} dB"))
}

fn c5_phase_noise() -> Check {
    let s2 = pn_variance(-100.0, 1e9);
    ensure(s2 == 0.1, format!("pn_variance = {s2:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut x = vec![Complex64::new(1.0, 0.0); 1_000_000];
    add_phase_noise(&mut x, s2, &mut rng).map_err(err)?;
    let n = x.len() as f64;
    let mean = x.iter().map(|z| z.arg()).sum::<f64>() / n;
    let var = x.iter().map(|z| (z.arg() - mean).powi(2)).sum::<f64>() / (n - 1.0);
    ensure(
        (var / s2 - 1.0).abs() < 0.01,
        format!("empirical variance {var:.5}"),
    )?;
    Ok(format!("sigma^2 = 0.1, empirical {var:.5}"))
}

fn c6_pn_floor() -> Check {
    let sigma2 = 0.1;
    let qam = Constellation::new(ModulationKind::Qam, 64, None).map_err(err)?;
    let polar = Constellation::new(ModulationKind::Polar, 64, Some(16)).map_err(err)?;
    let symbols = 1_000_000usize;
    let ber_at = |snr: f64| -> Result<f64, String> {
        let mut cfg = RunConfig::new(Scheme::Apm(qam.clone()), vec![snr], 61);
        cfg.pn_sigma2 = sigma2;
        cfg.frame_periods = 4096;
        cfg.max_bits = 6 * symbols as u64;
        cfg.max_errors = u64::MAX;
        Ok(run(&cfg).map_err(err)?[0].ber())
    };
    let (b30, b50) = (ber_at(30.0)?, ber_at(50.0)?);
    ensure(
        b30 > 1e-3 && b50 > 1e-3,
        format!("BER 30 dB {b30:.3e}, 50 dB {b50:.3e}"),
    )?;
    ensure(
        b30 / b50 <= 2.0 && b50 / b30 <= 2.0,
        format!("no floor: {b30:.3e} vs {b50:.3e}"),
    )?;

    // Same labels, phase draws and noise draws for both constellations.
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let n0 = 10f64.powf(-3.0);
    let mut ser = [0usize; 2];
    for _ in 0..symbols {
        let label = rand::Rng::random_range(&mut rng, 0..64usize);
        let g: f64 = StandardNormal.sample(&mut rng);
        let phi = sigma2.sqrt() * g;
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let noise = Complex64::new(re, im) * (n0 / 2.0).sqrt();
        for (i, c) in [&qam, &polar].iter().enumerate() {
            let y = c.point(label) * Complex64::cis(phi) + noise;
            ser[i] += (c.decide(y) != label) as usize;
        }
    }
    let (sq, sp) = (
        ser[0] as f64 / symbols as f64,
        ser[1] as f64 / symbols as f64,
    );
    ensure(sp < sq, format!("polar SER {sp:.4} not below QAM {sq:.4}"))?;
    Ok(format!(
        "64-QAM BER {b30:.3e} @30 dB, {b50:.3e} @50 dB; SER @30 dB QAM {sq:.4}, polar 16x4 {sp:.4}"
    ))
}

fn c7_detection_oracles() -> Check {
    let cfg = GsmConfig::lexicographic(2, 1, Constellation::bpsk()).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut agree = 0;
    for _ in 0..100 {
        let h = subthz::channel::rayleigh_matrix(2, 2, &mut rng);
        let b = bits::random(&mut rng, 2);
        let x = subthz::indexmod::gsm_frame(&cfg, &b).map_err(err)?;
        let mut y = &h * &x;
        subthz::channel::add_awgn(
            y.as_mut_slice(),
            subthz::channel::NoiseLevel::Power(0.5),
            &mut rng,
        );
        // Brute force: antenna index bit then BPSK bit (0 -> +1, 1 -> -1).
        let mut best = (f64::INFINITY, 0usize);
        for p in 0..4usize {
            let mut xv = DMatrix::zeros(2, 1);
            xv[(p >> 1, 0)] = Complex64::new(if p & 1 == 0 { 1.0 } else { -1.0 }, 0.0);
            let d = (&y - &h * &xv).norm_squared();
            if d < best.0 {
                best = (d, p);
            }
        }
        let ml = ml_gsm_detect(&y, &h, &cfg).map_err(err)?;
        agree += (bits::to_index(&ml) == best.1) as usize;
    }
    ensure(
        agree == 100,
        format!("ML agreed with brute force on {agree}/100"),
    )?;

    // SISO OOK energy detection against the analytic error rate.
    let snr = 10.5;
    let n0 = 10f64.powf(-snr / 10.0);
    let mut cfg = RunConfig::new(
        Scheme::OokEd {
            nt: 1,
            receiver: EdReceiver::PerAntenna(None),
        },
        vec![snr],
        72,
    );
    cfg.frame_periods = 8192;
    cfg.max_bits = 2_000_000;
    cfg.max_errors = u64::MAX;
    let r = run(&cfg).map_err(err)?[0];
    let t = ed_thresholds(&DMatrix::identity(1, 1), n0, None)[0];
    // Bit 0: |n|^2 ~ n0/2 chi^2_2; bit 1: |sqrt2 + n|^2 ~ n0/2 chi'^2_2(4 / n0).
    let p_fa = (-t / n0).exp();
    let p_miss = noncentral_chi2_2dof_cdf(2.0 * t / n0, 2.0 * 2.0 / n0);
    let analytic = 0.5 * (p_fa + p_miss);
    let sigma = (analytic * (1.0 - analytic) / r.bits as f64).sqrt();
    let dev = (r.ber() - analytic).abs() / sigma;
    ensure(
        dev <= 3.0,
        format!(
            "ED BER {:.4e} vs analytic {analytic:.4e} ({dev:.2} sigma)",
            r.ber()
        ),
    )?;
    Ok(format!(
        "ML = brute force 100/100; ED BER {:.4e} vs analytic {analytic:.4e} ({dev:.2} sigma, {} bits)",
        r.ber(),
        r.bits
    ))
}

fn c8_bch() -> Check {
    let code = BchCode::with_k(45).map_err(err)?;
    ensure(code.t() == 3, "BCH(63,45) should have t = 3")?;
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let msg = bits::random(&mut rng, 45);
    let cw = code.encode(&msg).map_err(err)?;
    let check = |flips: &[usize]| -> bool {
        let mut r = cw.clone();
        for &p in flips {
            r[p] ^= 1;
        }
        matches!(code.decode(&r), Ok(d) if d.message == msg && d.status == DecodeStatus::Corrected(flips.len()))
    };
    let mut w1 = 0;
    let mut w2 = 0;
    for i in 0..63 {
        w1 += check(&[i]) as usize;
        for j in i + 1..63 {
            w2 += check(&[i, j]) as usize;
        }
    }
    let mut w3 = 0;
    for _ in 0..10_000 {
        w3 += check(&sample(&mut rng, 63, 3).into_vec()) as usize;
    }
    ensure(
        w1 == 63 && w2 == 1953 && w3 == 10_000,
        format!("corrected {w1}/63, {w2}/1953, {w3}/10000"),
    )?;
    Ok("63/63 weight-1, 1953/1953 weight-2, 10000/10000 weight-3".into())
}

fn c9_noiseless() -> Check {
    let fsim = FsimConfig::new(
        build_default_bank(2, 8, 8).map_err(err)?,
        Constellation::qpsk(),
    )
    .map_err(err)?;
    let schemes = vec![
        Scheme::Apm(Constellation::new(ModulationKind::Qam, 64, None).map_err(err)?),
        Scheme::Gsm(GsmConfig::lexicographic(10, 3, Constellation::qpsk()).map_err(err)?),
        Scheme::Fsim(fsim.clone()),
        Scheme::SmxFsim {
            nt: 4,
            cfg: fsim,
            receiver: LinearMode::Zf,
        },
        Scheme::OokEd {
            nt: 8,
            receiver: EdReceiver::PerAntenna(None),
        },
    ];
    let mut parts = Vec::new();
    for s in schemes {
        let name = s.name();
        let mut cfg = RunConfig::new(s, vec![f64::INFINITY], 91);
        cfg.max_bits = 10_000;
        let r = run(&cfg).map_err(err)?[0];
        ensure(
            r.bits >= 10_000 && r.bit_errors == 0,
            format!("{name}: {} errors in {} bits", r.bit_errors, r.bits),
        )?;
        parts.push(format!("{name} 0/{}", r.bits));
    }
    Ok(parts.join(", "))
}

fn c10_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let run_to = |name: &str, serial: bool| -> Result<Vec<u8>, String> {
        let p = dir.path().join(name);
        let mut argv = vec![
            "subthz",
            "ber",
            "--scheme",
            "gsm",
            "--nt",
            "4",
            "--na",
            "2",
            "--mod",
            "qpsk",
            "--channel",
            "rayleigh",
            "--snr",
            "0:3:9",
            "--max-bits",
            "60000",
            "--seed",
            "1234",
            "--out",
        ];
        argv.push(p.to_str().unwrap());
        if serial {
            argv.push("--serial");
            argv.push("true");
        }
        ensure(cli::main_with_args(argv) == 0, "ber run failed")?;
        std::fs::read(&p).map_err(err)
    };
    let a = run_to("a.csv", false)?;
    let b = run_to("b.csv", false)?;
    let c = run_to("c.csv", true)?;
    ensure(a == b, "two parallel runs differ")?;
    ensure(a == c, "serial and parallel runs differ")?;
    ensure(
        String::from_utf8_lossy(&a).lines().count() == 5,
        "expected 4 sweep rows",
    )?;
    Ok(format!("{} bytes identical across 3 runs", a.len()))
}

fn c11_ed_mimo_coding() -> Check {
    let mut geom = LosMimoGeometry::rayleigh(
        CARRIER_HZ,
        2,
        2,
        5.0,
        AntennaPattern::d_band_transmitarray(),
    );
    geom.tx_spacing_m = 0.3;
    geom.rx_spacing_m = 0.3;
    let noise_dbm = -174.0 + 90.0 + 10.0;
    let sweep = |code: Option<BchCode>, points: Vec<f64>| -> Result<Vec<f64>, String> {
        let mut cfg = RunConfig::new(
            Scheme::OokEd {
                nt: 2,
                receiver: EdReceiver::PerAntenna(None),
            },
            points,
            111,
        );
        cfg.channel = ChannelKind::Los(geom);
        cfg.axis = SweepAxis::TxPowerDbm { noise_dbm };
        cfg.code = code;
        cfg.frame_periods = 2016;
        cfg.max_bits = 2_000_000;
        cfg.max_errors = 2_000;
        Ok(run(&cfg).map_err(err)?.iter().map(|r| r.ber()).collect())
    };
    let powers: Vec<f64> = (0..=5).map(|i| -46.0 + 2.0 * i as f64).collect();
    let coded = sweep(Some(BchCode::with_k(45).map_err(err)?), powers.clone())?;
    let monotone = coded
        .windows(2)
        .all(|w| w[1] < w[0] || (w[1] == 0.0 && w[0] == 0.0));
    ensure(
        coded[0] > 0.0 && monotone,
        format!("coded BER not decreasing: {coded:?}"),
    )?;
    let matched = -40.0;
    let uncoded = sweep(None, vec![matched])?[0];
    let at = coded[powers.iter().position(|&p| p == matched).unwrap()];
    ensure(
        at * 10.0 <= uncoded,
        format!("at {matched} dBm coded {at:.3e} vs uncoded {uncoded:.3e}"),
    )?;
    Ok(format!(
        "BCH(63,45) BER over -46..-36 dBm: {}; at {matched} dBm coded {at:.2e} vs uncoded {uncoded:.2e}",
        coded.iter().map(|b| format!("{b:.1e}")).collect::<Vec<_>>().join(" ")
    ))
}

fn main() {
    let criteria: [(&str, &str, Duration, fn() -> Check); 11] = [
        (
            "1",
            "SE arithmetic",
            Duration::from_secs(1),
            c1_se_arithmetic,
        ),
        (
            "2",
            "Throughput reproduction",
            Duration::from_secs(1),
            c2_throughput,
        ),
        ("3", "SE ceilings", Duration::from_secs(1), c3_ceilings),
        ("4", "Link budget", Duration::from_secs(1), c4_link_budget),
        (
            "5",
            "Phase-noise model",
            Duration::from_secs(5),
            c5_phase_noise,
        ),
        (
            "6",
            "PN ceiling property",
            Duration::from_secs(120),
            c6_pn_floor,
        ),
        (
            "7",
            "Detection oracles",
            Duration::from_secs(60),
            c7_detection_oracles,
        ),
        ("8", "BCH correction", Duration::from_secs(30), c8_bch),
        (
            "9",
            "Noiseless roundtrips",
            Duration::from_secs(60),
            c9_noiseless,
        ),
        (
            "10",
            "Determinism",
            Duration::from_secs(60),
            c10_determinism,
        ),
        (
            "11",
            "Coded ED-MIMO property",
            Duration::from_secs(300),
            c11_ed_mimo_coding,
        ),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.1?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        failed += (!pass) as usize;
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.2} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
