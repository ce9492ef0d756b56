use proptest::prelude::*;
use subthz::bits;
use subthz::indexmod::{build_default_bank, fsim_modulate, gsm_map, GsmConfig};
use subthz::linkplan::{se_from_snr, SeCurve};
use subthz::modem::{default_rrc, shape, Constellation, ModulationKind};
use subthz::Complex64;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)),
        len,
    )
}

fn constellation() -> impl Strategy<Value = Constellation> {
    prop_oneof![
        Just(Constellation::bpsk()),
        Just(Constellation::qpsk()),
        Just(Constellation::ook()),
        (3usize..6).prop_map(|e| Constellation::new(ModulationKind::Psk, 1 << e, None).unwrap()),
        (1usize..4)
            .prop_map(|e| Constellation::new(ModulationKind::Qam, 1 << (2 * e), None).unwrap()),
        Just(Constellation::new(ModulationKind::Polar, 16, Some(2)).unwrap()),
        Just(Constellation::new(ModulationKind::Polar, 64, Some(16)).unwrap()),
    ]
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-9)
}

proptest! {
    #[test]
    fn pulse_shaping_is_linear(a in complex_vec(12), b in complex_vec(12), k in -3.0f64..3.0) {
        let f = default_rrc();
        let mixed: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * k + y).collect();
        let lhs = shape(&mixed, &f).samples;
        let sa = shape(&a, &f).samples;
        let sb = shape(&b, &f).samples;
        let rhs: Vec<Complex64> = sa.iter().zip(&sb).map(|(x, y)| x * k + y).collect();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn fsim_modulation_is_linear_in_symbols(
        idx in prop::collection::vec(0usize..4, 10),
        a in complex_vec(10),
        b in complex_vec(10),
    ) {
        let bank = build_default_bank(4, 8, 8).unwrap();
        let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = fsim_modulate(&idx, &sum, &bank).unwrap().samples;
        let wa = fsim_modulate(&idx, &a, &bank).unwrap().samples;
        let wb = fsim_modulate(&idx, &b, &bank).unwrap().samples;
        let rhs: Vec<Complex64> = wa.iter().zip(&wb).map(|(x, y)| x + y).collect();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn mapper_is_bijective(c in constellation(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = bits::random(&mut rng, c.bits_per_symbol() * 40);
        let x = c.map_bits(&b).unwrap();
        prop_assert_eq!(c.demap_hard(&x), b);
        for (label, p) in c.points().iter().enumerate() {
            prop_assert_eq!(c.decide(*p), label);
        }
    }

    #[test]
    fn gsm_mapper_is_bijective(nt in 2usize..7, na in 1usize..3, seed in any::<u64>()) {
        prop_assume!(na < nt);
        use rand::SeedableRng;
        let cfg = GsmConfig::lexicographic(nt, na, Constellation::qpsk()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = bits::random(&mut rng, cfg.bits_per_symbol() * 8);
        let syms = gsm_map(&cfg, &b).unwrap();
        let mut back = Vec::new();
        for s in &syms {
            let p = cfg.pattern_of(s.combination, &s.labels);
            bits::push_index(p, cfg.bits_per_symbol(), &mut back);
        }
        prop_assert_eq!(back, b);
    }

    #[test]
    fn se_is_monotone_and_bounded(a in -40.0f64..80.0, b in -40.0f64..80.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for curve in [SeCurve::no_pn(), SeCurve::strong_pn_qam(), SeCurve::strong_pn_polar()] {
            let (x, y) = (se_from_snr(&curve, lo), se_from_snr(&curve, hi));
            prop_assert!(x <= y);
            prop_assert!(y <= curve.ceiling() && x >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bch_is_linear_and_corrects_up_to_t(
        t in 1usize..8,
        a in prop::collection::vec(0u8..2, 63),
        b in prop::collection::vec(0u8..2, 63),
        flips in prop::collection::btree_set(0usize..63, 0..8),
    ) {
        use subthz::fec::{BchCode, DecodeStatus};
        let code = BchCode::with_t(t).unwrap();
        let (ma, mb) = (&a[..code.k()], &b[..code.k()]);
        let sum: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x ^ y).collect();
        let ca = code.encode(ma).unwrap();
        let cb = code.encode(mb).unwrap();
        let cs: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(code.encode(&sum).unwrap(), cs);

        let mut rx = ca.clone();
        for &i in &flips {
            rx[i] ^= 1;
        }
        let out = code.decode(&rx).unwrap();
        if flips.len() <= t {
            prop_assert_eq!(out.status, DecodeStatus::Corrected(flips.len()));
            prop_assert_eq!(&out.message[..], ma);
        }
    }
}
