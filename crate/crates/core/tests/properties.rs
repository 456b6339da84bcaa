use agibtc::hermitian::CodeId;
use agibtc::ibtc::{resolve_profile_for, Interleaver, ProfileEntry, RepetitionMap, Validation};
use agibtc::modem::bits_to_symbol_reliability;
use agibtc::siso::SymbolReliability;
use agibtc::{AgCode, Gf16};
use proptest::prelude::*;
use std::sync::OnceLock;

fn ag49() -> &'static AgCode {
    static C: OnceLock<AgCode> = OnceLock::new();
    C.get_or_init(|| CodeId::Ag64_49.build())
}

fn ag44() -> &'static AgCode {
    static C: OnceLock<AgCode> = OnceLock::new();
    C.get_or_init(|| CodeId::Ag64_44.build())
}

fn symbols(n: usize) -> impl Strategy<Value = Vec<Gf16>> {
    prop::collection::vec((0u8..16).prop_map(Gf16::new), n)
}

proptest! {
    #[test]
    fn power_laws(a in 1u8..16, e in -60i64..60, f in -60i64..60) {
        let a = Gf16::new(a);
        prop_assert_eq!(a.pow(e + f).unwrap(), a.pow(e).unwrap() * a.pow(f).unwrap());
        prop_assert_eq!(a.pow(e).unwrap(), a.pow(e.rem_euclid(15)).unwrap());
    }

    #[test]
    fn encode_is_systematic_and_linear(u in symbols(44), v in symbols(44), a in 0u8..16) {
        let code = ag44();
        let a = Gf16::new(a);
        let w: Vec<Gf16> = u.iter().zip(&v).map(|(&x, &y)| a * x + y).collect();
        let (cu, cv, cw) = (code.encode(&u).unwrap(), code.encode(&v).unwrap(), code.encode(&w).unwrap());
        prop_assert_eq!(code.extract_info(&cu), u);
        for i in 0..64 {
            prop_assert_eq!(cw[i], a * cu[i] + cv[i]);
        }
    }

    #[test]
    fn corrects_up_to_radius(
        u in symbols(44),
        errs in prop::collection::btree_map(0usize..64, 1u8..16, 0..=4),
    ) {
        let code = ag44();
        let c = code.encode(&u).unwrap();
        let mut r = c.0.clone();
        for (&p, &e) in &errs {
            r[p] = r[p] + Gf16::new(e);
        }
        prop_assert_eq!(code.hard_decode(&r).unwrap(), c);
    }

    #[test]
    fn single_errors_corrected_by_ag64_49(u in symbols(49), p in 0usize..64, e in 1u8..16) {
        let code = ag49();
        let c = code.encode(&u).unwrap();
        let mut r = c.0.clone();
        r[p] = r[p] + Gf16::new(e);
        prop_assert_eq!(code.hard_decode(&r).unwrap(), c);
    }

    #[test]
    fn interleaver_is_a_bijection(len in 1usize..3000, seed: u64, frame in 0u64..1000) {
        let il = Interleaver::for_frame(len, seed, frame);
        let data: Vec<usize> = (0..len).collect();
        let mixed = il.interleave(&data);
        let mut sorted = mixed.clone();
        sorted.sort_unstable();
        prop_assert_eq!(&sorted, &data);
        prop_assert_eq!(il.deinterleave(&mixed), data);
        prop_assert_eq!(Interleaver::for_frame(len, seed, frame), il);
    }

    #[test]
    fn reliabilities_are_normalized(raw in prop::array::uniform16(-1e3f64..1e3)) {
        let r = SymbolReliability::from_loglik(raw);
        let l = r.as_array();
        prop_assert!(l.iter().all(|&x| (-50.0..=0.0).contains(&x)));
        let best = r.best();
        prop_assert_eq!(l[best.index()], 0.0);
        // Ties go to the smallest value.
        prop_assert!(l[..best.index()].iter().all(|&x| x < 0.0));
        prop_assert!(r.margin() >= 0.0);
    }

    #[test]
    fn bit_llrs_combine_additively(llr in prop::array::uniform4(-12f64..12.0)) {
        let r = bits_to_symbol_reliability(&llr);
        let raw = |v: u8| -(0..4).filter(|i| v >> (3 - i) & 1 == 1).map(|i| llr[i]).sum::<f64>();
        for a in 0u8..16 {
            for b in 0u8..16 {
                let d = r.loglik(Gf16::new(a)) - r.loglik(Gf16::new(b));
                prop_assert!((d - (raw(a) - raw(b))).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn resolved_profiles_satisfy_frame_identities(
        kt in 44usize..3000,
        two in 0.75f64..0.95,
        high in 3usize..10,
        use49: bool,
    ) {
        let (n, k) = if use49 { (64, 49) } else { (64, 44) };
        let shares = [ProfileEntry::new(2, two), ProfileEntry::new(high, 1.0 - two)];
        if let Ok((profile, l)) = resolve_profile_for(&shares, kt, n, k, Validation::Relaxed) {
            prop_assert_eq!(profile.counts.iter().sum::<usize>(), kt);
            let ht: usize = profile.entries.iter().zip(&profile.counts).map(|(e, &f)| e.degree * f).sum();
            prop_assert_eq!(ht, l.ht);
            prop_assert_eq!(l.ht % k, 0);
            prop_assert_eq!(l.pt, l.ht / k * (n - k));
            prop_assert_eq!(l.nt, kt + l.pt);
            let map = RepetitionMap::new(&profile);
            prop_assert_eq!(map.source.len(), ht);
            for (i, copies) in map.copies.iter().enumerate() {
                prop_assert!(copies.len() >= 2);
                prop_assert!(copies.iter().all(|&c| map.source[c] == i));
            }
        }
    }
}
