use agibtc::galois::{add, build_field, inv, mul, pow, Gf16};
use agibtc::hermitian::{enumerate_points, monomials_up_to, CodeId, DecodeFailure, GENUS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_info(rng: &mut ChaCha8Rng, k: usize) -> Vec<Gf16> {
    (0..k).map(|_| Gf16::new(rng.random_range(0..16u8))).collect()
}

#[test]
fn field_tables_round_trip() {
    let f = build_field();
    assert_eq!(f.primitive_poly, 0b1_0011);
    for v in Gf16::nonzero() {
        let l = f.log_table[v.index()];
        assert_eq!(f.exp_table[l as usize], v);
    }
    assert_eq!(Gf16::exp(15), Gf16::ONE);
}

#[test]
fn element_orders_divide_fifteen() {
    for a in Gf16::nonzero() {
        let order = (1..=15).find(|&e| a.powu(e) == Gf16::ONE).unwrap();
        assert_eq!(15 % order, 0, "{a}");
        assert_eq!(pow(a, 15).unwrap(), Gf16::ONE);
        assert_eq!(pow(a, -1).unwrap(), inv(a).unwrap());
    }
    assert!(pow(Gf16::ZERO, -2).is_err());
    assert_eq!(pow(Gf16::ZERO, 3).unwrap(), Gf16::ZERO);
}

#[test]
fn field_axioms_over_all_pairs() {
    for a in Gf16::all() {
        assert_eq!(add(a, a), Gf16::ZERO);
        assert_eq!(mul(a, Gf16::ONE), a);
        assert_eq!(mul(a, Gf16::ZERO), Gf16::ZERO);
        for b in Gf16::all() {
            assert_eq!(add(a, b), add(b, a));
            assert_eq!(mul(a, b), mul(b, a));
            if a != Gf16::ZERO && b != Gf16::ZERO {
                assert_ne!(mul(a, b), Gf16::ZERO);
            }
        }
    }
}

#[test]
fn points_satisfy_curve_and_are_sorted() {
    let c = enumerate_points();
    assert_eq!(c.len(), 64);
    let key = |(x, y): (Gf16, Gf16)| (x.value(), y.value());
    assert!(c.points.windows(2).all(|w| key(w[0]) < key(w[1])));
    for &(x, y) in &c.points {
        assert_eq!(y.powu(4) + y, x.powu(5));
    }
    // Every x has exactly four y.
    for x in Gf16::all() {
        assert_eq!(c.points.iter().filter(|p| p.0 == x).count(), 4);
    }
}

#[test]
fn riemann_roch_counts() {
    for m in (2 * GENUS as u32 - 1)..64 {
        assert_eq!(monomials_up_to(m).len(), m as usize - GENUS + 1, "m = {m}");
    }
}

#[test]
fn systematic_encoding_recovers_info() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in [CodeId::Ag64_49, CodeId::Ag64_44] {
        let code = id.build();
        for _ in 0..1000 {
            let u = random_info(&mut rng, code.k);
            let c = code.encode(&u).unwrap();
            assert!(code.is_codeword(&c));
            assert_eq!(code.extract_info(&c), u);
        }
    }
}

#[test]
fn encoding_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let code = CodeId::Ag64_44.build();
    for _ in 0..100 {
        let (u, v) = (random_info(&mut rng, code.k), random_info(&mut rng, code.k));
        let a = Gf16::new(rng.random_range(1..16u8));
        let w: Vec<Gf16> = u.iter().zip(&v).map(|(&x, &y)| a * x + y).collect();
        let (cu, cv, cw) = (code.encode(&u).unwrap(), code.encode(&v).unwrap(), code.encode(&w).unwrap());
        for i in 0..64 {
            assert_eq!(cw[i], a * cu[i] + cv[i]);
        }
    }
}

#[test]
fn hard_decode_output_is_always_a_codeword() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for id in [CodeId::Ag64_49, CodeId::Ag64_44] {
        let code = id.build();
        let (mut ok, mut failed) = (0, 0);
        for trial in 0..2000 {
            let c = code.encode(&random_info(&mut rng, code.k)).unwrap();
            let mut r = c.0.clone();
            let errors = 1 + trial % 12;
            for _ in 0..errors {
                let p = rng.random_range(0..64);
                r[p] = r[p] + Gf16::new(rng.random_range(1..16u8));
            }
            match code.hard_decode(&r) {
                Ok(d) => {
                    ok += 1;
                    let again = code.encode(&code.extract_info(&d)).unwrap();
                    assert_eq!(again, d);
                    let dist = d.iter().zip(&r).filter(|(a, b)| a != b).count();
                    assert!(dist <= code.unique_radius());
                }
                Err(e) => {
                    failed += 1;
                    assert!(matches!(e, DecodeFailure::NoLocator | DecodeFailure::Unsolvable | DecodeFailure::BeyondRadius));
                }
            }
        }
        assert!(ok > 0 && failed > 0);
    }
}

#[test]
fn every_double_error_is_corrected_by_ag64_44_sample() {
    let code = CodeId::Ag64_44.build();
    let c = code.encode(&(0..44).map(|i| Gf16::new((i * 5 % 16) as u8)).collect::<Vec<_>>()).unwrap();
    for p in 0..64 {
        for q in (p + 1..64).step_by(7) {
            let mut r = c.0.clone();
            r[p] = r[p] + Gf16::new(3);
            r[q] = r[q] + Gf16::new(((p + q) % 15 + 1) as u8);
            assert_eq!(code.hard_decode(&r).unwrap(), c, "positions {p}, {q}");
        }
    }
}

#[test]
fn minimum_weight_sample_respects_designed_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for id in [CodeId::Ag64_49, CodeId::Ag64_44] {
        let code = id.build();
        // Sparse info vectors give the lightest codewords.
        for _ in 0..2000 {
            let mut u = vec![Gf16::ZERO; code.k];
            for _ in 0..rng.random_range(1..4) {
                u[rng.random_range(0..code.k)] = Gf16::new(rng.random_range(1..16u8));
            }
            if u.iter().all(|&s| s == Gf16::ZERO) {
                continue;
            }
            assert!(code.encode(&u).unwrap().weight() >= code.designed_distance);
        }
    }
}
