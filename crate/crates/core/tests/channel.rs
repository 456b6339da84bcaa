use agibtc::channel::{noise_variance, rayleigh_bpsk_ber, transmit, ChannelParams};
use agibtc::modem::{bits_to_symbol_reliability, Constellation, Demapper, Modulation};
use agibtc::seed::{frame_rng, Stream};
use agibtc::Gf16;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 1_000_000;

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn fading(n: usize, seed: u64) -> Vec<Complex<f64>> {
    let x = vec![Complex::new(1.0, 0.0); n];
    transmit::<f64, _>(&x, 0.0, &mut ChaCha8Rng::seed_from_u64(seed)).into_iter().map(|o| o.h).collect()
}

#[test]
fn noise_variance_examples() {
    let n0 = |e, r, b| noise_variance(&ChannelParams { ebn0_db: e, code_rate: r, bits_per_symbol: b }).unwrap();
    assert!((n0(0.0, 1.0, 1) - 1.0).abs() < 1e-15);
    assert!((n0(10.0, 0.5, 2) - 0.1).abs() < 1e-15);
    assert!(n0(300.0, 1.0, 1) < 1e-29);
    assert!(ChannelParams::new(0.0, 0.0, 1).is_err());
    assert!(ChannelParams::new(0.0, 0.5, 0).is_err());
}

#[test]
fn fading_power_is_unit() {
    let h = fading(N, 1);
    let p = h.iter().map(|h| h.norm_sqr()).sum::<f64>() / N as f64;
    assert!((0.995..=1.005).contains(&p), "E|h|^2 = {p}");
}

#[test]
fn fading_magnitude_is_rayleigh() {
    let mut r: Vec<f64> = fading(N, 2).iter().map(|h| h.norm()).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    // CDF of Rayleigh with sigma^2 = 1/2.
    let d = r
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x * x).exp();
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    assert!(d < 1.628 / n.sqrt(), "KS statistic {d}");
}

#[test]
fn fading_is_uncorrelated_between_symbols() {
    let h = fading(N, 3);
    let lag1: Complex<f64> = h.windows(2).map(|w| w[1] * w[0].conj()).sum::<Complex<f64>>() / (N - 1) as f64;
    let power = h.iter().map(|h| h.norm_sqr()).sum::<f64>() / N as f64;
    assert!((lag1 / power).norm() < 0.01, "lag-1 autocorrelation {}", lag1.norm());
}

#[test]
fn transmit_is_reproducible() {
    let x: Vec<Complex<f64>> = (0..1000).map(|i| Complex::new((i % 3) as f64 - 1.0, 0.5)).collect();
    let a = transmit::<f64, _>(&x, 0.3, &mut frame_rng(9, Stream::Channel, 4));
    let b = transmit::<f64, _>(&x, 0.3, &mut frame_rng(9, Stream::Channel, 4));
    assert_eq!(a, b);
    let c = transmit::<f64, _>(&x, 0.3, &mut frame_rng(9, Stream::Channel, 5));
    assert_ne!(a, c);
}

#[test]
fn uncoded_bpsk_matches_closed_form() {
    let c = Constellation::<f64>::new(Modulation::Bpsk);
    for (i, snr_db) in [0.0f64, 5.0, 10.0].into_iter().enumerate() {
        let gamma = 10f64.powf(snr_db / 10.0);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        let bits = random_bits(&mut rng, N);
        let obs = transmit(&c.modulate(&bits), 1.0 / gamma, &mut rng);
        let errors = obs
            .iter()
            .zip(&bits)
            .filter(|(o, &b)| {
                let llr = c.demodulate(o.y, o.h, 1.0 / gamma, Demapper::Exact)[0];
                (llr < 0.0) as u8 != b
            })
            .count() as f64;
        let p = rayleigh_bpsk_ber(gamma);
        let sigma = (p * (1.0 - p) / N as f64).sqrt();
        let ber = errors / N as f64;
        assert!((ber - p).abs() <= 3.0 * sigma, "{snr_db} dB: {ber} vs {p}");
    }
}

#[test]
fn modulated_energy_is_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in Modulation::ALL {
        let c = Constellation::<f64>::new(m);
        let x = c.modulate(&random_bits(&mut rng, N * m.bits_per_symbol()));
        let e = x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((0.99..=1.01).contains(&e), "{m}: {e}");
    }
}

#[test]
fn high_snr_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let h = Complex::new(1.0, 0.0);
    for m in Modulation::ALL {
        let c = Constellation::<f64>::new(m);
        let bps = m.bits_per_symbol();
        let bits = random_bits(&mut rng, 100_000 * bps);
        let x = c.modulate(&bits);
        let noise = rand_distr::Normal::new(0.0, (1e-4f64 / 2.0).sqrt()).unwrap();
        for (s, chunk) in x.iter().zip(bits.chunks(bps)) {
            let y = h * s + Complex::new(rng.sample(noise), rng.sample(noise));
            let llr = c.demodulate(y, h, 1e-4, Demapper::Exact);
            let hard: Vec<u8> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
            assert_eq!(hard, chunk);
        }
    }
}

fn sign_agreement(m: Modulation, fading: bool, rng: &mut ChaCha8Rng) -> f64 {
    let c = Constellation::<f64>::new(m);
    let bps = m.bits_per_symbol();
    let n0 = 1.0 / (bps as f64 * 10.0);
    let x = c.modulate(&random_bits(rng, 60_000 * bps));
    let mut obs = transmit(&x, n0, rng);
    if !fading {
        for (o, s) in obs.iter_mut().zip(&x) {
            o.y = s + (o.y - o.h * s);
            o.h = Complex::new(1.0, 0.0);
        }
    }
    let (mut same, mut total) = (0usize, 0usize);
    for o in &obs {
        let a = c.demodulate(o.y, o.h, n0, Demapper::Exact);
        let b = c.demodulate(o.y, o.h, n0, Demapper::MaxLog);
        same += a.iter().zip(&b).filter(|(x, y)| (**x < 0.0) == (**y < 0.0)).count();
        total += a.len();
    }
    same as f64 / total as f64
}

#[test]
fn exact_and_maxlog_agree_at_10db() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for m in Modulation::ALL {
        let awgn = sign_agreement(m, false, &mut rng);
        assert!(awgn >= 0.999, "{m}: {awgn}");
        // Deep fades put many dense-constellation bits near the boundary.
        let faded = sign_agreement(m, true, &mut rng);
        assert!(faded >= 0.99, "{m} faded: {faded}");
    }
}

#[test]
fn one_hot_bit_llrs_give_one_hot_symbols() {
    for v in Gf16::all() {
        let llrs: Vec<f64> = (0..4).map(|i| if v.value() >> (3 - i) & 1 == 1 { -50.0 } else { 50.0 }).collect();
        let r = bits_to_symbol_reliability(&llrs);
        assert_eq!(r.best(), v);
        assert_eq!(r.loglik(v), 0.0);
        assert!(Gf16::all().filter(|&u| u != v).all(|u| r.loglik(u) <= -50.0));
    }
}
