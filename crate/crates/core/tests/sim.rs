use agibtc::channel::rayleigh_bpsk_ber;
use agibtc::hermitian::CodeId;
use agibtc::modem::Modulation;
use agibtc::sim::{run_point, run_sweep, Scheme, SimConfig, Simulator, StopRule, Sweep};

fn frames(n: u64) -> StopRule {
    StopRule {
        min_bit_errors: None,
        max_frames: Some(n),
        max_seconds: None,
    }
}

#[test]
fn noiseless_points_have_no_errors() {
    for scheme in [Scheme::Ibtc, Scheme::Btc, Scheme::Uncoded] {
        for code in [CodeId::Ag64_49, CodeId::Ag64_44] {
            let mut cfg = SimConfig::for_code(scheme, code, Modulation::Qam64);
            cfg.stop = frames(if scheme == Scheme::Btc { 30 } else { 100 });
            cfg.iterations = 1;
            let r = run_point(&cfg, 60.0).unwrap();
            assert_eq!(r.bit_errors, 0, "{scheme} {code}");
            assert_eq!(r.ber, 0.0);
        }
    }
}

#[test]
fn uncoded_bpsk_at_10db() {
    let mut cfg = SimConfig::for_code(Scheme::Uncoded, CodeId::Ag64_49, Modulation::Bpsk);
    cfg.stop = frames(256);
    let r = run_point(&cfg, 10.0).unwrap();
    let p = rayleigh_bpsk_ber(10.0);
    assert!((p - 0.0233).abs() < 1e-4);
    let sigma = (p * (1.0 - p) / r.info_bits as f64).sqrt();
    assert!((r.ber - p).abs() <= 3.0 * sigma, "{} vs {p}", r.ber);
}

#[test]
fn uncoded_sweep_is_monotone() {
    let mut cfg = SimConfig::for_code(Scheme::Uncoded, CodeId::Ag64_49, Modulation::Qpsk);
    cfg.stop = frames(256);
    cfg.sweep = Sweep { start: 0.0, stop: 12.0, step: 3.0 };
    let res = run_sweep(&cfg, |_| {}).unwrap();
    assert_eq!(res.rows.len(), 5);
    assert!(res.rows[0].info_bits >= 1_000_000);
    let mut inversions = 0;
    for w in res.rows.windows(2) {
        if w[1].ber > w[0].ber {
            inversions += 1;
            assert!(w[1].ber - w[0].ber < w[0].ci95 + w[1].ci95);
        }
    }
    assert!(inversions <= 1);
    // ci shrinks with more bits at the same ber.
    assert!(agibtc::sim::ci95(100, 10_000) > agibtc::sim::ci95(1000, 100_000));
}

#[test]
fn single_point_sweep_equals_run_point() {
    let mut cfg = SimConfig::for_code(Scheme::Ibtc, CodeId::Ag64_44, Modulation::Qam16);
    cfg.stop = frames(8);
    cfg.iterations = 2;
    cfg.sweep = Sweep::single(9.0);
    let mut seen = 0;
    let res = run_sweep(&cfg, |_| seen += 1).unwrap();
    assert_eq!(seen, 1);
    assert_eq!(res.rows, vec![run_point(&cfg, 9.0).unwrap()]);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let mut cfg = SimConfig::for_code(Scheme::Btc, CodeId::Ag64_49, Modulation::Qam64);
    cfg.stop = StopRule { min_bit_errors: Some(50), max_frames: Some(20), max_seconds: None };
    cfg.iterations = 2;
    cfg.sweep = Sweep { start: 18.0, stop: 19.0, step: 1.0 };
    cfg.workers = 1;
    let one = run_sweep(&cfg, |_| {}).unwrap().to_csv();
    cfg.workers = 4;
    let four = run_sweep(&cfg, |_| {}).unwrap().to_csv();
    assert_eq!(one, four);
    assert_eq!(one, run_sweep(&cfg, |_| {}).unwrap().to_csv());
    cfg.seed += 1;
    assert_ne!(one, run_sweep(&cfg, |_| {}).unwrap().to_csv());
}

#[test]
fn bounded_sweep_finishes() {
    let mut cfg = SimConfig::for_code(Scheme::Ibtc, CodeId::Ag64_49, Modulation::Bpsk);
    cfg.stop = frames(10);
    cfg.iterations = 1;
    cfg.sweep = Sweep { start: 0.0, stop: 1.0, step: 1.0 };
    let res = run_sweep(&cfg, |_| {}).unwrap();
    assert!(res.rows.iter().all(|r| r.frames == 10));
}

#[test]
fn ibtc_costs_less_per_bit_than_btc() {
    let per_bit = |scheme| {
        let sim = Simulator::new(SimConfig::for_code(scheme, CodeId::Ag64_49, Modulation::Bpsk)).unwrap();
        sim.nominal_complexity() as f64 / (sim.info_symbols() * 4) as f64
    };
    assert!(per_bit(Scheme::Ibtc) < per_bit(Scheme::Btc));
}
