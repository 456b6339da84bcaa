use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const HEADER: &str = "ebn0_db,ber,fer,frames,info_bits,bit_errors,frame_errors,mean_iters,chase_failures,complexity";

fn agibtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agibtc")).args(args).output().expect("spawn agibtc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = agibtc(args);
    assert!(o.status.success(), "agibtc {args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in {report}"))
}

#[test]
fn code_info_reports_parameters() {
    let r = ok(&["code-info", "ag64_49"]);
    assert_eq!(field(&r, "k "), "49");
    assert_eq!(field(&r, "d*"), "10");
    assert_eq!(field(&r, "t "), "1");
    assert_eq!(field(&r, "g "), "6");
    let r = ok(&["code-info", "ag64_44"]);
    assert_eq!(field(&r, "k "), "44");
    assert_eq!(field(&r, "d*"), "15");
    assert_eq!(field(&r, "t "), "4");
    assert_eq!(field(&r, "m "), "49");
}

#[test]
fn code_info_rejects_unknown_code() {
    let o = agibtc(&["code-info", "bogus"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bogus"));
    assert!(stdout(&o).is_empty());
}

fn digits(n: usize, salt: usize) -> String {
    (0..n).map(|i| char::from_digit(((i * 7 + salt * 3 + i / 5) % 16) as u32, 16).unwrap()).collect()
}

#[test]
fn ag_encode_decode_round_trip() {
    let info = digits(44, 1);
    let cw = ok(&["encode", "--code", "ag64_44", &info]).trim().to_string();
    assert_eq!(cw.len(), 64);
    let mut bad: Vec<char> = cw.chars().collect();
    for p in [3, 17, 40, 63] {
        bad[p] = if bad[p] == '0' { '9' } else { '0' };
    }
    let bad: String = bad.into_iter().collect();
    let o = agibtc(&["decode", "--code", "ag64_44", &bad]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), cw);
    assert!(stderr(&o).contains("corrected 4"));
}

#[test]
fn malformed_symbols_exit_nonzero() {
    let o = agibtc(&["decode", "--code", "ag64_49", &digits(63, 2)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("expected 64 symbols"));
    let o = agibtc(&["encode", "--code", "ag64_49", "xyz"]);
    assert!(!o.status.success());
}

#[test]
fn ibtc_and_btc_round_trip() {
    let info = digits(980, 3);
    let tx = ok(&["encode", "--scheme", "ibtc", "--seed", "5", "--frame", "2", &info]).trim().to_string();
    assert_eq!(tx.len(), 980 + 735);
    assert!(tx.starts_with(&info));
    let mut rx: Vec<char> = tx.chars().collect();
    rx[10] = if rx[10] == 'a' { 'b' } else { 'a' };
    let rx: String = rx.into_iter().collect();
    let got = ok(&["decode", "--scheme", "ibtc", "--seed", "5", "--frame", "2", &rx]);
    assert_eq!(got.trim(), info);

    let info = digits(44 * 44, 4);
    let grid = ok(&["encode", "--scheme", "btc", "--code", "ag64_44", &info]).trim().to_string();
    assert_eq!(grid.len(), 64 * 64);
    let got = ok(&["decode", "--scheme", "btc", "--code", "ag64_44", &grid]);
    assert_eq!(got.trim(), info);
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn minimal_config_gives_one_row_and_manifest() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "run.cfg",
        "scheme = uncoded\nmodulation = bpsk\nebn0.start = 5\nebn0.stop = 5\nstop.max_frames = 10\nstop.min_bit_errors = none\n",
    );
    let out = path(&dir, "run.csv");
    ok(&["simulate", "--config", &cfg, "-o", &out, "-q"]);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("5,"));
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path(&dir, "run.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["csv_schema_version"], 1);
    assert_eq!(m["csv_header"], HEADER);
    assert_eq!(m["seed"], 1);
    assert_eq!(m["points"][0]["frames"], 10);
    assert!(m["config_text"].as_str().unwrap().contains("scheme = uncoded"));
    assert!(m["version"].is_string());
    assert!(m["timestamp_unix"].as_u64().unwrap() > 0);
}

#[test]
fn manifest_config_text_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.csv");
    ok(&["simulate", "--scheme", "uncoded", "--ebn0-start", "3", "--ebn0-stop", "4", "--max-frames", "4", "--seed", "9", "-o", &a, "-q"]);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path(&dir, "a.manifest.json")).unwrap()).unwrap();
    let cfg = write(&dir, "again.cfg", m["config_text"].as_str().unwrap());
    let b = path(&dir, "b.csv");
    ok(&["simulate", "--config", &cfg, "-o", &b, "-q"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_is_deterministic_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let base = [
        "simulate", "--scheme", "ibtc", "--code", "ag64_49", "--modulation", "16qam", "--ebn0-start", "14", "--ebn0-stop", "15",
        "--iterations", "2", "--max-frames", "6", "--seed", "42", "-q",
    ];
    let run = |name: &str, workers: &str| {
        let out = path(&dir, name);
        let mut args = base.to_vec();
        args.extend(["--workers", workers, "-o", &out]);
        ok(&args);
        std::fs::read(&out).unwrap()
    };
    let first = run("a.csv", "1");
    assert_eq!(first, run("b.csv", "1"));
    assert_eq!(first, run("c.csv", "3"));
}

#[test]
fn bad_config_reports_line_and_key() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.cfg", "scheme = ibtc\n\nchase.p = lots\n");
    let o = agibtc(&["simulate", "--config", &cfg, "-o", &path(&dir, "x.csv")]);
    assert!(!o.status.success());
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("chase.p"), "{e}");

    let cfg = write(&dir, "bad2.cfg", "modulation = 8psk\n");
    let e = stderr(&agibtc(&["simulate", "--config", &cfg, "-o", &path(&dir, "x.csv")]));
    assert!(e.contains("line 1") && e.contains("modulation"), "{e}");

    let o = agibtc(&["simulate", "--set", "nonsense=1", "-o", &path(&dir, "x.csv")]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("nonsense"));

    let o = agibtc(&["simulate", "--ebn0-start", "5", "--ebn0-stop", "1", "-o", &path(&dir, "x.csv")]);
    assert!(!o.status.success());
    assert!(!Path::new(&path(&dir, "x.csv")).exists());
}

fn curve_csv(shift: f64) -> String {
    let mut s = format!("{HEADER}\n");
    for (x, ber) in [(0.0, 1e-1), (2.0, 1e-2), (4.0, 1e-3), (6.0, 1e-4)] {
        let errors = 100u64;
        let bits = (errors as f64 / ber).round() as u64;
        s += &format!("{},{ber:e},1e0,10,{bits},{errors},10,4.000,0,{}\n", x + shift, bits / 2);
    }
    s
}

#[test]
fn plot_draws_one_curve_per_csv() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "ibtc.csv", &curve_csv(0.0));
    let b = write(&dir, "btc.csv", &curve_csv(1.0));
    let svg = path(&dir, "out.svg");
    ok(&["plot", &a, "-o", &svg]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="series""#).count(), 1);
    for d in ["10⁰", "10⁻¹", "10⁻²", "10⁻³", "10⁻⁴", "10⁻⁵", "10⁻⁶"] {
        assert!(text.contains(&format!(">{d}<")));
    }
    ok(&["plot", &a, &b, "-o", &svg, "--label", "AG-IBTC(64,49)", "--label", "AG-BTC(64,49)"]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="series""#).count(), 2);
    assert!(text.contains("AG-IBTC(64,49)") && text.contains("AG-BTC(64,49)"));
    assert!(text.contains(r#"class="whisker""#));
}

#[test]
fn plot_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.csv", &format!("{HEADER}\n"));
    let o = agibtc(&["plot", &empty, "-o", &path(&dir, "e.svg")]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("no data rows"));

    let broken = curve_csv(0.0).replace("2,1e-2", "2,oops");
    let broken = write(&dir, "broken.csv", &broken);
    let o = agibtc(&["plot", &broken, "-o", &path(&dir, "b.svg")]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));
}

#[test]
fn compare_reports_signed_gain() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &curve_csv(0.0));
    let b = write(&dir, "b.csv", &curve_csv(1.0));
    let r = ok(&["compare", &a, &a, "--target", "1e-3"]);
    assert_eq!(field(&r, "gain of A over B"), "+0.000 dB");
    let report = path(&dir, "cmp.json");
    let r = ok(&["compare", &a, &b, "--target", "1e-3", "--manifest", &report]);
    assert_eq!(field(&r, "gain of A over B"), "+1.000 dB");
    let r = ok(&["compare", &b, &a, "--target", "3e-3"]);
    assert_eq!(field(&r, "gain of A over B"), "-1.000 dB");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!((m["gain_db"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((m["a"]["complexity_per_bit"].as_f64().unwrap() - 0.5).abs() < 1e-3);
}

#[test]
fn compare_rejects_unbracketed_target() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &curve_csv(0.0));
    let o = agibtc(&["compare", &a, &a, "--target", "1e-7"]);
    assert!(!o.status.success());
    assert!(!stderr(&o).is_empty());
}
