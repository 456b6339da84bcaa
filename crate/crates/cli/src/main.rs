//! `agibtc` command-line driver.

mod config;
mod manifest;
mod plot;
mod table;

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agibtc::btc::{decode_product, encode_product};
use agibtc::hermitian::CodeId;
use agibtc::ibtc::{decode_frame, DecoderState, IbtcCodec, Interleaver, Validation};
use agibtc::sim::{default_kt, default_profile, gain_at_ber, crossing, Simulator, CSV_HEADER, CSV_SCHEMA_VERSION};
use agibtc::siso::{ChaseConfig, SymbolReliability, Q};
use agibtc::{AgCode, Gf16};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::{parse_profile, Precision, RunConfig};
use manifest::{CompareManifest, CurveSummary, Outputs, PointSummary, RunManifest};

#[derive(Parser)]
#[command(name = "agibtc", version, about = "Hermitian AG block turbo code laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodingScheme {
    /// A single AG(64,k) codeword.
    Ag,
    /// Irregular block turbo frame.
    Ibtc,
    /// Regular product block.
    Btc,
}

#[derive(clap::Args)]
struct CodecArgs {
    /// Component code: ag64_49 or ag64_44.
    #[arg(long, default_value = "ag64_49")]
    code: String,
    #[arg(long, value_enum, default_value = "ag")]
    scheme: CodingScheme,
    /// IBTC degree profile as degree:share pairs, e.g. 2:0.85,3:0.10,9:0.05.
    #[arg(long)]
    profile: Option<String>,
    /// IBTC information symbols per frame.
    #[arg(long)]
    kt: Option<usize>,
    /// Master seed of the IBTC interleaver.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frame index selecting the IBTC interleaver.
    #[arg(long, default_value_t = 0)]
    frame: u64,
    /// Accept IBTC profiles outside the usual bounds.
    #[arg(long)]
    relaxed: bool,
    /// Hex symbols (one digit per GF(16) symbol, whitespace ignored); `-` reads stdin.
    symbols: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameters of a component code.
    CodeInfo {
        /// ag64_49 or ag64_44.
        code: String,
    },
    /// Encode hex information symbols.
    Encode(CodecArgs),
    /// Decode hex received symbols (hard input).
    Decode {
        #[command(flatten)]
        codec: CodecArgs,
        /// Log-likelihood gap given to each received symbol.
        #[arg(long, default_value_t = 4.0)]
        confidence: f64,
        #[arg(long, default_value_t = 8)]
        iterations: usize,
    },
    /// Run a BER sweep and write CSV plus manifest.
    Simulate(SimulateArgs),
    /// Plot one or more result CSVs as an SVG.
    Plot {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
        /// Curve labels in CSV order; defaults to the file stems.
        #[arg(long)]
        label: Vec<String>,
        #[arg(long, default_value = "BER over Rayleigh fast fading")]
        title: String,
    },
    /// Coding gain of curve A over curve B at a target BER.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        target: f64,
        /// Also write a JSON report here.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Config file of `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output; the manifest goes next to it as `<stem>.manifest.json`.
    #[arg(long, short, default_value = "results.csv")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    kt: Option<String>,
    #[arg(long)]
    modulation: Option<String>,
    #[arg(long)]
    demapper: Option<String>,
    #[arg(long)]
    ebn0_start: Option<String>,
    #[arg(long)]
    ebn0_stop: Option<String>,
    #[arg(long)]
    ebn0_step: Option<String>,
    #[arg(long)]
    iterations: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    min_bit_errors: Option<String>,
    #[arg(long)]
    max_frames: Option<String>,
    #[arg(long)]
    max_seconds: Option<String>,
    #[arg(long)]
    precision: Option<String>,
    /// Any config key, as `key=value`; repeatable and applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Suppress per-point progress on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn parse_code(s: &str) -> Result<CodeId> {
    s.parse::<CodeId>().map_err(|e| anyhow!("{e}"))
}

fn parse_hex(text: &str) -> Result<Vec<Gf16>> {
    let raw = if text == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        text.to_string()
    };
    raw.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| {
            c.to_digit(16)
                .map(|d| Gf16::new(d as u8))
                .ok_or_else(|| anyhow!("symbol {i}: `{c}` is not a hex digit"))
        })
        .collect()
}

fn hex(symbols: &[Gf16]) -> String {
    symbols.iter().map(|s| format!("{:x}", s.value())).collect()
}

fn want_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want {
        bail!("expected {want} symbols for {what}, got {got}");
    }
    Ok(())
}

fn soft_from_hard(word: &[Gf16], confidence: f64) -> Vec<SymbolReliability<f64>> {
    word.iter()
        .map(|&v| {
            let mut l = [-confidence; Q];
            l[v.index()] = 0.0;
            SymbolReliability::from_loglik(l)
        })
        .collect()
}

fn ibtc_codec<'a>(code: &'a AgCode, id: CodeId, args: &CodecArgs) -> Result<IbtcCodec<'a>> {
    let profile = match &args.profile {
        Some(p) => parse_profile(p).map_err(|e| anyhow!("--profile: {e}"))?,
        None => default_profile(id),
    };
    let kt = args.kt.unwrap_or_else(|| default_kt(id));
    let validation = if args.relaxed { Validation::Relaxed } else { Validation::Strict };
    Ok(IbtcCodec::new(code, &profile, kt, validation)?)
}

fn cmd_code_info(code: &str) -> Result<()> {
    let id = parse_code(code)?;
    let c = id.build();
    let rate = agibtc::btc::product_rate(&c);
    println!("code          {id}");
    println!("n             {}", c.n);
    println!("k             {}", c.k);
    println!("m             {}", c.m);
    println!("g             {}", c.genus());
    println!("d*            {}", c.designed_distance);
    println!("t             {}", c.radius());
    println!("rate          {}/{} = {:.4}", c.k, c.n, c.k as f64 / c.n as f64);
    println!("btc rate      {} = {:.4}", rate, *rate.numer() as f64 / *rate.denom() as f64);
    let info: Vec<String> = c.info_positions.iter().map(|p| p.to_string()).collect();
    println!("info          {}", info.join(" "));
    Ok(())
}

fn cmd_encode(args: &CodecArgs) -> Result<()> {
    let id = parse_code(&args.code)?;
    let code = id.build();
    let info = parse_hex(&args.symbols)?;
    let out = match args.scheme {
        CodingScheme::Ag => {
            want_len(info.len(), code.k, "one codeword")?;
            code.encode(&info)?.0
        }
        CodingScheme::Ibtc => {
            let codec = ibtc_codec(&code, id, args)?;
            want_len(info.len(), codec.layout.kt, "an IBTC frame")?;
            let il = Interleaver::for_frame(codec.layout.ht, args.seed, args.frame);
            codec.encode(&info, &il)?.symbols()
        }
        CodingScheme::Btc => {
            want_len(info.len(), code.k * code.k, "a product block")?;
            encode_product(&code, &info)?.grid
        }
    };
    println!("{}", hex(&out));
    Ok(())
}

fn cmd_decode(args: &CodecArgs, confidence: f64, iterations: usize) -> Result<()> {
    if !(confidence > 0.0) {
        bail!("--confidence must be positive");
    }
    let id = parse_code(&args.code)?;
    let code = id.build();
    let rx = parse_hex(&args.symbols)?;
    let cfg = ChaseConfig::default();
    match args.scheme {
        CodingScheme::Ag => {
            want_len(rx.len(), code.n, "one codeword")?;
            let word = code.hard_decode(&rx).map_err(|e| anyhow!("decoding failed: {e}"))?;
            let fixed = word.iter().zip(&rx).filter(|(a, b)| a != b).count();
            eprintln!("corrected {fixed} symbol(s)");
            println!("{}", hex(&word));
        }
        CodingScheme::Ibtc => {
            let codec = ibtc_codec(&code, id, args)?;
            let l = codec.layout;
            want_len(rx.len(), l.nt, "an IBTC frame")?;
            let soft = soft_from_hard(&rx, confidence);
            let il = Interleaver::for_frame(l.ht, args.seed, args.frame);
            let mut state = DecoderState::new(&codec, soft[..l.kt].to_vec(), soft[l.kt..].to_vec())?;
            let out = decode_frame(&mut state, &codec, &il, &cfg, iterations.max(1), true);
            eprintln!("iterations {} chase failures {}", out.iterations.len(), out.chase_failures());
            println!("{}", hex(&out.info));
        }
        CodingScheme::Btc => {
            want_len(rx.len(), code.n * code.n, "a product block")?;
            let soft = soft_from_hard(&rx, confidence);
            let out = decode_product(&soft, &code, &cfg, iterations.max(1), true)?;
            eprintln!("iterations {} chase failures {}", out.iterations.len(), out.chase_failures());
            println!("{}", hex(&out.info));
        }
    }
    Ok(())
}

fn manifest_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map_or_else(|| "results".into(), |s| s.to_string_lossy().into_owned());
    csv.with_file_name(format!("{stem}.manifest.json"))
}

fn resolve_run(args: &SimulateArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::parse_text(&text).map_err(|e| anyhow!("{}: {e}", p.display()))?
        }
        None => RunConfig::default(),
    };
    let flags = [
        ("seed", &args.seed),
        ("scheme", &args.scheme),
        ("code", &args.code),
        ("profile", &args.profile),
        ("kt", &args.kt),
        ("modulation", &args.modulation),
        ("demapper", &args.demapper),
        ("ebn0.start", &args.ebn0_start),
        ("ebn0.stop", &args.ebn0_stop),
        ("ebn0.step", &args.ebn0_step),
        ("iterations", &args.iterations),
        ("workers", &args.workers),
        ("stop.min_bit_errors", &args.min_bit_errors),
        ("stop.max_frames", &args.max_frames),
        ("stop.max_seconds", &args.max_seconds),
        ("precision", &args.precision),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|e| anyhow!("flag for key `{key}`: {e}"))?;
        }
    }
    for item in &args.set {
        let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("--set `{item}` is not key=value"))?;
        cfg.set(k, v).map_err(|e| anyhow!("--set key `{}`: {e}", k.trim()))?;
    }
    cfg.finish().map_err(|e| anyhow!("{e}"))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let run = resolve_run(args)?;
    let sim = Simulator::new(run.sim.clone())?;
    let quiet = args.quiet;
    let progress = |r: &agibtc::sim::PointResult| {
        if !quiet {
            eprintln!(
                "ebn0 {:>6} dB  ber {:.3e}  frames {}  bit errors {}",
                r.ebn0_db, r.ber, r.frames, r.bit_errors
            );
        }
    };
    let result = match run.precision {
        Precision::F64 => sim.run_sweep::<f64>(progress)?,
        Precision::F32 => sim.run_sweep::<f32>(progress)?,
    };
    std::fs::write(&args.out, result.to_csv()).with_context(|| format!("writing {}", args.out.display()))?;

    let mpath = manifest_path(&args.out);
    let bits_per_frame = (sim.info_symbols() * agibtc::modem::BITS_PER_FIELD_SYMBOL) as f64;
    let m = RunManifest {
        tool: "agibtc",
        version: manifest::VERSION,
        csv_schema_version: CSV_SCHEMA_VERSION,
        csv_header: CSV_HEADER,
        seed: run.sim.seed,
        timestamp_unix: manifest::now_unix(),
        precision: run.precision.name(),
        code_rate: sim.rate(),
        nominal_complexity_per_bit: sim.nominal_complexity() as f64 / bits_per_frame,
        config_text: run.to_text(),
        config: run.sim.clone(),
        outputs: Outputs {
            csv: args.out.display().to_string(),
            manifest: mpath.display().to_string(),
        },
        points: result.rows.iter().map(PointSummary::from).collect(),
    };
    std::fs::write(&mpath, serde_json::to_string_pretty(&m)? + "\n").with_context(|| format!("writing {}", mpath.display()))?;
    if !quiet {
        eprintln!("wrote {} and {}", args.out.display(), mpath.display());
    }
    Ok(())
}

fn cmd_plot(csv: &[PathBuf], out: &Path, labels: &[String], title: &str) -> Result<()> {
    if labels.len() > csv.len() {
        bail!("{} labels given for {} CSV files", labels.len(), csv.len());
    }
    let mut series = Vec::new();
    for (i, path) in csv.iter().enumerate() {
        let rows = table::read(path)?;
        let label = labels.get(i).cloned().unwrap_or_else(|| {
            path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
        });
        series.push(plot::Series { label, rows });
    }
    std::fs::write(out, plot::render(&series, title)).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn cmd_compare(a: &Path, b: &Path, target: f64, manifest_out: Option<&Path>) -> Result<()> {
    let (ra, rb) = (table::read(a)?, table::read(b)?);
    let (ca, cb) = (table::curve(&ra), table::curve(&rb));
    let xa = crossing(&ca, target).map_err(|e| anyhow!("{}: {e}", a.display()))?;
    let xb = crossing(&cb, target).map_err(|e| anyhow!("{}: {e}", b.display()))?;
    let gain = gain_at_ber(&ca, &cb, target)?;
    let (wa, wb) = (table::pooled_complexity_per_bit(&ra), table::pooled_complexity_per_bit(&rb));
    println!("target BER            {target:e}");
    println!("A {:<20} {xa:.3} dB   complexity/bit {wa:.4}", a.display());
    println!("B {:<20} {xb:.3} dB   complexity/bit {wb:.4}", b.display());
    println!("gain of A over B      {gain:+.3} dB");
    let ratio = if wb > 0.0 { wa / wb } else { f64::NAN };
    if ratio.is_finite() {
        println!("complexity A/B        {ratio:.4}");
    }
    if let Some(p) = manifest_out {
        let m = CompareManifest {
            tool: "agibtc",
            version: manifest::VERSION,
            csv_schema_version: CSV_SCHEMA_VERSION,
            timestamp_unix: manifest::now_unix(),
            target_ber: target,
            gain_db: gain,
            a: CurveSummary {
                path: a.display().to_string(),
                crossing_db: xa,
                complexity_per_bit: wa,
            },
            b: CurveSummary {
                path: b.display().to_string(),
                crossing_db: xb,
                complexity_per_bit: wb,
            },
            complexity_ratio: ratio,
        };
        std::fs::write(p, serde_json::to_string_pretty(&m)? + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::CodeInfo { code } => cmd_code_info(code),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode {
            codec,
            confidence,
            iterations,
        } => cmd_decode(codec, *confidence, *iterations),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Plot { csv, out, label, title } => cmd_plot(csv, out, label, title),
        Command::Compare { a, b, target, manifest } => cmd_compare(a, b, *target, manifest.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
