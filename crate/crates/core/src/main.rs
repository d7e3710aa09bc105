//! `cardseg` command line: `segment`, `synth` and `bench`.
//!
//! Exit status is 0 on success, 1 when processing fails and 2 on usage
//! errors, which include invalid setting values. Every pipeline config key is accepted as `--key-name value`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgMatches, Command};

use cardseg::pipeline::config::{key_help, KEYS};
use cardseg::pipeline::{emit_annotated, emit_json, process_card, PipelineConfig, StageTimings};
use cardseg::raster::{load_image, save_image, ImageFormat};
use cardseg::synth::{corpus_card, CorpusRanges};
use cardseg::{Error, Result};

fn flag(key: &str) -> String {
    key.replace('_', "-")
}

fn with_config_keys(cmd: Command) -> Command {
    let cmd = cmd.arg(
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .value_parser(value_parser!(PathBuf))
            .help("Flat key = value config file, applied before flags"),
    );
    KEYS.iter().fold(cmd, |cmd, key| {
        cmd.arg(
            Arg::new(*key)
                .long(flag(key))
                .value_name("VALUE")
                .help(key_help(key))
                .help_heading("Pipeline settings"),
        )
    })
}

fn cli() -> Command {
    let segment = Command::new("segment")
        .about("Segment one card image into regions, lines and characters")
        .arg(
            Arg::new("input")
                .long("input")
                .required(true)
                .value_name("IMAGE")
                .value_parser(value_parser!(PathBuf))
                .help("PGM or PNG card image"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .required(true)
                .value_name("JSON")
                .value_parser(value_parser!(PathBuf)),
        )
        .arg(
            Arg::new("annotated")
                .long("annotated")
                .value_name("IMAGE")
                .value_parser(value_parser!(PathBuf))
                .help("Write the card with boxes drawn; format follows the extension"),
        );

    let synth = Command::new("synth")
        .about("Write synthetic cards with ground-truth JSON")
        .arg(
            Arg::new("out-dir")
                .long("out-dir")
                .required(true)
                .value_name("DIR")
                .value_parser(value_parser!(PathBuf)),
        )
        .arg(
            Arg::new("count")
                .long("count")
                .default_value("10")
                .value_parser(value_parser!(u64).range(1..)),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .default_value("42")
                .value_parser(value_parser!(u64)),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .default_value("pgm")
                .value_parser(["pgm", "png"]),
        );

    let bench = Command::new("bench")
        .about("Time the pipeline on a generated card and print per-stage medians")
        .arg(
            Arg::new("size")
                .long("size")
                .default_value("3mp")
                .value_name("Nmp|WxH")
                .help("Card size, e.g. 3mp or 2000x1500"),
        )
        .arg(
            Arg::new("repeat")
                .long("repeat")
                .default_value("5")
                .value_parser(value_parser!(u32).range(1..)),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .default_value("42")
                .value_parser(value_parser!(u64)),
        );

    Command::new("cardseg")
        .about("Business card text segmentation")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(with_config_keys(segment))
        .subcommand(synth)
        .subcommand(with_config_keys(bench))
}

fn load_config(m: &ArgMatches) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = m.get_one::<PathBuf>("config") {
        cfg.apply_file(path)?;
    }
    for key in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_segment(m: &ArgMatches) -> Result<()> {
    let mut cfg = load_config(m)?;
    let input = m.get_one::<PathBuf>("input").expect("required");
    let out = m.get_one::<PathBuf>("out").expect("required");
    let annotated = m.get_one::<PathBuf>("annotated").cloned().or_else(|| {
        cfg.emit_annotated
            .then(|| out.with_extension("annotated.pgm"))
    });
    cfg.emit_annotated = annotated.is_some();

    let img = load_image(input)?;
    let result = process_card(&img, &input.to_string_lossy(), &cfg)?;
    emit_json(&result, out)?;
    if let Some(path) = annotated {
        emit_annotated(&result, &img, &path)?;
    }
    Ok(())
}

fn run_synth(m: &ArgMatches) -> Result<()> {
    let dir = m.get_one::<PathBuf>("out-dir").expect("required");
    let count = *m.get_one::<u64>("count").expect("defaulted");
    let seed = *m.get_one::<u64>("seed").expect("defaulted");
    let (ext, format) = match m.get_one::<String>("format").map(String::as_str) {
        Some("png") => ("png", ImageFormat::Png),
        _ => ("pgm", ImageFormat::Pgm),
    };
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let ranges = CorpusRanges::default();
    for i in 0..count {
        let (img, truth) = corpus_card(i, seed, &ranges)?;
        let stem = format!("card_{i:04}");
        save_image(&img, dir.join(format!("{stem}.{ext}")), format)?;
        let json_path = dir.join(format!("{stem}.json"));
        let mut text = serde_json::to_string_pretty(&truth).expect("ground truth is serializable");
        text.push('\n');
        std::fs::write(&json_path, text).map_err(|e| io_error(&json_path, e))?;
    }
    println!("wrote {count} cards to {}", dir.display());
    Ok(())
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `3mp` gives a 4:3 card of that many megapixels; `WxH` is taken literally.
fn parse_size(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Config(format!("size must look like 3mp or 2000x1500, got {s:?}"));
    let lower = s.trim().to_ascii_lowercase();
    if let Some(mp) = lower.strip_suffix("mp") {
        let mp: u64 = mp.parse().map_err(|_| bad())?;
        if mp == 0 || mp > 100 {
            return Err(bad());
        }
        let w = (mp * 4_000_000 / 3).isqrt() as u32;
        return Ok((w, w * 3 / 4));
    }
    let (w, h) = lower.split_once('x').ok_or_else(bad)?;
    let (w, h) = (w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?);
    if w < 64 || h < 64 {
        return Err(bad());
    }
    Ok((w, h))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn run_bench(m: &ArgMatches) -> Result<()> {
    let cfg = load_config(m)?;
    let (width, height) = parse_size(m.get_one::<String>("size").expect("defaulted"))?;
    let repeat = *m.get_one::<u32>("repeat").expect("defaulted");
    let seed = *m.get_one::<u64>("seed").expect("defaulted");
    let ranges = CorpusRanges {
        width,
        height,
        ..CorpusRanges::default()
    };
    let (img, truth) = corpus_card(0, seed, &ranges)?;

    let mut runs: Vec<StageTimings> = Vec::with_capacity(repeat as usize);
    let mut chars = 0;
    for _ in 0..repeat {
        let r = process_card(&img, "bench", &cfg)?;
        chars = r.char_count();
        runs.push(r.timing);
    }
    let stage = |f: fn(&StageTimings) -> f64| median(runs.iter().map(f).collect());
    println!(
        "card {width}x{height}, {} glyphs, {chars} char boxes, {repeat} runs, parallelism {}",
        truth.char_count(),
        cfg.parallelism
    );
    println!("stage      median ms");
    println!("extract    {:9.3}", stage(|t| t.extract));
    println!("skew       {:9.3}", stage(|t| t.skew));
    println!("binarize   {:9.3}", stage(|t| t.binarize));
    println!("segment    {:9.3}", stage(|t| t.segment));
    println!("total      {:9.3}", stage(|t| t.total));
    Ok(())
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            // Help and version go to stdout with status 0; usage errors exit 2.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match matches.subcommand() {
        Some(("segment", m)) => run_segment(m),
        Some(("synth", m)) => run_synth(m),
        Some(("bench", m)) => run_bench(m),
        _ => unreachable!("subcommand is required"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // Bad settings are usage errors wherever they were given.
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
