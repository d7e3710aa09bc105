//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. Exits nonzero if any criterion fails.
//!
//! Runs without the libtest harness so the summary is always printed and the
//! timing criterion does not compete with other tests for the CPU.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use cardseg::pipeline::{annotate, process_card, to_json, PipelineConfig, StageTimings};
use cardseg::raster::{encode_pgm, load_image};
use cardseg::skew::{
    compute_angles_with, filter_outliers, iatan2, profile_stats, Anchor, Anchors, Denominator,
    Profile, ProfileStats, Side,
};
use cardseg::synth::{corpus_card, CorpusRanges, XorShift64Star};
use cardseg::trig::iatan2_with_step;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

use common::reference::{self, TanTable};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn char_accuracy() -> Outcome {
    let ranges = CorpusRanges::default();
    let cfg = PipelineConfig::default();
    let per_card: Vec<Result<(usize, usize), String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let (img, truth) = corpus_card(i, 42, &ranges).map_err(|e| e.to_string())?;
            let result = process_card(&img, "corpus", &cfg).map_err(|e| e.to_string())?;
            let predicted = result.card_boxes().chars;
            let truth: Vec<_> = truth.char_boxes.into_iter().flatten().collect();
            Ok((common::matched_truths(&predicted, &truth), truth.len()))
        })
        .collect();
    let mut matched = 0;
    let mut total = 0;
    for r in per_card {
        match r {
            Ok((m, t)) => {
                matched += m;
                total += t;
            }
            Err(e) => return outcome(false, format!("pipeline error: {e}")),
        }
    }
    let pct = 100.0 * matched as f64 / total as f64;
    outcome(
        pct >= 95.0,
        format!("{matched}/{total} characters matched at IoU >= 0.5 ({pct:.2}%, need >= 95%)"),
    )
}

fn skew_recovery() -> Outcome {
    let cfg = PipelineConfig::default();
    let errors: Vec<Result<i32, String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let (img, truth) = common::paragraph_card(i, 7_000);
            let result = process_card(&img, "paragraph", &cfg).map_err(|e| e.to_string())?;
            let region = result
                .regions
                .iter()
                .max_by_key(|r| r.bbox.area())
                .ok_or_else(|| format!("card {i}: no region found"))?;
            if region.bbox.w < 300 {
                return Err(format!("card {i}: region only {} px wide", region.bbox.w));
            }
            Ok((region.skew_centideg - truth).abs())
        })
        .collect();
    let mut errs = Vec::with_capacity(errors.len());
    for e in errors {
        match e {
            Ok(v) => errs.push(v),
            Err(msg) => return outcome(false, msg),
        }
    }
    errs.sort_unstable();
    let within = errs.iter().filter(|&&e| e <= 100).count();
    let median = errs[errs.len() / 2];
    outcome(
        within >= 95 && median <= 50,
        format!(
            "{within}/100 within 100 cdeg (need >= 95), median error {median} cdeg (need <= 50), worst {}",
            errs[errs.len() - 1]
        ),
    )
}

fn runtime() -> Outcome {
    let ranges = CorpusRanges {
        width: 2000,
        height: 1500,
        ..CorpusRanges::default()
    };
    let (img, _) = match corpus_card(0, 42, &ranges) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let cfg = PipelineConfig::default();
    let mut runs: Vec<StageTimings> = Vec::new();
    for _ in 0..5 {
        match process_card(&img, "bench", &cfg) {
            Ok(r) => runs.push(r.timing),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let median = |f: fn(&StageTimings) -> f64| {
        let mut v: Vec<f64> = runs.iter().map(f).collect();
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let total = median(|t| t.total);
    outcome(
        total <= 1100.0,
        format!(
            "3 MP median total {total:.1} ms over 5 runs, 1 worker (need <= 1100); extract {:.1}, skew {:.1}, binarize {:.2}, segment {:.2}",
            median(|t| t.extract),
            median(|t| t.skew),
            median(|t| t.binarize),
            median(|t| t.segment)
        ),
    )
}

fn random_heights(rng: &mut XorShift64Star) -> Vec<Option<u32>> {
    let n = rng.range_u32(1, 300) as usize;
    let max = rng.range_u32(0, 400);
    let absent = rng.range_u32(0, 300);
    (0..n)
        .map(|_| (!rng.chance(absent)).then(|| rng.range_u32(0, max)))
        .collect()
}

fn integer_contract() -> Outcome {
    const CASES: usize = 10_000;
    let table = TanTable::new();
    let mut rng = XorShift64Star::new(2024);
    let mut mismatches = Vec::new();
    let steps = [25, 50, 100, 250];

    // Slopes landing exactly on, and one unit below, every rounding boundary.
    for eighths in (1..720).step_by(2) {
        let t = reference::tan_q16(eighths) as i64;
        for dy in [t, t - 1] {
            if iatan2(dy, 65_536).ok() != table.iatan2(dy, 65_536, 25) {
                mismatches.push(format!("iatan2({dy}, 65536)"));
            }
        }
    }
    for _ in 0..CASES {
        let scale = [10i64, 1_000, 100_000, 10_000_000][rng.below(4) as usize];
        let dx = rng.range_i32(-2, i32::MAX) as i64 % scale;
        let dy = rng.range_i32(i32::MIN + 1, i32::MAX) as i64 % (scale * 60);
        let step = steps[rng.below(4) as usize];
        if iatan2_with_step(dy, dx, step).ok() != table.iatan2(dy, dx, step) {
            mismatches.push(format!("iatan2_with_step({dy}, {dx}, {step})"));
        }
    }
    for _ in 0..CASES {
        let heights = random_heights(&mut rng);
        let profile = Profile {
            side: Side::Bottom,
            heights: heights.clone(),
        };
        let ours = profile_stats(&profile).ok().map(|s| (s.mu, s.tau));
        let theirs = reference::profile_stats(&heights);
        if ours != theirs {
            mismatches.push(format!("profile_stats {heights:?}"));
            continue;
        }
        let Some((mu, tau)) = theirs else { continue };
        // Also probe bands other than the profile's own.
        let (mu, tau) = if rng.chance(300) {
            (
                mu + rng.range_i32(-20, 20) as i64,
                rng.range_i32(0, 30) as i64,
            )
        } else {
            (mu, tau)
        };
        let ours = filter_outliers(&profile, &ProfileStats { mu, tau })
            .ok()
            .map(|p| p.heights);
        if ours != reference::filter_outliers(&heights, mu, tau) {
            mismatches.push(format!("filter_outliers mu {mu} tau {tau} {heights:?}"));
        }
    }
    for _ in 0..CASES {
        let mut anchor = || (rng.range_i32(0, 600) as i64, rng.range_i32(0, 200) as i64);
        let (a, b, c) = (anchor(), anchor(), anchor());
        let paper = rng.chance(500);
        let step = steps[rng.below(4) as usize];
        let anchors = Anchors {
            h1: Anchor {
                column: a.0 as usize,
                height: a.1,
            },
            h2: Anchor {
                column: b.0 as usize,
                height: b.1,
            },
            h3: Anchor {
                column: c.0 as usize,
                height: c.1,
            },
            d: b.0 - a.0,
        };
        let denominator = if paper {
            Denominator::Paper
        } else {
            Denominator::Geometric
        };
        let ours = compute_angles_with(&anchors, denominator, step)
            .ok()
            .map(|t| (t.alpha, t.beta, t.gamma));
        if ours != reference::compute_angles(&table, a, b, c, paper, step) {
            mismatches.push(format!(
                "compute_angles {a:?} {b:?} {c:?} paper={paper} step={step}"
            ));
        }
    }

    // Against the real arctangent on slopes up to 45 degrees.
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let dx = rng.range_i32(1, 1_000_000) as i64;
        let dy = rng.range_i32(-1_000_000, 1_000_000) as i64 * dx / 1_000_000;
        let exact = (dy as f64).atan2(dx as f64).to_degrees() * 100.0;
        worst = worst.max((iatan2(dy, dx).unwrap() as f64 - exact).abs());
    }

    let detail = format!(
        "{} reference mismatches over {} differential cases; worst iatan2 error {worst:.2} cdeg on 1000 slopes (need <= 25)",
        mismatches.len(),
        4 * CASES + 720
    );
    let detail = match mismatches.first() {
        Some(m) => format!("{detail}; first: {m}"),
        None => detail,
    };
    outcome(mismatches.is_empty() && worst <= 25.0, detail)
}

fn run_property<S: proptest::strategy::Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> common::Check,
    failures: &mut Vec<String>,
) {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    if let Err(e) = runner.run(&strategy, check) {
        failures.push(format!("{name}: {e}"));
    }
}

fn property_suites() -> Outcome {
    let mut failures = Vec::new();
    run_property(
        "raster round-trip",
        500,
        common::gray_image(64, 64),
        |img| common::check_pgm_roundtrip(&img),
        &mut failures,
    );
    run_property(
        "rotation identity",
        200,
        common::gray_image(64, 64),
        |img| common::check_rotation_identity(&img),
        &mut failures,
    );
    run_property(
        "binarization brightness shift",
        200,
        common::shiftable_image(48, 48),
        |(img, c)| common::check_binarize_shift(&img, c),
        &mut failures,
    );
    run_property(
        "block classification brightness shift",
        200,
        (common::shiftable_image(96, 96), 4u32..=16),
        |((img, c), block)| common::check_blocks_shift(&img, c, block),
        &mut failures,
    );

    let ranges = CorpusRanges::default();
    let cfg = PipelineConfig::default();
    let seg: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|i| {
            let (img, _) = corpus_card(i, 42, &ranges).ok()?;
            common::check_segmentation(&img, &cfg)
                .err()
                .map(|e| format!("segmentation, card {i}: {e}"))
        })
        .collect();
    failures.extend(seg);

    for i in 0..10u64 {
        let (img, _) = corpus_card(i, 42, &ranges).expect("corpus card");
        if let Err(e) = common::check_parallel_determinism(&img, &cfg) {
            failures.push(format!("determinism, card {i}: {e}"));
        }
    }
    let detail = format!(
        "round-trip 500, rotation identity 200, brightness shift 200 + 200, segmentation on 200 corpus cards, determinism 1 vs 8 workers on 10 cards: {} failure(s)",
        failures.len()
    );
    let detail = match failures.first() {
        Some(f) => format!("{detail}; first: {f}"),
        None => detail,
    };
    outcome(failures.is_empty(), detail)
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Regenerates the fixture card and its golden outputs.
fn bless(dir: &std::path::Path) -> cardseg::Result<()> {
    let ranges = CorpusRanges {
        width: 800,
        height: 600,
        ..CorpusRanges::default()
    };
    let (img, _) = corpus_card(3, 42, &ranges)?;
    std::fs::create_dir_all(dir).expect("fixture directory");
    std::fs::write(dir.join("card.pgm"), encode_pgm(&img)).expect("write fixture card");
    let r = process_card(&img, "card.pgm", &PipelineConfig::default())?;
    std::fs::write(dir.join("card.json"), to_json(&r)).expect("write golden JSON");
    std::fs::write(
        dir.join("card.annotated.pgm"),
        encode_pgm(&annotate(&r, &img)?),
    )
    .expect("write golden PGM");
    Ok(())
}

fn golden() -> Outcome {
    let dir = fixtures();
    if std::env::var_os("CARDSEG_BLESS").is_some_and(|v| v == "1") {
        if let Err(e) = bless(&dir) {
            return outcome(false, format!("blessing failed: {e}"));
        }
    }
    let img = match load_image(dir.join("card.pgm")) {
        Ok(i) => i,
        Err(e) => return outcome(false, e.to_string()),
    };
    let cfg = PipelineConfig::default();
    let mut json = Vec::new();
    let mut pgm = Vec::new();
    for _ in 0..2 {
        let r = process_card(&img, "card.pgm", &cfg).expect("fixture card segments");
        json.push(to_json(&r).into_bytes());
        pgm.push(encode_pgm(&annotate(&r, &img).expect("annotation fits")));
    }
    let want_json = std::fs::read(dir.join("card.json")).unwrap_or_default();
    let want_pgm = std::fs::read(dir.join("card.annotated.pgm")).unwrap_or_default();
    let stable = json[0] == json[1] && pgm[0] == pgm[1];
    let json_ok = json[0] == want_json;
    let pgm_ok = pgm[0] == want_pgm;
    outcome(
        stable && json_ok && pgm_ok,
        format!(
            "repeat runs identical: {stable}; JSON matches golden: {json_ok}; annotated PGM matches golden: {pgm_ok}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 character segmentation accuracy", char_accuracy),
        ("2 skew recovery", skew_recovery),
        ("3 runtime", runtime),
        ("4 integer arithmetic contract", integer_contract),
        ("5 property suites", property_suites),
        ("6 golden fixtures", golden),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({}) [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/6 criteria passed", 6 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
