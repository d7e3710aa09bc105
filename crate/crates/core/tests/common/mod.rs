//! Fixtures, oracles and property checks shared by the integration suites.

#![allow(dead_code)]

pub mod reference;

use cardseg::binarize::binarize_region;
use cardseg::pipeline::{extract_regions, process_card, to_json, PipelineConfig};
use cardseg::raster::{decode_pgm, encode_pgm, rotate_nearest};
use cardseg::region::classify_blocks;
use cardseg::segment::{region_lines, segment_chars};
use cardseg::skew::{deskew, estimate_skew};
use cardseg::synth::{render_card, CardSpec, TextLine, XorShift64Star, CORPUS_ALPHABET};
use cardseg::{GrayImage, Rect};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

pub fn gray_image(max_w: u32, max_h: u32) -> impl Strategy<Value = GrayImage> {
    (1..=max_w, 1..=max_h).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), (w * h) as usize)
            .prop_map(move |p| GrayImage::from_raw(w, h, p).unwrap())
    })
}

/// An image with values in `0..=200` and a shift that cannot clip it.
pub fn shiftable_image(max_w: u32, max_h: u32) -> impl Strategy<Value = (GrayImage, u8)> {
    (1..=max_w, 1..=max_h, 0u8..=55).prop_flat_map(|(w, h, c)| {
        proptest::collection::vec(0u8..=200, (w * h) as usize)
            .prop_map(move |p| (GrayImage::from_raw(w, h, p).unwrap(), c))
    })
}

pub fn shifted(img: &GrayImage, c: u8) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y) + c).unwrap()
}

pub fn check_pgm_roundtrip(img: &GrayImage) -> Check {
    let back = decode_pgm(&encode_pgm(img)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, img);
    Ok(())
}

pub fn check_rotation_identity(img: &GrayImage) -> Check {
    prop_assert_eq!(&rotate_nearest(img, 0, 255), img);
    Ok(())
}

pub fn check_binarize_shift(img: &GrayImage, c: u8) -> Check {
    let cfg = Default::default();
    prop_assert_eq!(
        binarize_region(img, &cfg),
        binarize_region(&shifted(img, c), &cfg)
    );
    Ok(())
}

pub fn check_blocks_shift(img: &GrayImage, c: u8, block: u32) -> Check {
    let a = classify_blocks(img, block, 16).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = classify_blocks(&shifted(img, c), block, 16)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a, b);
    Ok(())
}

fn inside(inner: &Rect, outer: &Rect) -> bool {
    inner.x >= outer.x
        && inner.y >= outer.y
        && inner.right() <= outer.right()
        && inner.bottom() <= outer.bottom()
}

/// Nesting, disjointness and completeness of lines and characters for every
/// region of a card, recomputed stage by stage and compared against the
/// pipeline's own output.
pub fn check_segmentation(img: &GrayImage, cfg: &PipelineConfig) -> Result<usize, String> {
    let result = process_card(img, "card", cfg).map_err(|e| e.to_string())?;
    let regions = extract_regions(img, cfg).map_err(|e| e.to_string())?;
    if regions.len() != result.regions.len() {
        return Err("pipeline and stage-wise region counts differ".into());
    }
    let mut chars = 0;
    for (region, reported) in regions.iter().zip(&result.regions) {
        let est = estimate_skew(region, &cfg.skew);
        let straight = deskew(region, &est).map_err(|e| e.to_string())?;
        let bin = binarize_region(&straight.gray, &cfg.binarize);
        let bounds = Rect::new(0, 0, bin.width(), bin.height());
        let lines = region_lines(&bin, &cfg.segment);
        if lines.len() != reported.lines.len() {
            return Err("line count differs from pipeline output".into());
        }
        for pair in lines.windows(2) {
            if pair[0].bottom >= pair[1].top {
                return Err(format!(
                    "lines {:?} and {:?} overlap or are unsorted",
                    pair[0], pair[1]
                ));
            }
        }
        for (line, rep) in lines.iter().zip(&reported.lines) {
            if !inside(&line.bbox, &bounds) {
                return Err(format!("line {:?} outside region raster", line.bbox));
            }
            let boxes: Vec<Rect> = segment_chars(&bin, line)
                .into_iter()
                .map(|c| c.bbox)
                .collect();
            if boxes != rep.chars || line.bbox != rep.bbox {
                return Err("boxes differ from pipeline output".into());
            }
            for b in &boxes {
                if !inside(b, &line.bbox) {
                    return Err(format!("char {b:?} outside line {:?}", line.bbox));
                }
            }
            for pair in boxes.windows(2) {
                if pair[0].right() > pair[1].x {
                    return Err(format!(
                        "chars {:?} and {:?} overlap or are unsorted",
                        pair[0], pair[1]
                    ));
                }
            }
            for y in line.top..=line.bottom {
                for x in 0..bin.width() {
                    if bin.is_ink(x, y) {
                        let owners = boxes.iter().filter(|b| b.x <= x && x < b.right()).count();
                        if owners != 1 {
                            return Err(format!(
                                "ink at ({x},{y}) is in {owners} char column spans"
                            ));
                        }
                    }
                }
            }
            chars += boxes.len();
        }
    }
    Ok(chars)
}

pub fn check_parallel_determinism(img: &GrayImage, cfg: &PipelineConfig) -> Result<(), String> {
    let run = |p: usize| {
        let cfg = PipelineConfig {
            parallelism: p,
            emit_timing: false,
            ..*cfg
        };
        process_card(img, "card", &cfg)
            .map(|r| to_json(&r))
            .map_err(|e| e.to_string())
    };
    let one = run(1)?;
    if one != run(8)? {
        return Err("JSON differs between 1 and 8 workers".into());
    }
    Ok(())
}

/// `2 * intersection >= union`, in exact integers.
pub fn iou_at_least_half(a: &Rect, b: &Rect) -> bool {
    let x0 = a.x.max(b.x) as u64;
    let y0 = a.y.max(b.y) as u64;
    let x1 = a.right().min(b.right()) as u64;
    let y1 = a.bottom().min(b.bottom()) as u64;
    if x1 <= x0 || y1 <= y0 {
        return false;
    }
    let inter = (x1 - x0) * (y1 - y0);
    let union = a.w as u64 * a.h as u64 + b.w as u64 * b.h as u64 - inter;
    2 * inter >= union
}

/// Ground-truth boxes matched by exactly one predicted box.
pub fn matched_truths(predicted: &[Rect], truth: &[Rect]) -> usize {
    truth
        .iter()
        .filter(|t| predicted.iter().filter(|p| iou_at_least_half(p, t)).count() == 1)
        .count()
}

/// A card holding one paragraph of 1 to 3 lines, each at least 300 px wide,
/// rotated by a uniform angle in +-10 degrees. Lines carry no word gaps, which
/// at the larger scale are wide enough to split a line into several regions.
pub fn paragraph_card(index: u64, seed: u64) -> (GrayImage, i32) {
    let mut rng = XorShift64Star::new(seed.wrapping_add(index));
    let alphabet: Vec<char> = CORPUS_ALPHABET.chars().collect();
    let mut spec = CardSpec::blank(1000, 800);
    let scale = rng.range_u32(2, 3);
    let (glyph_w, glyph_h, spacing) = (5 * scale, 7 * scale, scale);
    let lines = rng.range_u32(1, 3);
    for l in 0..lines {
        let n = rng.range_u32(30, 40).min(560 / (glyph_w + spacing));
        let text: String = (0..n)
            .map(|_| alphabet[rng.below(alphabet.len() as u32) as usize])
            .collect();
        spec.lines.push(TextLine {
            text,
            x: 220,
            y: 340 + l * 2 * glyph_h,
            glyph_w,
            glyph_h,
            spacing,
        });
    }
    spec.skew_centideg = rng.range_i32(-1000, 1000);
    spec.noise_permille = rng.range_u32(0, 5);
    let (img, truth) = render_card(&spec, seed.wrapping_add(index)).unwrap();
    (img, truth.true_angle)
}
