//! End-to-end card processing: extraction, skew correction, binarization
//! and segmentation, plus JSON and annotated-image output.
//!
//! Line and character boxes are reported in the coordinates of their
//! region's deskewed raster. Each region carries the transform that maps
//! that raster back onto the card; [`RegionResult::to_card`] applies it.

pub mod config;

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binarize::binarize_region;
use crate::error::{Error, Result};
use crate::raster::{annotate_boxes, save_image, BinaryImage, GrayImage, ImageFormat, Rect};
use crate::region::{
    classify_blocks, default_block_size, filter_nontext, foreground_mask, grow_foreground,
    label_components, remove_specks, RegionFrame, TextRegion, PAPER,
};
use crate::segment::{region_lines, segment_chars};
use crate::skew::{deskew, estimate_skew, SkewEstimate, SkewSource};
pub use config::PipelineConfig;

pub const SCHEMA: &str = "cardseg/1";

/// Outline intensities used by [`emit_annotated`].
pub const CHAR_STROKE: u8 = 0;
pub const LINE_STROKE: u8 = 96;
pub const REGION_STROKE: u8 = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageSize {
    pub width: u32,
    pub height: u32,
}

/// Wall-clock milliseconds per stage. Per-region stages are summed over
/// regions, so under parallelism they can exceed `total`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub extract: f64,
    pub skew: f64,
    pub binarize: f64,
    pub segment: f64,
    pub total: f64,
}

/// Placement of a region's deskewed raster relative to the card.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTransform {
    /// Card rectangle the region was extracted from.
    pub source: Rect,
    /// Rotation applied to the source crop, centidegrees (the negated skew).
    pub angle: i32,
    /// Size of the rotated canvas.
    pub canvas: ImageSize,
    /// The region raster within the canvas; line and char boxes are relative to it.
    pub raster: Rect,
}

impl RegionTransform {
    fn frame(&self) -> RegionFrame {
        RegionFrame {
            source: self.source,
            angle: self.angle,
            canvas_w: self.canvas.width,
            canvas_h: self.canvas.height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineResult {
    pub bbox: Rect,
    pub chars: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionResult {
    /// Card-space bounding box.
    pub bbox: Rect,
    pub skew_centideg: i32,
    pub skew_source: SkewSource,
    pub skew_consistent: bool,
    pub transform: RegionTransform,
    pub lines: Vec<LineResult>,
}

impl RegionResult {
    /// Card-space box around a raster-space box, clipped to the card.
    pub fn to_card(&self, r: Rect, card: ImageSize) -> Option<Rect> {
        let t = &self.transform;
        t.frame().rect_to_card(
            r.translate(t.raster.x, t.raster.y),
            Rect::new(0, 0, card.width, card.height),
        )
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().map(|l| l.chars.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardSegmentation {
    pub schema: String,
    pub source: String,
    pub image_size: ImageSize,
    pub regions: Vec<RegionResult>,
    pub config_echo: serde_json::Value,
    /// Present in output only when timing emission is enabled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<StageTimings>,
    /// Always measured; not serialized.
    #[serde(skip)]
    pub timing: StageTimings,
}

impl CardSegmentation {
    pub fn char_count(&self) -> usize {
        self.regions.iter().map(RegionResult::char_count).sum()
    }

    /// Card-space boxes of every region, line and character.
    pub fn card_boxes(&self) -> CardBoxes {
        let mut out = CardBoxes::default();
        for r in &self.regions {
            out.regions.push(r.bbox);
            for line in &r.lines {
                out.lines.extend(r.to_card(line.bbox, self.image_size));
                out.chars.extend(
                    line.chars
                        .iter()
                        .filter_map(|c| r.to_card(*c, self.image_size)),
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CardBoxes {
    pub regions: Vec<Rect>,
    pub lines: Vec<Rect>,
    pub chars: Vec<Rect>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

/// Text regions of a card: block classification, speck removal, grouping
/// and non-text elimination.
pub fn extract_regions(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<TextRegion>> {
    let block = match cfg.block_size {
        0 => default_block_size(img.width(), img.height()),
        b => b,
    };
    let mut grid = classify_blocks(img, block, cfg.spread_thresh)?;
    if cfg.grow_blocks {
        grid = grow_foreground(img, &grid, cfg.ink_thresh);
    }
    let mask = foreground_mask(img, &grid, cfg.ink_thresh)?;
    let (mask, card) = if cfg.speck_size > 0 {
        let clean = remove_specks(&mask, cfg.speck_size);
        // Removed specks must not come back through the region's gray crop.
        let mut card = img.clone();
        for ((p, &before), &after) in card
            .pixels_mut()
            .iter_mut()
            .zip(mask.pixels())
            .zip(clean.pixels())
        {
            if before != after {
                *p = PAPER;
            }
        }
        (clean, std::borrow::Cow::Owned(card))
    } else {
        (mask, std::borrow::Cow::Borrowed(img))
    };
    let regions = label_components(&mask, &card, block)?;
    Ok(filter_nontext(regions, img.bounds(), &cfg.filter))
}

#[derive(Default)]
struct RegionTimes {
    skew: Duration,
    binarize: Duration,
    segment: Duration,
}

fn process_region(
    region: &TextRegion,
    cfg: &PipelineConfig,
) -> Result<(RegionResult, RegionTimes)> {
    let mut times = RegionTimes::default();

    let t = Instant::now();
    let est = if cfg.deskew {
        estimate_skew(region, &cfg.skew)
    } else {
        SkewEstimate::NONE
    };
    let straight = deskew(region, &est)?;
    times.skew = t.elapsed();

    let t = Instant::now();
    let bin: BinaryImage = binarize_region(&straight.gray, &cfg.binarize);
    times.binarize = t.elapsed();

    let t = Instant::now();
    let lines = region_lines(&bin, &cfg.segment)
        .iter()
        .map(|band| LineResult {
            bbox: band.bbox,
            chars: segment_chars(&bin, band)
                .into_iter()
                .map(|c| c.bbox)
                .collect(),
        })
        .collect();
    times.segment = t.elapsed();

    let frame = straight.frame;
    Ok((
        RegionResult {
            bbox: region.card_bbox(),
            skew_centideg: straight.skew_centideg,
            skew_source: est.source,
            skew_consistent: est.consistent,
            transform: RegionTransform {
                source: frame.source,
                angle: frame.angle,
                canvas: ImageSize {
                    width: frame.canvas_w,
                    height: frame.canvas_h,
                },
                raster: straight.bbox,
            },
            lines,
        },
        times,
    ))
}

/// Runs the full pipeline on one card. `source` is recorded verbatim.
pub fn process_card(
    img: &GrayImage,
    source: &str,
    cfg: &PipelineConfig,
) -> Result<CardSegmentation> {
    cfg.validate()?;
    let start = Instant::now();
    let regions = extract_regions(img, cfg)?;
    let extract = start.elapsed();

    let run = || -> Result<Vec<(RegionResult, RegionTimes)>> {
        if cfg.parallelism == 1 {
            regions.iter().map(|r| process_region(r, cfg)).collect()
        } else {
            regions.par_iter().map(|r| process_region(r, cfg)).collect()
        }
    };
    let processed = if cfg.parallelism == 1 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.parallelism)))?
            .install(run)?
    };

    let mut timing = StageTimings {
        extract: ms(extract),
        ..Default::default()
    };
    let mut results = Vec::with_capacity(processed.len());
    for (r, t) in processed {
        timing.skew += ms(t.skew);
        timing.binarize += ms(t.binarize);
        timing.segment += ms(t.segment);
        results.push(r);
    }
    timing.total = ms(start.elapsed());

    Ok(CardSegmentation {
        schema: SCHEMA.into(),
        source: source.into(),
        image_size: ImageSize {
            width: img.width(),
            height: img.height(),
        },
        regions: results,
        config_echo: cfg.echo(),
        timing_ms: cfg.emit_timing.then_some(timing),
        timing,
    })
}

/// Serialized form written by [`emit_json`]: pretty-printed, newline-terminated.
pub fn to_json(result: &CardSegmentation) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("result is always serializable");
    s.push('\n');
    s
}

pub fn emit_json(result: &CardSegmentation, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(result)).map_err(|e| Error::io(path, e))
}

/// The card with region, line and character outlines drawn on it.
pub fn annotate(result: &CardSegmentation, img: &GrayImage) -> Result<GrayImage> {
    let boxes = result.card_boxes();
    let out = annotate_boxes(img, &boxes.regions, REGION_STROKE)?;
    let out = annotate_boxes(&out, &boxes.lines, LINE_STROKE)?;
    annotate_boxes(&out, &boxes.chars, CHAR_STROKE)
}

pub fn emit_annotated(result: &CardSegmentation, img: &GrayImage, path: &Path) -> Result<()> {
    let format = ImageFormat::from_path(path);
    save_image(&annotate(result, img)?, path, format)
}
