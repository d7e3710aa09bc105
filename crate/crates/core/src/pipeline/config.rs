//! Effective pipeline configuration and its flat `key = value` form.
//!
//! The same keys are accepted by config files and CLI flags (with `-` in
//! place of `_`). Files allow blank lines and `#` comments.

use std::path::Path;

use serde_json::{json, Value};

use crate::binarize::BinarizeConfig;
use crate::error::{Error, Result};
use crate::region::FilterRules;
use crate::segment::SegmentConfig;
use crate::skew::SkewConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Block side for classification and grouping; 0 picks it from the image size.
    pub block_size: u32,
    pub spread_thresh: u32,
    pub ink_thresh: u8,
    /// Promote dark background blocks bordering foreground blocks.
    pub grow_blocks: bool,
    /// Ink components of at most this many pixels are dropped before grouping.
    pub speck_size: u32,
    pub filter: FilterRules,
    pub skew: SkewConfig,
    /// When false, skew estimation and correction are bypassed.
    pub deskew: bool,
    pub binarize: BinarizeConfig,
    pub segment: SegmentConfig,
    pub emit_annotated: bool,
    pub emit_timing: bool,
    /// Worker threads for per-region work; 0 means one per core.
    pub parallelism: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            block_size: 0,
            spread_thresh: 16,
            ink_thresh: 128,
            grow_blocks: true,
            speck_size: 2,
            filter: FilterRules::default(),
            skew: SkewConfig::default(),
            deskew: true,
            binarize: BinarizeConfig::default(),
            segment: SegmentConfig::default(),
            emit_annotated: false,
            emit_timing: false,
            parallelism: 1,
        }
    }
}

/// Every recognized key, in echo order.
pub const KEYS: &[&str] = &[
    "block_size",
    "spread_thresh",
    "ink_thresh",
    "grow_blocks",
    "speck_size",
    "min_area",
    "min_h_permille",
    "max_h_permille",
    "max_aspect",
    "min_density_permille",
    "max_density_permille",
    "epsilon",
    "max_angle",
    "lut_step",
    "skew_denominator",
    "skew_passes",
    "anchor_groups",
    "search_range",
    "search_step",
    "combine_sides",
    "deskew",
    "offset",
    "min_contrast",
    "line_thresh_permille",
    "min_band_frac",
    "merge_gap_frac",
    "emit_annotated",
    "emit_timing",
    "parallelism",
];

/// One-line description of a key, for command-line help.
pub fn key_help(key: &str) -> &'static str {
    match key {
        "block_size" => "Block side in pixels; 0 derives it from the image size",
        "spread_thresh" => "Mean absolute deviation above which a block is foreground",
        "ink_thresh" => "Intensity below which a foreground pixel is ink",
        "grow_blocks" => "Promote dark background blocks next to foreground (true/false)",
        "speck_size" => "Drop ink components of at most this many pixels; 0 keeps all",
        "min_area" => "Minimum ink pixels per region",
        "min_h_permille" => "Minimum region height, per-mille of card height",
        "max_h_permille" => "Maximum region height, per-mille of card height",
        "max_aspect" => "Maximum region width / height",
        "min_density_permille" => "Minimum ink per bbox pixel, per-mille",
        "max_density_permille" => "Maximum ink per bbox pixel, per-mille",
        "epsilon" => "Largest disagreement of the three profile angles, centidegrees",
        "max_angle" => "Skew estimates are clamped to +-this, centidegrees",
        "lut_step" => "Angle quantization, a multiple of 25 centidegrees",
        "skew_denominator" => "Slope denominators: geometric or paper",
        "skew_passes" => "Profile estimation passes (1-8)",
        "anchor_groups" => "Survivor groups per anchor median; 0 uses single columns",
        "search_range" => "Coarse skew search covers +-this, centidegrees",
        "search_step" => "Coarse skew search step in centidegrees; 0 disables it",
        "combine_sides" => "Average both profiles when both are consistent (true/false)",
        "deskew" => "Estimate and correct skew (true/false)",
        "offset" => "Added to the binarization threshold",
        "min_contrast" => "Regions with a smaller intensity span come out blank",
        "line_thresh_permille" => "Row ink count for a line candidate, per-mille of width",
        "min_band_frac" => "Drop bands thinner than this per-mille of the median band",
        "merge_gap_frac" => "Merge bands closer than this per-mille of the median band",
        "emit_annotated" => "Also write the annotated image (true/false)",
        "emit_timing" => "Include per-stage timing in the JSON (true/false)",
        "parallelism" => "Worker threads for per-region work; 0 uses every core",
        _ => "",
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_size != 0 && self.block_size < 4 {
            return Err(Error::Config(format!(
                "block_size {} must be 0 (auto) or at least 4",
                self.block_size
            )));
        }
        self.filter.validate()?;
        self.skew.validate()?;
        self.binarize.validate()?;
        self.segment.validate()
    }

    /// Sets one key. Accepts `snake_case` or `kebab-case` names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        match k {
            "block_size" => self.block_size = parse(k, value)?,
            "spread_thresh" => self.spread_thresh = parse(k, value)?,
            "ink_thresh" => self.ink_thresh = parse(k, value)?,
            "grow_blocks" => self.grow_blocks = parse(k, value)?,
            "speck_size" => self.speck_size = parse(k, value)?,
            "min_area" => self.filter.min_area = parse(k, value)?,
            "min_h_permille" => self.filter.min_h_permille = parse(k, value)?,
            "max_h_permille" => self.filter.max_h_permille = parse(k, value)?,
            "max_aspect" => self.filter.max_aspect = parse(k, value)?,
            "min_density_permille" => self.filter.min_density_permille = parse(k, value)?,
            "max_density_permille" => self.filter.max_density_permille = parse(k, value)?,
            "epsilon" => self.skew.epsilon = parse(k, value)?,
            "max_angle" => self.skew.max_angle = parse(k, value)?,
            "lut_step" => self.skew.lut_step = parse(k, value)?,
            "skew_denominator" => self.skew.denominator = value.trim().parse()?,
            "skew_passes" => self.skew.passes = parse(k, value)?,
            "anchor_groups" => self.skew.anchor_groups = parse(k, value)?,
            "search_range" => self.skew.search_range = parse(k, value)?,
            "search_step" => self.skew.search_step = parse(k, value)?,
            "combine_sides" => self.skew.combine_sides = parse(k, value)?,
            "deskew" => self.deskew = parse(k, value)?,
            "offset" => self.binarize.offset = parse(k, value)?,
            "min_contrast" => self.binarize.min_contrast = parse(k, value)?,
            "line_thresh_permille" => self.segment.line_thresh_permille = parse(k, value)?,
            "min_band_frac" => self.segment.min_band_frac = parse(k, value)?,
            "merge_gap_frac" => self.segment.merge_gap_frac = parse(k, value)?,
            "emit_annotated" => self.emit_annotated = parse(k, value)?,
            "emit_timing" => self.emit_timing = parse(k, value)?,
            "parallelism" => self.parallelism = parse(k, value)?,
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` document on top of `self`.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_str(&text)
    }

    /// Effective settings that influence results. Worker count is left out
    /// so that output is identical for any degree of parallelism.
    pub fn echo(&self) -> Value {
        json!({
            "block_size": self.block_size,
            "spread_thresh": self.spread_thresh,
            "ink_thresh": self.ink_thresh,
            "grow_blocks": self.grow_blocks,
            "speck_size": self.speck_size,
            "min_area": self.filter.min_area,
            "min_h_permille": self.filter.min_h_permille,
            "max_h_permille": self.filter.max_h_permille,
            "max_aspect": self.filter.max_aspect,
            "min_density_permille": self.filter.min_density_permille,
            "max_density_permille": self.filter.max_density_permille,
            "epsilon": self.skew.epsilon,
            "max_angle": self.skew.max_angle,
            "lut_step": self.skew.lut_step,
            "skew_denominator": self.skew.denominator,
            "skew_passes": self.skew.passes,
            "anchor_groups": self.skew.anchor_groups,
            "search_range": self.skew.search_range,
            "search_step": self.skew.search_step,
            "combine_sides": self.skew.combine_sides,
            "deskew": self.deskew,
            "offset": self.binarize.offset,
            "min_contrast": self.binarize.min_contrast,
            "line_thresh_permille": self.segment.line_thresh_permille,
            "min_band_frac": self.segment.min_band_frac,
            "merge_gap_frac": self.segment.merge_gap_frac,
        })
    }
}
